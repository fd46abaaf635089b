#pragma once

#include <Eigen/Core>

#include <memory>
#include <string>

namespace riemopt {

using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class ManifoldKind { Sphere, Oblique };

/// Shape descriptor for the unit sphere S^{n-1} (stored as n x 1) or the
/// oblique manifold OB(n, p) of n x p matrices with unit-norm columns.
class Manifold {
public:
  static Manifold sphere(Index n);
  static Manifold oblique(Index n, Index p);

  ManifoldKind kind() const noexcept { return kind_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  /// Intrinsic dimension, (n - 1) * p.
  Index dimension() const noexcept { return (rows_ - 1) * cols_; }
  std::string name() const;

  friend bool operator==(const Manifold&, const Manifold&) = default;

private:
  Manifold(ManifoldKind kind, Index rows, Index cols) : kind_(kind), rows_(rows), cols_(cols) {}

  ManifoldKind kind_;
  Index rows_;
  Index cols_;
};

/// Immutable point on a manifold. Copies share storage.
class Point {
public:
  /// Normalizes every column of `ambient`. Throws SingularRetraction on a zero column.
  static Point normalized(const Manifold& manifold, Matrix ambient);
  /// Wraps an array that already has unit columns (checked to 1e-12).
  static Point from_unit(const Manifold& manifold, Matrix ambient);

  const Manifold& manifold() const noexcept { return manifold_; }
  const Matrix& ambient() const noexcept { return *coords_; }

  /// Same manifold and identical coordinates.
  bool same_as(const Point& other) const noexcept;

private:
  Point(Manifold manifold, std::shared_ptr<const Matrix> coords)
      : manifold_(manifold), coords_(std::move(coords)) {}

  Manifold manifold_;
  std::shared_ptr<const Matrix> coords_;
};

/// Tangent vector bound to its base point. Arithmetic requires a common base.
class Tangent {
public:
  /// Checks tangency to 1e-10 * ||ambient||; throws ContractViolation otherwise.
  Tangent(Point base, Matrix ambient);

  static Tangent zero(const Point& base);

  const Point& base() const noexcept { return base_; }
  const Matrix& ambient() const noexcept { return ambient_; }

  Tangent& operator+=(const Tangent& other);
  Tangent& operator-=(const Tangent& other);
  Tangent& operator*=(double scale);

  friend Tangent operator+(Tangent a, const Tangent& b) { return a += b; }
  friend Tangent operator-(Tangent a, const Tangent& b) { return a -= b; }
  friend Tangent operator*(double scale, Tangent a) { return a *= scale; }
  friend Tangent operator*(Tangent a, double scale) { return a *= scale; }
  friend Tangent operator-(Tangent a) { return a *= -1.0; }

private:
  struct Unchecked {};
  Tangent(Unchecked, Point base, Matrix ambient) : base_(std::move(base)), ambient_(std::move(ambient)) {}

  friend Tangent project_tangent(const Point& x, const Matrix& v);

  Point base_;
  Matrix ambient_;
};

enum class TransportKind { DifferentiatedRetraction, ProjectionTransport, InverseRetraction };

std::string to_string(TransportKind kind);

/// Largest column-norm deviation from 1.
double unit_residual(const Point& x);
/// Largest |<x_j, v_j>| over columns.
double tangency_residual(const Point& x, const Matrix& v);

/// Embedded Euclidean (Frobenius) metric at x.
double inner(const Point& x, const Tangent& u, const Tangent& v);
double inner(const Tangent& u, const Tangent& v);
double norm(const Tangent& u);

/// Metric-projection retraction: column-wise normalization of x + eta.
Point retract(const Point& x, const Tangent& eta);

/// Orthogonal projection of an ambient array onto T_x M.
Tangent project_tangent(const Point& x, const Matrix& v);

/// Moves xi from T_x M to T_{R_x(eta)} M.
///
/// InverseRetraction maps the displacement eta to -R_w^{-1}(x), w = R_x(eta);
/// it is linear on span{eta} only, so xi must be a multiple of eta.
Tangent transport(TransportKind kind, const Point& x, const Tangent& eta, const Tangent& xi);

/// Same as above with a precomputed destination; `destination` must equal retract(x, eta).
Tangent transport(TransportKind kind, const Point& x, const Tangent& eta, const Tangent& xi,
                  const Point& destination);

/// sigma = min{1, ||eta_prev|| / ||T(eta_prev)||}.
double scaling_sigma(const Point& x_next, double eta_prev_norm, const Tangent& transported_eta);

}  // namespace riemopt
