#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "riemopt/manifold.hpp"

namespace riemopt {

/// Smooth cost on a manifold with its Riemannian gradient.
class Objective {
public:
  virtual ~Objective() = default;

  virtual const Manifold& manifold() const = 0;
  virtual double cost(const Point& x) const = 0;
  virtual Tangent gradient(const Point& x) const = 0;
};

enum class ProblemKind { Rayleigh, OffDiagonal };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

/// n for Rayleigh; (n, p, count) for the off-diagonal problem with `count` matrices.
struct ProblemDims {
  Index n = 0;
  Index p = 1;
  Index count = 1;

  friend bool operator==(const ProblemDims&, const ProblemDims&) = default;
};

/// Descriptor that fully determines an instance. Matrices are regenerated from the seed.
struct InstanceDescriptor {
  ProblemKind kind = ProblemKind::Rayleigh;
  ProblemDims dims;
  std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const InstanceDescriptor& d);
void from_json(const nlohmann::json& j, InstanceDescriptor& d);

/// Rayleigh quotient x^T A x on S^{n-1}, or the off-diagonal cost
/// sum_i ||X^T C_i X - ddiag(X^T C_i X)||_F^2 on OB(n, p).
class ProblemInstance final : public Objective {
public:
  /// Builds an instance from explicit symmetric matrices. x0 defaults to the
  /// normalized all-ones array.
  static ProblemInstance from_matrices(ProblemKind kind, std::vector<Matrix> matrices, Index p = 1);

  ProblemKind kind() const noexcept { return kind_; }
  const ProblemDims& dims() const noexcept { return dims_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<Matrix>& matrices() const noexcept { return matrices_; }
  InstanceDescriptor descriptor() const { return {kind_, dims_, seed_}; }

  /// Seeded starting point drawn from the instance stream after the matrices.
  const Point& initial_point() const noexcept { return x0_; }

  const Manifold& manifold() const override { return manifold_; }
  double cost(const Point& x) const override;
  Tangent gradient(const Point& x) const override;

private:
  ProblemInstance(ProblemKind kind, ProblemDims dims, std::uint64_t seed, std::vector<Matrix> matrices,
                  Manifold manifold, Point x0);

  friend ProblemInstance gen_instance(ProblemKind, const ProblemDims&, std::uint64_t);

  ProblemKind kind_;
  ProblemDims dims_;
  std::uint64_t seed_;
  std::vector<Matrix> matrices_;
  Manifold manifold_;
  Point x0_;
};

double rayleigh_cost(const ProblemInstance& inst, const Point& x);
Tangent rayleigh_grad(const ProblemInstance& inst, const Point& x);
double offdiag_cost(const ProblemInstance& inst, const Point& x);
Tangent offdiag_grad(const ProblemInstance& inst, const Point& x);

/// One SplitMix64 stream seeded with `seed` feeds, in order, the row-major
/// entries of B_1, ..., B_count (A_i = (B_i + B_i^T) / 2) and then x0.
ProblemInstance gen_instance(ProblemKind kind, const ProblemDims& dims, std::uint64_t seed);
ProblemInstance gen_instance(const InstanceDescriptor& descriptor);

/// Problem sizes used in the reference experiments.
ProblemDims default_dims(ProblemKind kind);

}  // namespace riemopt
