#include "riemopt/manifold.hpp"

#include <cmath>
#include <sstream>

#include "riemopt/error.hpp"

namespace riemopt {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kTangentTol = 1e-10;

void require_shape(const Manifold& m, const Matrix& a, const char* what) {
  if (a.rows() != m.rows() || a.cols() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected " << m.rows() << "x" << m.cols() << ", got " << a.rows() << "x" << a.cols();
    throw Error(ErrorKind::ContractViolation, os.str());
  }
}

void require_base(const Point& x, const Tangent& u, const char* what) {
  if (!x.same_as(u.base())) {
    throw Error(ErrorKind::ContractViolation, std::string(what) + ": tangent is not based at the given point");
  }
}

bool is_zero(const Matrix& a) { return (a.array() == 0.0).all(); }

// Column-wise v - x * ddiag(x^T v).
Matrix project_columns(const Matrix& x, const Matrix& v) {
  Matrix out = v;
  for (Index j = 0; j < x.cols(); ++j) {
    out.col(j) -= x.col(j).dot(v.col(j)) * x.col(j);
  }
  return out;
}

}  // namespace

Manifold Manifold::sphere(Index n) {
  if (n < 1) throw Error(ErrorKind::ContractViolation, "sphere dimension must be positive");
  return Manifold(ManifoldKind::Sphere, n, 1);
}

Manifold Manifold::oblique(Index n, Index p) {
  if (n < 1 || p < 1) throw Error(ErrorKind::ContractViolation, "oblique dimensions must be positive");
  return Manifold(ManifoldKind::Oblique, n, p);
}

std::string Manifold::name() const {
  std::ostringstream os;
  if (kind_ == ManifoldKind::Sphere) {
    os << "Sphere(" << rows_ << ")";
  } else {
    os << "Oblique(" << rows_ << "," << cols_ << ")";
  }
  return os.str();
}

Point Point::normalized(const Manifold& manifold, Matrix ambient) {
  require_shape(manifold, ambient, "Point::normalized");
  for (Index j = 0; j < ambient.cols(); ++j) {
    const double n = ambient.col(j).norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw Error(ErrorKind::SingularRetraction, "column " + std::to_string(j) + " has zero or non-finite norm");
    }
    ambient.col(j) /= n;
  }
  return Point(manifold, std::make_shared<const Matrix>(std::move(ambient)));
}

Point Point::from_unit(const Manifold& manifold, Matrix ambient) {
  require_shape(manifold, ambient, "Point::from_unit");
  for (Index j = 0; j < ambient.cols(); ++j) {
    if (std::abs(ambient.col(j).norm() - 1.0) > kUnitTol) {
      throw Error(ErrorKind::ContractViolation, "column " + std::to_string(j) + " is not unit norm");
    }
  }
  return Point(manifold, std::make_shared<const Matrix>(std::move(ambient)));
}

bool Point::same_as(const Point& other) const noexcept {
  if (coords_ == other.coords_) return manifold_ == other.manifold_;
  return manifold_ == other.manifold_ && *coords_ == *other.coords_;
}

Tangent::Tangent(Point base, Matrix ambient) : base_(std::move(base)), ambient_(std::move(ambient)) {
  require_shape(base_.manifold(), ambient_, "Tangent");
  const double scale = ambient_.norm();
  if (tangency_residual(base_, ambient_) > kTangentTol * scale) {
    throw Error(ErrorKind::ContractViolation, "ambient array is not tangent at the base point");
  }
}

Tangent Tangent::zero(const Point& base) {
  return Tangent(Unchecked{}, base, Matrix::Zero(base.manifold().rows(), base.manifold().cols()));
}

Tangent& Tangent::operator+=(const Tangent& other) {
  require_base(base_, other, "Tangent::operator+=");
  ambient_ += other.ambient_;
  return *this;
}

Tangent& Tangent::operator-=(const Tangent& other) {
  require_base(base_, other, "Tangent::operator-=");
  ambient_ -= other.ambient_;
  return *this;
}

Tangent& Tangent::operator*=(double scale) {
  ambient_ *= scale;
  return *this;
}

std::string to_string(TransportKind kind) {
  switch (kind) {
    case TransportKind::DifferentiatedRetraction: return "dr";
    case TransportKind::ProjectionTransport: return "proj";
    case TransportKind::InverseRetraction: return "invr";
  }
  return "?";
}

double unit_residual(const Point& x) {
  const Matrix& a = x.ambient();
  double worst = 0.0;
  for (Index j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a.col(j).norm() - 1.0));
  return worst;
}

double tangency_residual(const Point& x, const Matrix& v) {
  const Matrix& a = x.ambient();
  double worst = 0.0;
  for (Index j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a.col(j).dot(v.col(j))));
  return worst;
}

double inner(const Point& x, const Tangent& u, const Tangent& v) {
  require_base(x, u, "inner");
  require_base(x, v, "inner");
  return (u.ambient().array() * v.ambient().array()).sum();
}

double inner(const Tangent& u, const Tangent& v) { return inner(u.base(), u, v); }

double norm(const Tangent& u) { return u.ambient().norm(); }

Point retract(const Point& x, const Tangent& eta) {
  require_base(x, eta, "retract");
  if (is_zero(eta.ambient())) return x;

  const Matrix& xa = x.ambient();
  Matrix y = xa + eta.ambient();
  for (Index j = 0; j < y.cols(); ++j) {
    if (is_zero(eta.ambient().col(j))) {
      y.col(j) = xa.col(j);
      continue;
    }
    const double n = y.col(j).norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw Error(ErrorKind::SingularRetraction, "x + eta has a zero column at " + std::to_string(j));
    }
    y.col(j) /= n;
  }
  return Point::from_unit(x.manifold(), std::move(y));
}

Tangent project_tangent(const Point& x, const Matrix& v) {
  require_shape(x.manifold(), v, "project_tangent");
  return Tangent(Tangent::Unchecked{}, x, project_columns(x.ambient(), v));
}

Tangent transport(TransportKind kind, const Point& x, const Tangent& eta, const Tangent& xi) {
  require_base(x, eta, "transport");
  return transport(kind, x, eta, xi, retract(x, eta));
}

Tangent transport(TransportKind kind, const Point& x, const Tangent& eta, const Tangent& xi,
                  const Point& destination) {
  require_base(x, eta, "transport");
  require_base(x, xi, "transport");
  if (is_zero(eta.ambient())) {
    return project_tangent(destination, xi.ambient());
  }

  const Matrix& xa = x.ambient();
  const Matrix& w = destination.ambient();

  switch (kind) {
    case TransportKind::DifferentiatedRetraction: {
      // (1 / ||y_j||) (I - w_j w_j^T) xi_j with y = x + eta, w = y / ||y||.
      Matrix out = project_columns(w, xi.ambient());
      for (Index j = 0; j < out.cols(); ++j) {
        out.col(j) /= (xa.col(j) + eta.ambient().col(j)).norm();
      }
      return project_tangent(destination, out);
    }
    case TransportKind::ProjectionTransport:
      return project_tangent(destination, xi.ambient());
    case TransportKind::InverseRetraction: {
      const double ee = eta.ambient().squaredNorm();
      const double c = (eta.ambient().array() * xi.ambient().array()).sum() / ee;
      const double off = (xi.ambient() - c * eta.ambient()).norm();
      if (off > 1e-12 * xi.ambient().norm()) {
        throw Error(ErrorKind::UnsupportedArgument,
                    "inverse-retraction transport is only defined on multiples of the displacement");
      }
      // -R_w^{-1}(x) = w - x / <w, x>, column-wise.
      Matrix out(w.rows(), w.cols());
      for (Index j = 0; j < w.cols(); ++j) {
        const double d = w.col(j).dot(xa.col(j));
        if (!(d > 0.0)) {
          throw Error(ErrorKind::AntipodalDomain, "<w, x> <= 0 in column " + std::to_string(j));
        }
        out.col(j) = c * (w.col(j) - xa.col(j) / d);
      }
      return project_tangent(destination, out);
    }
  }
  throw Error(ErrorKind::UnsupportedArgument, "unknown transport kind");
}

double scaling_sigma(const Point& x_next, double eta_prev_norm, const Tangent& transported_eta) {
  require_base(x_next, transported_eta, "scaling_sigma");
  if (!(eta_prev_norm > 0.0)) {
    throw Error(ErrorKind::ContractViolation, "previous direction norm must be positive");
  }
  const double tn = norm(transported_eta);
  if (!(tn > 0.0)) throw Error(ErrorKind::DegenerateTransport, "transported direction is zero");
  return std::min(1.0, eta_prev_norm / tn);
}

}  // namespace riemopt
