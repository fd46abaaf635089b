#include "riemopt/directions.hpp"

#include <cmath>

#include "riemopt/error.hpp"

namespace riemopt {

std::string to_string(PhiMode mode) { return mode == PhiMode::BFGS ? "bfgs" : "preconvex"; }

std::string to_string(ZMode mode) { return mode == ZMode::LiFukushima ? "lf" : "powell"; }

std::string to_string(CgKind kind) {
  switch (kind) {
    case CgKind::FR: return "fr";
    case CgKind::DY: return "dy";
    case CgKind::PRP: return "prp";
    case CgKind::HS: return "hs";
    case CgKind::HZ: return "hz";
  }
  return "?";
}

namespace {

// The closed-form shift can land a few ulps of |s||y| below the bound; nudge along s.
Tangent enforce_curvature(const Tangent& s, Tangent z, double ss, double nu_hat) {
  const double target = nu_hat * ss;
  for (int i = 0; i < 64; ++i) {
    const double deficit = target - inner(s, z);
    if (deficit <= 0.0) break;
    z = z + (deficit / ss + (i == 0 ? 0.0 : std::ldexp(nu_hat, i - 53))) * s;
  }
  return z;
}

}  // namespace

Tangent compute_z(ZMode mode, const Tangent& s, const Tangent& y, double nu_hat) {
  const double ss = inner(s, s);
  if (!(ss > 0.0)) throw Error(ErrorKind::DegenerateStep, "s = 0");
  const double sy = inner(s, y);

  if (mode == ZMode::LiFukushima) {
    if (!(nu_hat > 0.0)) throw Error(ErrorKind::ContractViolation, "Li-Fukushima requires nu_hat > 0");
    if (sy >= nu_hat * ss) return y;
    const double nu = std::max(0.0, -sy / ss) + nu_hat;
    return enforce_curvature(s, y + nu * s, ss, nu_hat);
  }

  if (!(nu_hat > 0.0 && nu_hat < 1.0)) {
    throw Error(ErrorKind::ContractViolation, "Powell damping requires nu_hat in (0, 1)");
  }
  if (sy >= nu_hat * ss) return y;
  const double nu = (1.0 - nu_hat) * ss / (ss - sy);
  return enforce_curvature(s, nu * y + (1.0 - nu) * s, ss, nu_hat);
}

ParamSchedule schedule_params(const Tangent& s, const Tangent& z, PhiMode phi_mode, double xi, bool mu_reciprocal) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw Error(ErrorKind::ContractViolation, "xi must lie in [0, 1]");
  const double sz = inner(s, z);
  const double zz = inner(z, z);
  if (!(zz > 0.0)) throw Error(ErrorKind::DegenerateStep, "<z, z> = 0");
  if (!(sz > 0.0)) throw Error(ErrorKind::ContractViolation, "<s, z> must be positive");

  ParamSchedule p;
  p.gamma = std::max(1.0, sz / zz);
  p.tau = std::min(1.0, zz / sz);
  p.xi = xi;
  p.phi = 1.0;

  if (phi_mode == PhiMode::Preconvex) {
    double mu = inner(s, s) * zz / (sz * sz);
    if (mu_reciprocal) mu = 1.0 / mu;
    if (std::abs(1.0 - mu) >= 1e-12) {
      const double theta = std::max(1.0 / (1.0 - mu), 1e-5);
      const double denom = 0.1 * theta * (1.0 - mu) - 1.0;
      if (std::abs(denom) >= 1e-12) {
        p.phi = std::max(0.0, (0.1 * theta - 1.0) / denom);
      }
    }
  }
  return p;
}

Tangent broyden_direction(const Tangent& g, const Tangent& s, const Tangent& z, const ParamSchedule& p) {
  const double sz = inner(s, z);
  const double zz = inner(z, z);
  if (!(sz > 0.0)) throw Error(ErrorKind::ContractViolation, "non-positive curvature pair <s, z> <= 0");
  if (!(zz > 0.0)) throw Error(ErrorKind::DegenerateStep, "<z, z> = 0");
  const double sg = inner(s, g);
  const double zg = inner(z, g);

  const double s_coef =
      p.gamma * (p.phi * zg / sz - (1.0 / (p.gamma * p.tau) + p.phi * zz / sz) * sg / sz);
  const double z_coef = p.gamma * p.xi * (p.phi * sg / sz + (1.0 - p.phi) * zg / zz);
  return -p.gamma * g + s_coef * s + z_coef * z;
}

double sufficient_descent_kappa(double gamma_lo, double xi_hi, double phi_hi) {
  if (!(gamma_lo > 0.0)) throw Error(ErrorKind::OutOfHypothesis, "gamma lower bound must be positive");
  if (!(xi_hi >= 0.0 && xi_hi < 1.0)) throw Error(ErrorKind::OutOfHypothesis, "xi upper bound must lie in [0, 1)");
  if (!(phi_hi > 1.0 && phi_hi < 2.0)) throw Error(ErrorKind::OutOfHypothesis, "phi bound must lie in (1, 2)");
  return std::min(0.75 * gamma_lo * (1.0 - xi_hi), gamma_lo * (1.0 - 0.25 * phi_hi * phi_hi));
}

std::optional<double> cg_beta(CgKind kind, const CgState& st) {
  const double gg = inner(st.g, st.g);
  const double g_teta = inner(st.g, st.transported_eta);
  // <g_k, sigma T(eta)> - <g_{k-1}, eta_{k-1}>
  const double dy_denom = st.sigma * g_teta - st.g_prev_dot_eta;
  const double hs_numer = gg - inner(st.g, st.transported_g);

  auto ratio = [](double num, double den) -> std::optional<double> {
    if (den == 0.0 || !std::isfinite(den)) return std::nullopt;
    const double r = num / den;
    if (!std::isfinite(r)) return std::nullopt;
    return r;
  };

  switch (kind) {
    case CgKind::FR: return ratio(gg, st.g_prev_sqnorm);
    case CgKind::DY: return ratio(gg, dy_denom);
    case CgKind::PRP: return ratio(hs_numer, st.g_prev_sqnorm);
    case CgKind::HS: return ratio(hs_numer, dy_denom);
    case CgKind::HZ: {
      const auto hs = ratio(hs_numer, dy_denom);
      if (!hs) return std::nullopt;
      const Tangent y = st.g - st.transported_g;
      const double correction = st.hz_mu * inner(y, y) * g_teta / (dy_denom * dy_denom);
      if (!std::isfinite(correction)) return std::nullopt;
      return *hs - correction;
    }
  }
  return std::nullopt;
}

Tangent cg_direction(const Tangent& g, double beta, double sigma, const Tangent& transported_eta) {
  return -g + (beta * sigma) * transported_eta;
}

}  // namespace riemopt
