#pragma once

#include <optional>
#include <string>

#include "riemopt/manifold.hpp"

namespace riemopt {

enum class PhiMode { BFGS, Preconvex };
enum class ZMode { LiFukushima, Powell };
enum class CgKind { FR, DY, PRP, HS, HZ };

std::string to_string(PhiMode mode);
std::string to_string(ZMode mode);
std::string to_string(CgKind kind);

/// Curvature pair carried from x_{k-1} to x_k. Every tangent is based at x_k.
struct QnMemory {
  Tangent s;  // T(alpha_{k-1} eta_{k-1})
  Tangent y;  // g_k - T(g_{k-1})
  Tangent z;  // regularized y
  double g_prev_norm = 0.0;
  double g_prev_inner_eta = 0.0;
  double eta_prev_norm = 0.0;
};

/// Per-iteration parameters of the memoryless spectral-scaling Broyden direction.
struct ParamSchedule {
  double gamma = 1.0;  // sizing
  double tau = 1.0;    // spectral scaling
  double phi = 1.0;    // Broyden family member (1 = BFGS)
  double xi = 1.0;     // modification weight on the z term
};

/// Li-Fukushima: z = y + nu s. Powell: z = nu y + (1 - nu) s. Both give
/// <s, z> >= nu_hat ||s||^2.
Tangent compute_z(ZMode mode, const Tangent& s, const Tangent& y, double nu_hat);

/// gamma = max{1, <s,z>/<z,z>}, tau = min{1, <z,z>/<s,z>}, phi from `phi_mode`.
///
/// Preconvex: phi = (0.1 t - 1) / (0.1 t (1 - mu) - 1), t = max{1/(1 - mu), 1e-5},
/// mu = <s,s><z,z>/<s,z>^2 (or its reciprocal when `mu_reciprocal`). Falls back
/// to phi = 1 when |1 - mu| or the denominator is below 1e-12.
ParamSchedule schedule_params(const Tangent& s, const Tangent& z, PhiMode phi_mode, double xi,
                              bool mu_reciprocal = false);

/// Modified memoryless spectral-scaling Broyden direction
///   eta = -gamma g + gamma (phi <z,g>/<s,z> - (1/(gamma tau) + phi <z,z>/<s,z>) <s,g>/<s,z>) s
///         + gamma xi (phi <s,g>/<s,z> + (1 - phi) <z,g>/<z,z>) z.
Tangent broyden_direction(const Tangent& g, const Tangent& s, const Tangent& z, const ParamSchedule& p);

/// kappa = min{3 gamma_lo (1 - xi_hi) / 4, gamma_lo (1 - phi_hi^2 / 4)}.
/// Requires gamma_lo > 0, 0 <= xi_hi < 1, 1 < phi_hi < 2; throws OutOfHypothesis otherwise.
double sufficient_descent_kappa(double gamma_lo, double xi_hi, double phi_hi);

/// Inputs of the conjugate-gradient beta formulas, all at x_k except the two
/// scalars carried from x_{k-1}.
struct CgState {
  Tangent g;                  // g_k
  Tangent transported_eta;    // T(eta_{k-1})
  Tangent transported_g;      // S(g_{k-1}), l = 1
  double g_prev_sqnorm = 0;   // ||g_{k-1}||^2
  double g_prev_dot_eta = 0;  // <g_{k-1}, eta_{k-1}>
  double sigma = 1.0;
  double hz_mu = 2.0;
};

/// Returns std::nullopt when the formula's denominator vanishes (restart with -g).
std::optional<double> cg_beta(CgKind kind, const CgState& state);

/// eta = -g + beta sigma T(eta_prev).
Tangent cg_direction(const Tangent& g, double beta, double sigma, const Tangent& transported_eta);

}  // namespace riemopt
