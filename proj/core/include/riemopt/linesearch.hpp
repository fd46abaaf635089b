#pragma once

#include "riemopt/manifold.hpp"
#include "riemopt/problems.hpp"

namespace riemopt {

struct LineSearchConfig {
  double c1 = 1e-4;
  double c2 = 0.9;
  double alpha_init = 1.0;
  double alpha_max = 1e10;
  int max_evals = 100;

  /// Throws ContractViolation unless 0 < c1 < c2 < 1, alpha_init > 0,
  /// alpha_max >= alpha_init and max_evals >= 3.
  void validate() const;
};

struct WolfeFlags {
  bool armijo_ok = false;
  bool curvature_ok = false;

  bool both() const noexcept { return armijo_ok && curvature_ok; }
};

/// Evaluates the Armijo and curvature conditions at step alpha along the
/// retraction curve R_x(alpha * eta). The curvature side pairs the gradient at
/// the trial point with transport(kind, x, alpha * eta, eta).
WolfeFlags wolfe_check(const Objective& problem, const Point& x, const Tangent& eta, double alpha,
                       const LineSearchConfig& cfg, TransportKind kind);

struct LineSearchResult {
  double alpha;
  int evals;
  Point x_next;
  double f_next;
  Tangent g_next;
};

/// Weak-Wolfe bracketing: double alpha until the curvature side holds or the
/// Armijo side fails, then bisect the bracket. Accepts only points for which
/// wolfe_check reports (true, true). Throws LineSearchFailure after
/// cfg.max_evals trials.
LineSearchResult line_search(const Objective& problem, const Point& x, const Tangent& eta,
                             const LineSearchConfig& cfg, TransportKind kind);

/// Overload reusing f(x) and grad f(x) already known to the caller.
LineSearchResult line_search(const Objective& problem, const Point& x, double fx, const Tangent& gx,
                             const Tangent& eta, const LineSearchConfig& cfg, TransportKind kind);

}  // namespace riemopt
