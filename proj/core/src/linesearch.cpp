#include "riemopt/linesearch.hpp"

#include <cmath>
#include <limits>

#include "riemopt/error.hpp"

namespace riemopt {

namespace {

struct Trial {
  WolfeFlags flags;
  Point x_next;
  double f_next;
  Tangent g_next;
};

double descent_slope(const Point& x, const Tangent& gx, const Tangent& eta) {
  const double slope = inner(x, gx, eta);
  if (!(slope < 0.0)) {
    throw Error(ErrorKind::ContractViolation, "search direction is not a descent direction");
  }
  return slope;
}

// Shared by wolfe_check and line_search so that acceptance and replay run the
// same arithmetic.
Trial evaluate(const Objective& problem, const Point& x, double fx, double slope, const Tangent& eta, double alpha,
               const LineSearchConfig& cfg, TransportKind kind) {
  const Tangent step = alpha * eta;
  Point x_next = retract(x, step);
  const double f_next = problem.cost(x_next);
  Tangent g_next = problem.gradient(x_next);

  WolfeFlags flags;
  flags.armijo_ok = std::isfinite(f_next) && f_next <= fx + cfg.c1 * alpha * slope;
  if (flags.armijo_ok) {
    const Tangent moved = transport(kind, x, step, eta, x_next);
    flags.curvature_ok = inner(x_next, g_next, moved) >= cfg.c2 * slope;
  }
  return Trial{flags, std::move(x_next), f_next, std::move(g_next)};
}

}  // namespace

void LineSearchConfig::validate() const {
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) {
    throw Error(ErrorKind::ContractViolation, "line search requires 0 < c1 < c2 < 1");
  }
  if (!(alpha_init > 0.0) || !(alpha_max >= alpha_init)) {
    throw Error(ErrorKind::ContractViolation, "line search requires 0 < alpha_init <= alpha_max");
  }
  if (max_evals < 3) throw Error(ErrorKind::ContractViolation, "line search requires max_evals >= 3");
}

WolfeFlags wolfe_check(const Objective& problem, const Point& x, const Tangent& eta, double alpha,
                       const LineSearchConfig& cfg, TransportKind kind) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::ContractViolation, "step size must be positive");
  const double fx = problem.cost(x);
  const Tangent gx = problem.gradient(x);
  const double slope = descent_slope(x, gx, eta);
  const Trial trial = evaluate(problem, x, fx, slope, eta, alpha, cfg, kind);
  if (!trial.flags.armijo_ok) {
    // Report the curvature side too, even though the search never needs it.
    const Tangent step = alpha * eta;
    const Tangent moved = transport(kind, x, step, eta, trial.x_next);
    return WolfeFlags{false, inner(trial.x_next, trial.g_next, moved) >= cfg.c2 * slope};
  }
  return trial.flags;
}

LineSearchResult line_search(const Objective& problem, const Point& x, const Tangent& eta,
                             const LineSearchConfig& cfg, TransportKind kind) {
  return line_search(problem, x, problem.cost(x), problem.gradient(x), eta, cfg, kind);
}

LineSearchResult line_search(const Objective& problem, const Point& x, double fx, const Tangent& gx,
                             const Tangent& eta, const LineSearchConfig& cfg, TransportKind kind) {
  cfg.validate();
  const double slope = descent_slope(x, gx, eta);

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double alpha = cfg.alpha_init;
  for (int evals = 1; evals <= cfg.max_evals; ++evals) {
    Trial trial = evaluate(problem, x, fx, slope, eta, alpha, cfg, kind);
    if (trial.flags.both()) {
      return LineSearchResult{alpha, evals, std::move(trial.x_next), trial.f_next, std::move(trial.g_next)};
    }
    if (!trial.flags.armijo_ok) {
      hi = alpha;
    } else {
      lo = alpha;
    }
    alpha = std::isinf(hi) ? std::min(2.0 * alpha, cfg.alpha_max) : 0.5 * (lo + hi);
  }
  throw Error(ErrorKind::LineSearchFailure,
              "no Wolfe point within " + std::to_string(cfg.max_evals) + " evaluations");
}

}  // namespace riemopt
