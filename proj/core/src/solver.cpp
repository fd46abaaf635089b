#include "riemopt/solver.hpp"

#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "riemopt/error.hpp"

namespace riemopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDescentFloor = 1e-14;

CgKind cg_kind(DirectionKind kind) {
  switch (kind) {
    case DirectionKind::FR: return CgKind::FR;
    case DirectionKind::DY: return CgKind::DY;
    case DirectionKind::PRP: return CgKind::PRP;
    case DirectionKind::HS: return CgKind::HS;
    case DirectionKind::HZ: return CgKind::HZ;
    case DirectionKind::Broyden: break;
  }
  throw Error(ErrorKind::ContractViolation, "not a conjugate-gradient direction");
}

// What the next direction needs from the step just taken.
struct PreviousStep {
  Point x;
  Tangent step;  // alpha * eta at x
  Tangent eta;
  Tangent g;
  double g_dot_eta;
};

struct DirectionOutcome {
  Tangent eta;
  std::optional<QnMemory> memory;
  std::optional<ParamSchedule> params;
};

DirectionOutcome next_direction(const SolverConfig& cfg, const PreviousStep& prev, const Point& x, const Tangent& g) {
  const TransportKind kind = cfg.transport;
  // The inverse-retraction map only moves multiples of the displacement.
  const TransportKind g_kind =
      kind == TransportKind::InverseRetraction ? TransportKind::ProjectionTransport : kind;

  const Tangent moved_eta = transport(kind, prev.x, prev.step, prev.eta, x);
  const Tangent moved_g = transport(g_kind, prev.x, prev.step, prev.g, x);

  if (cfg.direction == DirectionKind::Broyden) {
    Tangent s = transport(kind, prev.x, prev.step, prev.step, x);
    Tangent y = g - moved_g;
    Tangent z = compute_z(cfg.z_mode, s, y, cfg.effective_nu_hat());
    const ParamSchedule params = schedule_params(s, z, cfg.phi_mode, cfg.xi, cfg.preconvex_mu_reciprocal);
    Tangent eta = broyden_direction(g, s, z, params);
    QnMemory memory{std::move(s), std::move(y), std::move(z), norm(prev.g), prev.g_dot_eta, norm(prev.eta)};
    return DirectionOutcome{std::move(eta), std::move(memory), params};
  }

  CgState state{g, moved_eta, moved_g, inner(prev.g, prev.g), prev.g_dot_eta, 1.0, cfg.hz_mu};
  state.sigma = scaling_sigma(x, norm(prev.eta), moved_eta);
  const auto beta = cg_beta(cg_kind(cfg.direction), state);
  if (!beta) return DirectionOutcome{-g, std::nullopt, std::nullopt};
  return DirectionOutcome{cg_direction(g, *beta, state.sigma, moved_eta), std::nullopt, std::nullopt};
}

}  // namespace

std::string to_string(DirectionKind kind) {
  if (kind == DirectionKind::Broyden) return "broyden";
  return to_string(cg_kind(kind));
}

std::string to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::LineSearchFailed: return "line_search_failed";
    case FailureReason::MaxIters: return "max_iters";
    case FailureReason::DegenerateStep: return "degenerate_step";
  }
  return "?";
}

double SolverConfig::effective_nu_hat() const {
  if (nu_hat) return *nu_hat;
  return z_mode == ZMode::LiFukushima ? 1e-6 : 0.1;
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorKind::ContractViolation, "tol must be positive");
  if (max_iters < 1) throw Error(ErrorKind::ContractViolation, "max_iters must be at least 1");
  if (!(xi >= 0.0 && xi <= 1.0)) throw Error(ErrorKind::ContractViolation, "xi must lie in [0, 1]");
  const double nh = effective_nu_hat();
  if (!(nh > 0.0) || (z_mode == ZMode::Powell && !(nh < 1.0))) {
    throw Error(ErrorKind::ContractViolation, "nu_hat out of range for the chosen z-mode");
  }
  if (!(hz_mu > 0.25)) throw Error(ErrorKind::ContractViolation, "hz_mu must exceed 1/4");
  line_search.validate();
}

void to_json(nlohmann::json& j, const IterationTrace& t) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  j = nlohmann::json{{"iter", t.iter},       {"f", num(t.f)},
                     {"gnorm", num(t.gnorm)}, {"alpha", num(t.alpha)},
                     {"g_dot_eta", num(t.g_dot_eta)}, {"time_ms", t.time_ms}};
}

void to_json(nlohmann::json& j, const RunResult& r) {
  j = nlohmann::json{{"converged", r.converged},
                     {"iters", r.iters},
                     {"final_f", r.final_f},
                     {"final_gnorm", r.final_gnorm},
                     {"elapsed", r.elapsed},
                     {"restarts", r.restarts},
                     {"ls_evals", r.ls_evals},
                     {"failure_reason", r.failure_reason ? nlohmann::json(to_string(*r.failure_reason))
                                                         : nlohmann::json(nullptr)},
                     {"trace", r.trace}};
}

void write_trace_header(std::ostream& os) { os << "iter,f,gnorm,alpha,g_dot_eta,time_ms\n"; }

void write_trace_row(std::ostream& os, const IterationTrace& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.6f\n", row.iter, row.f, row.gnorm, row.alpha,
                row.g_dot_eta, row.time_ms);
  os << buf;
}

bool check_stop(const Tangent& g, double tol) { return norm(g) < tol; }

RunResult solve(const Objective& problem, const Point& x0, const SolverConfig& cfg, const SolverHooks& hooks) {
  cfg.validate();
  if (!(x0.manifold() == problem.manifold())) {
    throw Error(ErrorKind::ContractViolation, "x0 is not on the problem's manifold");
  }
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(Clock::now() - start).count(); };

  RunResult result;
  auto record = [&](int k, double f, double gnorm, double alpha, double slope) {
    const IterationTrace row{k, f, gnorm, alpha, slope, elapsed_ms()};
    if (cfg.record_trace) result.trace.push_back(row);
    if (hooks.on_trace) hooks.on_trace(row);
  };

  Point x = x0;
  double f = problem.cost(x);
  Tangent g = problem.gradient(x);
  std::optional<PreviousStep> prev;
  int k = 0;

  auto finish = [&](bool converged, std::optional<FailureReason> reason) {
    result.converged = converged;
    result.failure_reason = reason;
    result.iters = k;
    result.final_f = f;
    result.final_gnorm = norm(g);
    record(k, f, result.final_gnorm, kNaN, kNaN);
    result.elapsed = elapsed_ms() / 1000.0;
    return result;
  };

  while (true) {
    if (check_stop(g, cfg.tol)) return finish(true, std::nullopt);
    if (k >= cfg.max_iters) return finish(false, FailureReason::MaxIters);

    std::optional<DirectionOutcome> dir;
    if (!prev) {
      dir = DirectionOutcome{-g, std::nullopt, std::nullopt};
    } else {
      try {
        dir = next_direction(cfg, *prev, x, g);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::DegenerateStep || e.kind() == ErrorKind::DegenerateTransport) {
          return finish(false, FailureReason::DegenerateStep);
        }
        throw;
      }
    }

    Tangent eta = std::move(dir->eta);
    double slope = inner(x, g, eta);
    const double gg = inner(x, g, g);
    bool restarted = false;
    if (!(slope < -kDescentFloor * gg)) {
      eta = -g;
      slope = -gg;
      restarted = prev.has_value();
      if (restarted) ++result.restarts;
    }
    if (hooks.on_direction) {
      const bool with_memory = !restarted && dir->memory.has_value();
      hooks.on_direction(DirectionUpdate{k, g, eta, with_memory ? &*dir->memory : nullptr,
                                         with_memory ? &*dir->params : nullptr, restarted});
    }

    std::optional<LineSearchResult> ls;
    try {
      ls = line_search(problem, x, f, g, eta, cfg.line_search, cfg.transport);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::LineSearchFailure) return finish(false, FailureReason::LineSearchFailed);
      throw;
    }
    result.ls_evals += ls->evals;
    record(k, f, std::sqrt(gg), ls->alpha, slope);
    if (hooks.on_step) hooks.on_step(AcceptedStep{k, x, f, g, eta, ls->alpha, ls->x_next, ls->f_next});

    Tangent step = ls->alpha * eta;
    prev = PreviousStep{std::move(x), std::move(step), std::move(eta), std::move(g), slope};
    x = std::move(ls->x_next);
    f = ls->f_next;
    g = std::move(ls->g_next);
    ++k;
  }
}

}  // namespace riemopt
