#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "riemopt/directions.hpp"
#include "riemopt/linesearch.hpp"
#include "riemopt/manifold.hpp"
#include "riemopt/problems.hpp"

namespace riemopt {

enum class DirectionKind { Broyden, FR, DY, PRP, HS, HZ };

std::string to_string(DirectionKind kind);

struct SolverConfig {
  DirectionKind direction = DirectionKind::Broyden;
  PhiMode phi_mode = PhiMode::BFGS;
  ZMode z_mode = ZMode::LiFukushima;
  double xi = 1.0;
  /// Defaults to 1e-6 for Li-Fukushima and 0.1 for Powell when unset.
  std::optional<double> nu_hat;
  double hz_mu = 2.0;
  bool preconvex_mu_reciprocal = false;
  TransportKind transport = TransportKind::DifferentiatedRetraction;
  LineSearchConfig line_search;
  double tol = 1e-6;
  int max_iters = 10000;
  bool record_trace = true;

  double effective_nu_hat() const;
  void validate() const;
};

struct IterationTrace {
  int iter = 0;
  double f = 0.0;
  double gnorm = 0.0;
  double alpha = 0.0;      // NaN on the final row
  double g_dot_eta = 0.0;  // NaN on the final row
  double time_ms = 0.0;
};

enum class FailureReason { LineSearchFailed, MaxIters, DegenerateStep };

std::string to_string(FailureReason reason);

struct RunResult {
  bool converged = false;
  int iters = 0;
  double final_f = 0.0;
  double final_gnorm = 0.0;
  double elapsed = 0.0;  // seconds
  std::vector<IterationTrace> trace;
  std::optional<FailureReason> failure_reason;
  int restarts = 0;
  long ls_evals = 0;
};

void to_json(nlohmann::json& j, const IterationTrace& t);
void to_json(nlohmann::json& j, const RunResult& r);

/// CSV layout: iter,f,gnorm,alpha,g_dot_eta,time_ms
void write_trace_header(std::ostream& os);
void write_trace_row(std::ostream& os, const IterationTrace& row);

/// One accepted step x_k -> x_{k+1} = R_{x_k}(alpha_k eta_k).
struct AcceptedStep {
  int iter;
  const Point& x;
  double f;
  const Tangent& g;
  const Tangent& eta;
  double alpha;
  const Point& x_next;
  double f_next;
};

/// A freshly computed search direction at x_k. `memory` and `params` are set
/// for quasi-Newton directions with k >= 1.
struct DirectionUpdate {
  int iter;
  const Tangent& g;
  const Tangent& eta;
  const QnMemory* memory;
  const ParamSchedule* params;
  bool restarted;
};

struct SolverHooks {
  std::function<void(const AcceptedStep&)> on_step;
  std::function<void(const DirectionUpdate&)> on_direction;
  std::function<void(const IterationTrace&)> on_trace;
};

/// True iff ||g|| < tol.
bool check_stop(const Tangent& g, double tol);

/// Runs the modified memoryless quasi-Newton iteration (or a conjugate-gradient
/// baseline) from x0. Line-search breakdown and degenerate curvature pairs end
/// the run with converged = false and a recorded reason.
RunResult solve(const Objective& problem, const Point& x0, const SolverConfig& cfg, const SolverHooks& hooks = {});

}  // namespace riemopt
