#include <benchmark/benchmark.h>

#include "riemopt/riemopt.hpp"

using namespace riemopt;

namespace {

ProblemInstance instance(ProblemKind kind) { return gen_instance(kind, default_dims(kind), 3); }

// A curvature pair from one steepest-descent step, transported back by DR.
struct Pair {
  Point x;
  Tangent g, s, z;
};

Pair curvature_pair(const ProblemInstance& inst, ZMode mode) {
  const Point x0 = inst.initial_point();
  const Tangent g0 = inst.gradient(x0);
  const Tangent step = -0.1 * g0;
  const Point x1 = retract(x0, step);
  const Tangent g1 = inst.gradient(x1);
  const Tangent s = transport(TransportKind::DifferentiatedRetraction, x0, step, step);
  const Tangent y = g1 - transport(TransportKind::DifferentiatedRetraction, x0, step, g0);
  const double nu_hat = mode == ZMode::Powell ? 0.1 : 1e-6;
  return {x1, g1, s, compute_z(mode, s, y, nu_hat)};
}

void BM_Gradient(benchmark::State& state) {
  const auto inst = instance(static_cast<ProblemKind>(state.range(0)));
  const Point& x = inst.initial_point();
  for (auto _ : state) benchmark::DoNotOptimize(inst.gradient(x));
  state.SetLabel(to_string(inst.kind()));
}
BENCHMARK(BM_Gradient)->Arg(static_cast<int>(ProblemKind::Rayleigh))->Arg(static_cast<int>(ProblemKind::OffDiagonal));

void BM_BroydenDirection(benchmark::State& state) {
  const auto inst = instance(ProblemKind::Rayleigh);
  const auto mode = state.range(0) ? ZMode::Powell : ZMode::LiFukushima;
  const Pair pr = curvature_pair(inst, mode);
  for (auto _ : state) {
    const auto p = schedule_params(pr.s, pr.z, PhiMode::BFGS, 0.1);
    benchmark::DoNotOptimize(broyden_direction(pr.g, pr.s, pr.z, p));
  }
  state.SetLabel(to_string(mode));
}
BENCHMARK(BM_BroydenDirection)->Arg(0)->Arg(1);

void BM_Transport(benchmark::State& state) {
  const auto kind = static_cast<TransportKind>(state.range(0));
  const auto inst = instance(ProblemKind::OffDiagonal);
  const Point& x = inst.initial_point();
  const Tangent g = inst.gradient(x);
  const Tangent eta = -0.1 * g;
  for (auto _ : state) benchmark::DoNotOptimize(transport(kind, x, eta, eta));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_Transport)
    ->Arg(static_cast<int>(TransportKind::DifferentiatedRetraction))
    ->Arg(static_cast<int>(TransportKind::ProjectionTransport))
    ->Arg(static_cast<int>(TransportKind::InverseRetraction));

void BM_LineSearch(benchmark::State& state) {
  const auto inst = instance(static_cast<ProblemKind>(state.range(0)));
  const Point& x = inst.initial_point();
  const Tangent eta = -inst.gradient(x);
  const LineSearchConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(line_search(inst, x, eta, cfg, TransportKind::DifferentiatedRetraction));
  }
  state.SetLabel(to_string(inst.kind()));
}
BENCHMARK(BM_LineSearch)->Arg(static_cast<int>(ProblemKind::Rayleigh))->Arg(static_cast<int>(ProblemKind::OffDiagonal));

void BM_Solve(benchmark::State& state) {
  const auto inst = instance(static_cast<ProblemKind>(state.range(0)));
  SolverConfig cfg;
  cfg.xi = 0.1;
  cfg.record_trace = false;
  long iters = 0;
  for (auto _ : state) {
    const auto r = solve(inst, inst.initial_point(), cfg);
    iters += r.iters;
    benchmark::DoNotOptimize(r.final_f);
  }
  state.counters["iters"] = benchmark::Counter(static_cast<double>(iters), benchmark::Counter::kAvgIterations);
  state.SetLabel(to_string(inst.kind()));
}
BENCHMARK(BM_Solve)
    ->Arg(static_cast<int>(ProblemKind::Rayleigh))
    ->Arg(static_cast<int>(ProblemKind::OffDiagonal))
    ->Unit(benchmark::kMillisecond);

void BM_PerformanceProfile(benchmark::State& state) {
  const auto np = static_cast<std::size_t>(state.range(0));
  std::vector<std::string> problems, solvers;
  for (std::size_t i = 0; i < np; ++i) problems.push_back("p" + std::to_string(i));
  for (int i = 0; i < 10; ++i) solvers.push_back("s" + std::to_string(i));
  CostTable t(problems, solvers);
  for (std::size_t i = 0; i < t.costs.size(); ++i) t.costs[i] = 1.0 + static_cast<double>((i * 7919) % 97);
  for (auto _ : state) benchmark::DoNotOptimize(performance_profile(t));
}
BENCHMARK(BM_PerformanceProfile)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
