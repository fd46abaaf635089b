// bench: batch experiments, performance profiles and single traced runs.
//
//   bench run --config <file.json> --out <dir> [--threads N] [--measure iters|time]
//   bench profile --runs <runs.csv> --out <dir> [--measure iters|time]
//   bench solve --problem rayleigh --n 100 --seed 7 --solver <id> [--tol 1e-6] [--max-iters 10000]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "riemopt/riemopt.hpp"

namespace {

constexpr int kUsageError = 2;

void print_profile_head(const riemopt::ProfileTable& profile, const std::string& label) {
  std::printf("%s profile, P_s(1):\n", label.c_str());
  for (std::size_t s = 0; s < profile.solvers().size(); ++s) {
    std::printf("  %-36s %.3f\n", profile.solvers()[s].c_str(), profile.evaluate(s, 1.0));
  }
}

void print_summary(const riemopt::BenchmarkOutputs& out, riemopt::Measure measure) {
  int converged = 0;
  for (const auto& r : out.records) converged += r.converged ? 1 : 0;
  std::printf("%zu runs, %d converged\n", out.records.size(), converged);
  if (measure == riemopt::Measure::Iterations) {
    print_profile_head(out.iters_profile, "iteration");
  } else {
    print_profile_head(out.time_profile, "time");
  }
  for (const auto& entry : out.summary["xi_ordering"]) {
    std::printf("  [info] %s vs %s at tau=1: %.3f vs %.3f\n", entry["xi0.1"].get<std::string>().c_str(),
                entry["xi1"].get<std::string>().c_str(), entry["P_xi0.1_tau1"].get<double>(),
                entry["P_xi1_tau1"].get<double>());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian memoryless quasi-Newton benchmark driver"};
  app.require_subcommand(1);

  std::string config_path, out_dir, measure_name = "iters";
  int threads = 1;
  auto* run = app.add_subcommand("run", "Run an experiment grid and write runs.csv, profiles and summary.json");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--measure", measure_name, "Primary profile measure")->check(CLI::IsMember({"iters", "time"}));

  std::string runs_path;
  auto* profile = app.add_subcommand("profile", "Recompute performance profiles from a runs.csv");
  profile->add_option("--runs", runs_path, "runs.csv written by `bench run`")->required();
  profile->add_option("--out", out_dir, "Output directory")->required();
  profile->add_option("--measure", measure_name, "Primary profile measure")->check(CLI::IsMember({"iters", "time"}));

  std::string problem_name = "rayleigh", solver_name;
  long long n = -1, p = -1, count = -1;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_iters = 10000;
  auto* solve = app.add_subcommand("solve", "Single run; streams the trace to stdout as CSV");
  solve->add_option("--problem", problem_name, "rayleigh or offdiag")->check(CLI::IsMember({"rayleigh", "offdiag"}));
  solve->add_option("--n", n, "Ambient dimension");
  solve->add_option("--p", p, "Columns (offdiag)");
  solve->add_option("--N", count, "Number of matrices (offdiag)");
  solve->add_option("--seed", seed, "Instance seed");
  solve->add_option("--solver", solver_name, "Solver id, e.g. broyden_bfgs_lf_xi0.1_dr or dy")->required();
  solve->add_option("--tol", tol, "Gradient-norm tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    const riemopt::Measure measure = riemopt::measure_from_string(measure_name);

    if (*run) {
      const auto out = riemopt::run_benchmark(config_path, out_dir, threads, measure);
      print_summary(out, measure);
      return 0;
    }

    if (*profile) {
      std::ifstream in(runs_path);
      if (!in) throw riemopt::Error(riemopt::ErrorKind::InvalidConfig, "cannot open '" + runs_path + "'");
      const auto records = riemopt::read_runs_csv(in);
      const auto out = riemopt::write_profiles(records, out_dir, measure);
      print_summary(out, measure);
      return 0;
    }

    const riemopt::ProblemKind kind = riemopt::problem_kind_from_string(problem_name);
    riemopt::ProblemDims dims = riemopt::default_dims(kind);
    if (n > 0) dims.n = n;
    if (kind == riemopt::ProblemKind::OffDiagonal) {
      if (p > 0) dims.p = p;
      if (count > 0) dims.count = count;
    }
    riemopt::SolverSpec spec = riemopt::parse_solver_id(solver_name);
    spec.config.tol = tol;
    spec.config.max_iters = max_iters;
    spec.config.record_trace = false;

    const auto inst = riemopt::gen_instance(kind, dims, seed);
    riemopt::SolverHooks hooks;
    riemopt::write_trace_header(std::cout);
    hooks.on_trace = [](const riemopt::IterationTrace& row) { riemopt::write_trace_row(std::cout, row); };
    const auto result = riemopt::solve(inst, inst.initial_point(), spec.config, hooks);
    std::cout.flush();
    nlohmann::json j = result;
    j.erase("trace");
    j["solver"] = spec.id;
    j["instance"] = inst.descriptor();
    std::cerr << j.dump() << '\n';
    return 0;
  } catch (const riemopt::Error& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return e.kind() == riemopt::ErrorKind::InvalidConfig || e.kind() == riemopt::ErrorKind::ContractViolation
               ? kUsageError
               : 1;
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }
}
