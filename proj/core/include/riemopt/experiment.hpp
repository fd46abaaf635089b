#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riemopt/problems.hpp"
#include "riemopt/profile.hpp"
#include "riemopt/solver.hpp"

namespace riemopt {

/// A solver with a stable string id, e.g. "broyden_bfgs_lf_xi0.8_dr" or "dy_dr".
struct SolverSpec {
  std::string id;
  SolverConfig config;
};

/// Parses `[broyden_]<bfgs|preconvex>_<lf|powell>_xi<value>[_<dr|proj|invr>]`
/// or `<fr|dy|prp|hs|hz>[_<dr|proj|invr>]`. Conjugate-gradient ids default to
/// c2 = 0.1. Throws InvalidConfig on anything else.
SolverSpec parse_solver_id(const std::string& id);

/// Canonical id for a configuration.
std::string solver_id(const SolverConfig& cfg);

struct ExperimentConfig {
  ProblemKind kind = ProblemKind::Rayleigh;
  ProblemDims dims;
  int instances = 100;
  std::uint64_t seed_base = 0;
  std::vector<SolverSpec> solvers;
};

/// Accepts {problem: {kind, dims, instances, seed_base}, solvers: [...], tol,
/// max_iters, line_search: {c1, c2, alpha_init, max_ls_evals}}. A solver entry
/// is an id string or an object with "id" and/or explicit keys ("direction",
/// "phi_mode", "z_mode", "xi", "nu_hat", "hz_mu", "transport",
/// "preconvex_mu_reciprocal", "c1", "c2", "alpha_init", "max_ls_evals").
/// Solver keys override the top-level settings. Throws InvalidConfig.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Instance i uses seed seed_base + i.
InstanceDescriptor instance_descriptor(const ExperimentConfig& cfg, int index);

struct RunRecord {
  int instance = 0;
  std::uint64_t seed = 0;
  std::string solver;
  bool converged = false;
  int iters = 0;
  double time_ms = 0.0;
  double final_f = 0.0;
  double final_gnorm = 0.0;
  std::string failure;  // empty when converged
};

/// Runs every (instance, solver) pair on `threads` workers. Records come back
/// sorted by (instance, solver id) whatever the scheduling.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, int threads = 1);

enum class Measure { Iterations, Time };

Measure measure_from_string(const std::string& name);
std::string to_string(Measure m);

/// Failures cost +inf. Iteration costs are clamped to >= 1.
CostTable cost_table(const std::vector<RunRecord>& records, Measure measure);

/// Columns: instance,seed,solver,converged,iters,time_ms,final_f,final_gnorm,failure
void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_runs_csv(std::istream& is);

struct BenchmarkOutputs {
  std::vector<RunRecord> records;
  ProfileTable iters_profile;
  ProfileTable time_profile;
  nlohmann::json summary;
};

/// Writes profile_iters.csv, profile_time.csv and summary.json for `records` into `out_dir`.
BenchmarkOutputs write_profiles(const std::vector<RunRecord>& records, const std::filesystem::path& out_dir,
                                Measure primary);

/// Loads the config, runs it and writes runs.csv plus the profile outputs.
BenchmarkOutputs run_benchmark(const std::filesystem::path& config_file, const std::filesystem::path& out_dir,
                               int threads = 1, Measure primary = Measure::Iterations);

}  // namespace riemopt
