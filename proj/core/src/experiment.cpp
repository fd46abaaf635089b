#include "riemopt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "riemopt/error.hpp"

namespace riemopt {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& context) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) invalid("cannot parse number '" + text + "' in " + context);
  return value;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::optional<TransportKind> transport_from_token(const std::string& t) {
  if (t == "dr" || t == "differentiated_retraction") return TransportKind::DifferentiatedRetraction;
  if (t == "proj" || t == "projection") return TransportKind::ProjectionTransport;
  if (t == "invr" || t == "inverse_retraction") return TransportKind::InverseRetraction;
  return std::nullopt;
}

std::optional<DirectionKind> cg_from_token(const std::string& t) {
  if (t == "fr") return DirectionKind::FR;
  if (t == "dy") return DirectionKind::DY;
  if (t == "prp") return DirectionKind::PRP;
  if (t == "hs") return DirectionKind::HS;
  if (t == "hz") return DirectionKind::HZ;
  return std::nullopt;
}

PhiMode phi_from_string(const std::string& s) {
  if (s == "bfgs") return PhiMode::BFGS;
  if (s == "preconvex") return PhiMode::Preconvex;
  invalid("unknown phi_mode '" + s + "'");
}

ZMode z_from_string(const std::string& s) {
  if (s == "li_fukushima" || s == "lf") return ZMode::LiFukushima;
  if (s == "powell") return ZMode::Powell;
  invalid("unknown z_mode '" + s + "'");
}

DirectionKind direction_from_string(const std::string& s) {
  if (s == "broyden") return DirectionKind::Broyden;
  if (auto cg = cg_from_token(s)) return *cg;
  invalid("unknown direction '" + s + "'");
}

ProblemDims parse_dims(const json& dims, ProblemKind kind) {
  ProblemDims d = default_dims(kind);
  if (dims.is_array()) {
    if (dims.empty() || dims.size() > 3) invalid("dims array must have 1 to 3 entries");
    d.n = dims[0].get<Index>();
    if (dims.size() > 1) d.p = dims[1].get<Index>();
    if (dims.size() > 2) d.count = dims[2].get<Index>();
  } else if (dims.is_object()) {
    if (dims.contains("n")) d.n = dims["n"].get<Index>();
    if (dims.contains("p")) d.p = dims["p"].get<Index>();
    if (dims.contains("N")) d.count = dims["N"].get<Index>();
  } else {
    invalid("dims must be an object or an array");
  }
  if (kind == ProblemKind::Rayleigh) {
    d.p = 1;
    d.count = 1;
  }
  if (d.n < 1 || d.p < 1 || d.count < 1) invalid("dims must be positive");
  return d;
}

void apply_line_search_keys(const json& j, LineSearchConfig& ls) {
  if (j.contains("c1")) ls.c1 = j["c1"].get<double>();
  if (j.contains("c2")) ls.c2 = j["c2"].get<double>();
  if (j.contains("alpha_init")) ls.alpha_init = j["alpha_init"].get<double>();
  if (j.contains("alpha_max")) ls.alpha_max = j["alpha_max"].get<double>();
  if (j.contains("max_ls_evals")) ls.max_evals = j["max_ls_evals"].get<int>();
}

struct GlobalSettings {
  std::optional<double> tol;
  std::optional<int> max_iters;
  json line_search = json::object();
};

SolverSpec parse_solver_entry(const json& entry, const GlobalSettings& global) {
  static const std::set<std::string> known{"id",      "direction", "phi_mode",   "z_mode", "xi",
                                           "nu_hat",  "hz_mu",     "transport",  "c1",     "c2",
                                           "alpha_init", "alpha_max", "max_ls_evals", "tol", "max_iters",
                                           "preconvex_mu_reciprocal"};
  SolverSpec spec;
  bool has_id = false;
  if (entry.is_string()) {
    spec = parse_solver_id(entry.get<std::string>());
    has_id = true;
  } else if (entry.is_object()) {
    for (const auto& [key, _] : entry.items()) {
      if (!known.count(key)) invalid("unknown solver key '" + key + "'");
    }
    if (entry.contains("id")) {
      spec = parse_solver_id(entry["id"].get<std::string>());
      has_id = true;
    }
  } else {
    invalid("solver entries must be strings or objects");
  }

  SolverConfig& cfg = spec.config;
  if (global.tol) cfg.tol = *global.tol;
  if (global.max_iters) cfg.max_iters = *global.max_iters;
  apply_line_search_keys(global.line_search, cfg.line_search);

  if (entry.is_object()) {
    if (entry.contains("direction")) cfg.direction = direction_from_string(entry["direction"].get<std::string>());
    if (entry.contains("phi_mode")) cfg.phi_mode = phi_from_string(entry["phi_mode"].get<std::string>());
    if (entry.contains("z_mode")) cfg.z_mode = z_from_string(entry["z_mode"].get<std::string>());
    if (entry.contains("xi")) cfg.xi = entry["xi"].get<double>();
    if (entry.contains("nu_hat")) cfg.nu_hat = entry["nu_hat"].get<double>();
    if (entry.contains("hz_mu")) cfg.hz_mu = entry["hz_mu"].get<double>();
    if (entry.contains("preconvex_mu_reciprocal")) {
      cfg.preconvex_mu_reciprocal = entry["preconvex_mu_reciprocal"].get<bool>();
    }
    if (entry.contains("transport")) {
      const auto t = transport_from_token(entry["transport"].get<std::string>());
      if (!t) invalid("unknown transport '" + entry["transport"].get<std::string>() + "'");
      cfg.transport = *t;
    }
    if (entry.contains("tol")) cfg.tol = entry["tol"].get<double>();
    if (entry.contains("max_iters")) cfg.max_iters = entry["max_iters"].get<int>();
    if (!entry.contains("c2") && !global.line_search.contains("c2") && !has_id) {
      cfg.line_search.c2 = cfg.direction == DirectionKind::Broyden ? 0.9 : 0.1;
    }
    apply_line_search_keys(entry, cfg.line_search);
  }
  if (!has_id) spec.id = solver_id(cfg);

  try {
    cfg.validate();
  } catch (const Error& e) {
    invalid("solver '" + spec.id + "': " + e.what());
  }
  return spec;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json profile_at_one(const ProfileTable& profile) {
  json out = json::object();
  for (std::size_t s = 0; s < profile.solvers().size(); ++s) out[profile.solvers()[s]] = profile.evaluate(s, 1.0);
  return out;
}

}  // namespace

SolverSpec parse_solver_id(const std::string& id) {
  SolverSpec spec;
  SolverConfig& cfg = spec.config;

  std::string body = id;
  const std::string prefix = "broyden_";
  const bool broyden_prefix = body.rfind(prefix, 0) == 0;
  if (broyden_prefix) body = body.substr(prefix.size());
  const auto tokens = split(body, '_');
  if (tokens.empty()) invalid("empty solver id");

  if (const auto cg = cg_from_token(tokens[0]); cg && !broyden_prefix) {
    cfg.direction = *cg;
    cfg.line_search.c2 = 0.1;
    if (tokens.size() > 2) invalid("malformed solver id '" + id + "'");
    if (tokens.size() == 2) {
      const auto t = transport_from_token(tokens[1]);
      if (!t) invalid("unknown transport in solver id '" + id + "'");
      cfg.transport = *t;
    }
    spec.id = solver_id(cfg);
    return spec;
  }

  if (tokens.size() < 3 || tokens.size() > 4) invalid("malformed solver id '" + id + "'");
  cfg.direction = DirectionKind::Broyden;
  cfg.phi_mode = phi_from_string(tokens[0]);
  cfg.z_mode = z_from_string(tokens[1]);
  if (tokens[2].rfind("xi", 0) != 0) invalid("solver id '" + id + "' lacks an xi<value> token");
  cfg.xi = parse_double(tokens[2].substr(2), "solver id '" + id + "'");
  if (!(cfg.xi >= 0.0 && cfg.xi <= 1.0)) invalid("xi out of [0, 1] in solver id '" + id + "'");
  if (tokens.size() == 4) {
    const auto t = transport_from_token(tokens[3]);
    if (!t) invalid("unknown transport in solver id '" + id + "'");
    cfg.transport = *t;
  }
  spec.id = solver_id(cfg);
  return spec;
}

std::string solver_id(const SolverConfig& cfg) {
  if (cfg.direction != DirectionKind::Broyden) {
    return to_string(cfg.direction) + "_" + to_string(cfg.transport);
  }
  return "broyden_" + to_string(cfg.phi_mode) + "_" + to_string(cfg.z_mode) + "_xi" + format_number(cfg.xi) + "_" +
         to_string(cfg.transport);
}

ExperimentConfig parse_experiment_config(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  try {
    ExperimentConfig cfg;
    if (!j.contains("problem")) invalid("config lacks 'problem'");
    const json& problem = j["problem"];
    const json* section = &problem;
    if (problem.is_string()) {
      cfg.kind = problem_kind_from_string(problem.get<std::string>());
      section = &j;
    } else if (problem.is_object()) {
      cfg.kind = problem_kind_from_string(problem.at("kind").get<std::string>());
    } else {
      invalid("'problem' must be a string or an object");
    }

    if (section->contains("dims")) {
      cfg.dims = parse_dims((*section)["dims"], cfg.kind);
    } else {
      json flat = json::object();
      for (const char* key : {"n", "p", "N"}) {
        if (section->contains(key)) flat[key] = (*section)[key];
      }
      cfg.dims = parse_dims(flat, cfg.kind);
    }
    if (section->contains("instances")) cfg.instances = (*section)["instances"].get<int>();
    if (section->contains("seed_base")) cfg.seed_base = (*section)["seed_base"].get<std::uint64_t>();
    if (cfg.instances < 1) invalid("'instances' must be positive");

    GlobalSettings global;
    if (j.contains("tol")) global.tol = j["tol"].get<double>();
    if (j.contains("max_iters")) global.max_iters = j["max_iters"].get<int>();
    if (j.contains("line_search")) {
      if (!j["line_search"].is_object()) invalid("'line_search' must be an object");
      global.line_search = j["line_search"];
    }

    if (!j.contains("solvers") || !j["solvers"].is_array() || j["solvers"].empty()) {
      invalid("config needs a non-empty 'solvers' array");
    }
    std::set<std::string> seen;
    for (const auto& entry : j["solvers"]) {
      SolverSpec spec = parse_solver_entry(entry, global);
      if (!seen.insert(spec.id).second) invalid("duplicate solver id '" + spec.id + "'");
      cfg.solvers.push_back(std::move(spec));
    }
    return cfg;
  } catch (const json::exception& e) {
    invalid(std::string("malformed config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_experiment_config(j);
}

InstanceDescriptor instance_descriptor(const ExperimentConfig& cfg, int index) {
  return InstanceDescriptor{cfg.kind, cfg.dims, cfg.seed_base + static_cast<std::uint64_t>(index)};
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, int threads) {
  std::vector<ProblemInstance> instances;
  instances.reserve(static_cast<std::size_t>(cfg.instances));
  for (int i = 0; i < cfg.instances; ++i) instances.push_back(gen_instance(instance_descriptor(cfg, i)));

  const std::size_t ns = cfg.solvers.size();
  const std::size_t total = instances.size() * ns;
  std::vector<RunRecord> records(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const std::size_t i = task / ns;
      const SolverSpec& spec = cfg.solvers[task % ns];
      const ProblemInstance& inst = instances[i];
      SolverConfig sc = spec.config;
      sc.record_trace = false;

      RunRecord rec;
      rec.instance = static_cast<int>(i);
      rec.seed = inst.seed();
      rec.solver = spec.id;
      try {
        const RunResult r = solve(inst, inst.initial_point(), sc);
        rec.converged = r.converged;
        rec.iters = r.iters;
        rec.time_ms = r.elapsed * 1000.0;
        rec.final_f = r.final_f;
        rec.final_gnorm = r.final_gnorm;
        if (r.failure_reason) rec.failure = to_string(*r.failure_reason);
      } catch (const std::exception& e) {
        rec.converged = false;
        rec.failure = "error";
        rec.final_f = std::numeric_limits<double>::quiet_NaN();
        rec.final_gnorm = std::numeric_limits<double>::quiet_NaN();
      }
      records[task] = std::move(rec);
    }
  };

  const int nthreads = std::max(1, threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }

  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return a.instance != b.instance ? a.instance < b.instance : a.solver < b.solver;
  });
  return records;
}

Measure measure_from_string(const std::string& name) {
  if (name == "iters" || name == "iterations") return Measure::Iterations;
  if (name == "time") return Measure::Time;
  invalid("unknown measure '" + name + "'");
}

std::string to_string(Measure m) { return m == Measure::Iterations ? "iters" : "time"; }

CostTable cost_table(const std::vector<RunRecord>& records, Measure measure) {
  std::set<int> problem_set;
  std::set<std::string> solver_set;
  for (const auto& r : records) {
    problem_set.insert(r.instance);
    solver_set.insert(r.solver);
  }
  std::vector<std::string> problems;
  std::map<int, std::size_t> problem_index;
  for (int p : problem_set) {
    problem_index[p] = problems.size();
    problems.push_back(std::to_string(p));
  }
  std::vector<std::string> solvers(solver_set.begin(), solver_set.end());
  std::map<std::string, std::size_t> solver_index;
  for (std::size_t s = 0; s < solvers.size(); ++s) solver_index[solvers[s]] = s;

  CostTable table(std::move(problems), std::move(solvers));
  constexpr double tiny = std::numeric_limits<double>::min();
  for (const auto& r : records) {
    if (!r.converged) continue;
    const double t = measure == Measure::Iterations ? std::max(1.0, static_cast<double>(r.iters))
                                                    : std::max(tiny, r.time_ms);
    table.at(problem_index[r.instance], solver_index[r.solver]) = t;
  }
  return table;
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << "instance,seed,solver,converged,iters,time_ms,final_f,final_gnorm,failure\n";
  for (const auto& r : records) {
    os << r.instance << ',' << r.seed << ',' << r.solver << ',' << (r.converged ? 1 : 0) << ',' << r.iters << ','
       << csv_number(r.time_ms) << ',' << csv_number(r.final_f) << ',' << csv_number(r.final_gnorm) << ','
       << r.failure << '\n';
  }
}

std::vector<RunRecord> read_runs_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) invalid("runs file is empty");
  if (line.rfind("instance,seed,solver,converged,iters", 0) != 0) invalid("runs file has an unexpected header");
  std::vector<RunRecord> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) invalid("runs file line " + std::to_string(lineno) + " has " + std::to_string(f.size()) + " fields");
    RunRecord r;
    const std::string ctx = "runs file line " + std::to_string(lineno);
    r.instance = static_cast<int>(parse_double(f[0], ctx));
    r.seed = std::stoull(f[1]);
    r.solver = f[2];
    r.converged = f[3] == "1";
    r.iters = static_cast<int>(parse_double(f[4], ctx));
    r.time_ms = std::strtod(f[5].c_str(), nullptr);
    r.final_f = std::strtod(f[6].c_str(), nullptr);
    r.final_gnorm = std::strtod(f[7].c_str(), nullptr);
    r.failure = f[8];
    out.push_back(std::move(r));
  }
  return out;
}

BenchmarkOutputs write_profiles(const std::vector<RunRecord>& records, const std::filesystem::path& out_dir,
                                Measure primary) {
  std::filesystem::create_directories(out_dir);
  ProfileTable iters = performance_profile(cost_table(records, Measure::Iterations));
  ProfileTable time = performance_profile(cost_table(records, Measure::Time));
  {
    std::ofstream os(out_dir / "profile_iters.csv");
    write_profile_csv(os, iters);
  }
  {
    std::ofstream os(out_dir / "profile_time.csv");
    write_profile_csv(os, time);
  }

  json solvers = json::array();
  for (std::size_t s = 0; s < iters.solvers().size(); ++s) {
    const std::string& id = iters.solvers()[s];
    int runs = 0, converged = 0;
    std::map<std::string, int> failures;
    std::vector<int> its;
    for (const auto& r : records) {
      if (r.solver != id) continue;
      ++runs;
      if (r.converged) {
        ++converged;
        its.push_back(r.iters);
      } else {
        ++failures[r.failure];
      }
    }
    std::sort(its.begin(), its.end());
    json entry{{"id", id},
               {"runs", runs},
               {"converged", converged},
               {"failures", failures},
               {"median_iters", its.empty() ? json(nullptr) : json(its[its.size() / 2])},
               {"P_iters_tau1", iters.evaluate(s, 1.0)},
               {"P_time_tau1", time.evaluate(s, 1.0)}};
    solvers.push_back(std::move(entry));
  }

  // Pairs that differ only in xi0.1 vs xi1: does xi = 0.1 win more often at tau = 1?
  json ordering = json::array();
  for (std::size_t s = 0; s < iters.solvers().size(); ++s) {
    const std::string& id = iters.solvers()[s];
    const auto pos = id.find("_xi0.1");
    if (pos == std::string::npos) continue;
    std::string other = id;
    other.replace(pos, 6, "_xi1");
    const auto it = std::find(iters.solvers().begin(), iters.solvers().end(), other);
    if (it == iters.solvers().end()) continue;
    const auto o = static_cast<std::size_t>(it - iters.solvers().begin());
    ordering.push_back({{"xi0.1", id},
                        {"xi1", other},
                        {"P_xi0.1_tau1", iters.evaluate(s, 1.0)},
                        {"P_xi1_tau1", iters.evaluate(o, 1.0)},
                        {"xi0.1_dominates_at_tau1", iters.evaluate(s, 1.0) >= iters.evaluate(o, 1.0)}});
  }

  json summary{{"runs", records.size()},
               {"problems", iters.problems().size()},
               {"primary_measure", to_string(primary)},
               {"solvers", solvers},
               {"P_tau1_primary", profile_at_one(primary == Measure::Iterations ? iters : time)},
               {"xi_ordering", ordering}};
  {
    std::ofstream os(out_dir / "summary.json");
    os << summary.dump(2) << '\n';
  }
  return BenchmarkOutputs{records, std::move(iters), std::move(time), std::move(summary)};
}

BenchmarkOutputs run_benchmark(const std::filesystem::path& config_file, const std::filesystem::path& out_dir,
                               int threads, Measure primary) {
  const ExperimentConfig cfg = load_experiment_config(config_file);
  std::vector<RunRecord> records = run_experiment(cfg, threads);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream os(out_dir / "runs.csv");
    write_runs_csv(os, records);
  }
  BenchmarkOutputs out = write_profiles(records, out_dir, primary);
  out.summary["problem"] = instance_descriptor(cfg, 0);
  out.summary["problem"].erase("seed");
  out.summary["problem"]["instances"] = cfg.instances;
  out.summary["problem"]["seed_base"] = cfg.seed_base;
  {
    std::ofstream os(out_dir / "summary.json");
    os << out.summary.dump(2) << '\n';
  }
  return out;
}

}  // namespace riemopt
