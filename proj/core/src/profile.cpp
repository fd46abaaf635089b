#include "riemopt/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "riemopt/error.hpp"

namespace riemopt {

CostTable::CostTable(std::vector<std::string> problem_ids, std::vector<std::string> solver_ids)
    : problems(std::move(problem_ids)),
      solvers(std::move(solver_ids)),
      costs(problems.size() * solvers.size(), std::numeric_limits<double>::infinity()) {}

double ProfileTable::evaluate(std::size_t s, double tau) const {
  std::size_t count = 0;
  for (std::size_t p = 0; p < problems_.size(); ++p) {
    if (ratio(p, s) <= tau) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(problems_.size());
}

std::size_t ProfileTable::solver_index(const std::string& id) const {
  const auto it = std::find(solvers_.begin(), solvers_.end(), id);
  if (it == solvers_.end()) throw Error(ErrorKind::ContractViolation, "unknown solver '" + id + "'");
  return static_cast<std::size_t>(it - solvers_.begin());
}

ProfileTable performance_profile(const CostTable& table) {
  const std::size_t np = table.problems.size();
  const std::size_t ns = table.solvers.size();
  if (np == 0 || ns == 0) throw Error(ErrorKind::EmptyTable, "performance profile needs at least one pair");
  if (table.costs.size() != np * ns) throw Error(ErrorKind::ContractViolation, "cost table has the wrong size");

  constexpr double inf = std::numeric_limits<double>::infinity();
  for (double t : table.costs) {
    if (std::isnan(t) || !(t > 0.0)) throw Error(ErrorKind::ContractViolation, "costs must be positive or +inf");
  }

  ProfileTable out;
  out.problems_ = table.problems;
  out.solvers_ = table.solvers;
  out.costs_ = table.costs;
  out.ratios_.assign(np * ns, inf);

  std::vector<double> grid{1.0};
  for (std::size_t p = 0; p < np; ++p) {
    double best = inf;
    for (std::size_t s = 0; s < ns; ++s) best = std::min(best, table.at(p, s));
    if (std::isinf(best)) continue;
    for (std::size_t s = 0; s < ns; ++s) {
      const double t = table.at(p, s);
      if (std::isinf(t)) continue;
      const double r = t / best;
      out.ratios_[p * ns + s] = r;
      grid.push_back(r);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  out.tau_ = std::move(grid);

  out.values_.assign(ns * out.tau_.size(), 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<double> finite;
    for (std::size_t p = 0; p < np; ++p) {
      if (std::isfinite(out.ratio(p, s))) finite.push_back(out.ratio(p, s));
    }
    std::sort(finite.begin(), finite.end());
    for (std::size_t i = 0; i < out.tau_.size(); ++i) {
      const auto solved = std::upper_bound(finite.begin(), finite.end(), out.tau_[i]) - finite.begin();
      out.values_[s * out.tau_.size() + i] = static_cast<double>(solved) / static_cast<double>(np);
    }
  }
  return out;
}

void write_profile_csv(std::ostream& os, const ProfileTable& profile) {
  os << "tau";
  for (const auto& s : profile.solvers()) os << ',' << s;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < profile.tau_grid().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", profile.tau_grid()[i]);
    os << buf;
    for (std::size_t s = 0; s < profile.solvers().size(); ++s) {
      std::snprintf(buf, sizeof buf, ",%.17g", profile.value(s, i));
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace riemopt
