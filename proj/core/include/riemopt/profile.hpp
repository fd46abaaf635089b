#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace riemopt {

/// Cost t_{p,s} for every (problem, solver) pair; +inf marks a failure.
struct CostTable {
  std::vector<std::string> problems;
  std::vector<std::string> solvers;
  std::vector<double> costs;  // problem-major: costs[p * solvers.size() + s]

  CostTable() = default;
  CostTable(std::vector<std::string> problem_ids, std::vector<std::string> solver_ids);

  double& at(std::size_t p, std::size_t s) { return costs[p * solvers.size() + s]; }
  double at(std::size_t p, std::size_t s) const { return costs[p * solvers.size() + s]; }
};

/// Dolan-More performance profile. The tau grid holds every distinct finite
/// ratio plus 1, so `values` is the exact step function sampled at its jumps.
class ProfileTable {
public:
  const std::vector<std::string>& problems() const noexcept { return problems_; }
  const std::vector<std::string>& solvers() const noexcept { return solvers_; }
  const std::vector<double>& tau_grid() const noexcept { return tau_; }

  double cost(std::size_t p, std::size_t s) const { return costs_[p * solvers_.size() + s]; }
  /// r_{p,s} = t_{p,s} / min_s' t_{p,s'}; +inf for failures or all-failed problems.
  double ratio(std::size_t p, std::size_t s) const { return ratios_[p * solvers_.size() + s]; }
  /// P_s at tau_grid()[i].
  double value(std::size_t s, std::size_t i) const { return values_[s * tau_.size() + i]; }

  /// P_s(tau) = |{p : r_{p,s} <= tau}| / |P| for any tau.
  double evaluate(std::size_t s, double tau) const;

  std::size_t solver_index(const std::string& id) const;

private:
  friend ProfileTable performance_profile(const CostTable& table);

  std::vector<std::string> problems_;
  std::vector<std::string> solvers_;
  std::vector<double> costs_;
  std::vector<double> ratios_;
  std::vector<double> tau_;
  std::vector<double> values_;
};

/// Throws EmptyTable when there are no (problem, solver) pairs and
/// ContractViolation on non-positive or NaN costs.
ProfileTable performance_profile(const CostTable& table);

/// Plot-ready CSV: header `tau,<solver>...`, one row per grid point.
void write_profile_csv(std::ostream& os, const ProfileTable& profile);

}  // namespace riemopt
