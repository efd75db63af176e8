#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vecfog/kernels.hpp"
#include "vecfog/milp_model.hpp"
#include "vecfog/power_model.hpp"

namespace vecfog {

enum class SolveStatus { Optimal, Infeasible, GapLimit };

std::string_view status_name(SolveStatus s);

struct SolveOptions {
  double gap_tol = 1e-9;     // relative; nodes within it of the incumbent are pruned
  double time_limit = 60.0;  // seconds
  KernelBackend backend = KernelBackend::Serial;
  std::size_t warm_start_budget = std::size_t{256} << 20;  // bytes of saved tableaus
  bool pool_identical_tasks = true;
  bool canonical_ties = true;  // pick the preferred activation pattern among optima
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;                   // one per model variable
  std::vector<std::vector<double>> allocation;  // [task][pn] MIPS
  double objective = 0.0;                       // watts
  double bound = 0.0;                           // best proven lower bound
  double gap = 0.0;
  PowerBreakdown breakdown;
  std::vector<double> per_vec_mips;  // by cluster - 1
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double solve_time = 0.0;  // seconds

  double pn_load(std::size_t k) const;
};

// Exact branch and bound. Among optimal solutions the returned one has the
// preferred activation vector: compared entry by entry (task-major splits,
// then nodes, then devices) the first difference is a 1 in the winner.
Solution solve(const MilpModel& model, const SolveOptions& options = {});

// Fills binaries, objective, breakdown and per-VEC totals from an allocation.
Solution make_solution(const MilpModel& model, std::vector<std::vector<double>> allocation,
                       SolveStatus status);

// Exhaustive search over allocations on a MIPS grid, with feasibility and cost
// evaluated directly on the topology. Throws SizeLimit above 3 tasks or 6
// processing nodes.
Solution brute_force(const MilpModel& model, double grid_step = 100.0,
                     KernelBackend backend = KernelBackend::Serial);

struct ResidualReport {
  std::map<std::string, double> max_violation;  // by constraint label
  double integrality = 0.0;                     // worst distance of a binary from {0, 1}
  double objective_delta = 0.0;  // relative, vs total_power; NaN if a device is overloaded
  double max_residual() const;
};

ResidualReport verify(const Solution& solution, const MilpModel& model);

}  // namespace vecfog
