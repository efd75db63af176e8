#include <omp.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include "vecfog/errors.hpp"
#include "vecfog/solver.hpp"

namespace vecfog {
namespace {

constexpr std::size_t kMaxTasks = 3;
constexpr std::size_t kMaxNodes = 6;
constexpr std::int64_t kMaxCombinations = 50'000'000;

// All ways to place `units` grid steps on `parts` nodes, using at most
// `max_used` of them.
void compositions(int units, std::size_t parts, int max_used, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(units);
    int used = 0;
    for (int u : cur) used += u > 0 ? 1 : 0;
    if (used <= max_used) out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int u = units; u >= 0; --u) {
    cur.push_back(u);
    compositions(units - u, parts, max_used, cur, out);
    cur.pop_back();
  }
}

// Loads every device and directed link, then checks each rated limit.
class Checker {
 public:
  Checker(const MilpModel& m) : m_(m), topo_(*m.topology) {}

  bool feasible(const std::vector<std::vector<double>>& alloc) const {
    std::vector<double> device(topo_.devices().size(), 0.0);
    std::map<std::pair<DeviceId, DeviceId>, double> link;
    std::map<DeviceId, double> wireless;
    for (std::size_t s = 0; s < m_.tasks.size(); ++s) {
      for (std::size_t k = 0; k < m_.pns.size(); ++k) {
        const double x = alloc[s][k];
        if (x == 0.0) continue;
        const double f = m_.tasks[s].drr * x;
        const auto& path = topo_.path(m_.tasks[s].source_cluster, m_.pns[k]);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
          device[path[i].index()] += f;
          link[{path[i], path[i + 1]}] += f;
          if (topo_.device(path[i]).kind == DeviceKind::AccessPoint &&
              topo_.device(path[i + 1]).kind == DeviceKind::VnWirelessAdapter) {
            wireless[path[i]] += f;
          }
        }
        device[m_.pns[k].index()] += x;
      }
    }
    constexpr double slack = 1e-9;
    for (const Device& d : topo_.devices()) {
      if (d.kind == DeviceKind::AccessPoint) continue;
      const double cap = topo_.profile(d.id).capacity;
      if (device[d.id.index()] > cap * (1.0 + slack)) return false;
    }
    for (const auto& [l, load] : link) {
      if (load > topo_.link_capacity(l.first, l.second) * (1.0 + slack)) return false;
    }
    for (const auto& [ap, load] : wireless) {
      if (load > topo_.profile(ap).capacity * (1.0 + slack)) return false;
    }
    return true;
  }

  double cost(const std::vector<std::vector<double>>& alloc) const {
    return total_power(topo_, assignment_from_allocation(topo_, m_.tasks, m_.pns, alloc)).total;
  }

 private:
  const MilpModel& m_;
  const Topology& topo_;
};

}  // namespace

Solution brute_force(const MilpModel& m, double grid_step, KernelBackend backend) {
  const std::size_t S = m.tasks.size();
  const std::size_t P = m.pns.size();
  if (S > kMaxTasks || P > kMaxNodes) {
    throw SizeLimit("exhaustive search is limited to " + std::to_string(kMaxTasks) + " tasks and " +
                    std::to_string(kMaxNodes) + " processing nodes");
  }
  if (!(grid_step > 0.0)) throw ConfigError("grid step must be positive");
  if (S == 0) return make_solution(m, {}, SolveStatus::Optimal);

  std::vector<std::vector<std::vector<int>>> options(S);
  std::int64_t total = 1;
  for (std::size_t s = 0; s < S; ++s) {
    const double units = m.tasks[s].omega / grid_step;
    if (std::fabs(units - std::round(units)) > 1e-9) {
      throw ConfigError("task demand is not a multiple of the grid step");
    }
    const int max_used = m.tasks[s].split_limit == kUnboundedSplit
                             ? static_cast<int>(P)
                             : std::min(m.tasks[s].split_limit, static_cast<int>(P));
    std::vector<int> cur;
    compositions(static_cast<int>(std::lround(units)), P, max_used, cur, options[s]);
    total *= static_cast<std::int64_t>(options[s].size());
    if (total > kMaxCombinations) throw SizeLimit("too many grid allocations to enumerate");
  }

  const Checker checker(m);
  auto decode = [&](std::int64_t idx) {
    std::vector<std::vector<double>> alloc(S, std::vector<double>(P, 0.0));
    for (std::size_t s = S; s-- > 0;) {
      const auto n = static_cast<std::int64_t>(options[s].size());
      const auto& opt = options[s][static_cast<std::size_t>(idx % n)];
      idx /= n;
      for (std::size_t k = 0; k < P; ++k) alloc[s][k] = opt[k] * grid_step;
    }
    return alloc;
  };

  // Best (cost, index); the index breaks ties so every backend agrees.
  double best_cost = std::numeric_limits<double>::infinity();
  std::int64_t best_idx = -1;
  auto consider = [&](std::int64_t idx, double& cost, std::int64_t& at) {
    const auto alloc = decode(idx);
    if (!checker.feasible(alloc)) return;
    const double c = checker.cost(alloc);
    if (c < cost || (c == cost && idx < at)) {
      cost = c;
      at = idx;
    }
  };

  if (backend == KernelBackend::OpenMP) {
#pragma omp parallel
    {
      double local_cost = std::numeric_limits<double>::infinity();
      std::int64_t local_idx = -1;
#pragma omp for schedule(static)
      for (std::int64_t idx = 0; idx < total; ++idx) consider(idx, local_cost, local_idx);
#pragma omp critical
      {
        if (local_idx >= 0 &&
            (local_cost < best_cost || (local_cost == best_cost && local_idx < best_idx))) {
          best_cost = local_cost;
          best_idx = local_idx;
        }
      }
    }
  } else {
    for (std::int64_t idx = 0; idx < total; ++idx) consider(idx, best_cost, best_idx);
  }

  if (best_idx < 0) {
    Solution s;
    s.status = SolveStatus::Infeasible;
    s.objective = std::numeric_limits<double>::infinity();
    return s;
  }
  Solution s = make_solution(m, decode(best_idx), SolveStatus::Optimal);
  s.objective = s.breakdown.total;
  s.nodes = total;
  return s;
}

}  // namespace vecfog
