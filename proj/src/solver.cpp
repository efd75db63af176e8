#include "vecfog/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>

#include "relaxation.hpp"
#include "vecfog/errors.hpp"

namespace vecfog {
namespace {

using Clock = std::chrono::steady_clock;
using detail::Relaxation;
using detail::TaskClass;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-7;
constexpr double kZeroTol = 1e-9;  // LP units (thousand MIPS)

struct Bounds {
  std::vector<double> lo, hi;
};

struct Branch {
  std::vector<std::pair<int, double>> down_hi;  // (column, new upper)
  std::vector<std::pair<int, double>> up_lo;    // (column, new lower)
  bool up_first = false;
};

class BranchAndBound {
 public:
  struct Result {
    bool found = false;
    bool timed_out = false;
    std::vector<double> x;
    double cost = kInf;
    double bound = kInf;  // smallest bound among nodes left open (timeout only)
  };

  BranchAndBound(const Relaxation& r, const SolveOptions& opt, Clock::time_point deadline)
      : r_(r), opt_(opt), deadline_(deadline) {}

  // Minimizes power inside `root`. With `accept_at`, stops at the first leaf
  // whose cost is at most that value.
  Result run(const Bounds& root, std::optional<double> accept_at,
             std::unique_ptr<DualSimplex> warm = nullptr);

  // Solves the LP of `b` from scratch.
  std::unique_ptr<DualSimplex> cold(const Bounds& b) const {
    auto lp = std::make_unique<DualSimplex>(r_.lp, opt_.backend);
    for (std::size_t j = 0; j < b.lo.size(); ++j) {
      if (b.lo[j] != r_.lp.lower[j] || b.hi[j] != r_.lp.upper[j]) {
        lp->set_bounds(static_cast<int>(j), b.lo[j], b.hi[j]);
      }
    }
    return lp;
  }

  double true_cost(const std::vector<double>& x) const {
    double cost = 0.0;
    for (std::size_t j = 0; j < r_.x_columns(); ++j) cost += r_.lp.cost[j] * x[j];
    for (const auto& g : r_.groups) {
      if (g.column < 0) continue;
      if (g.count > 1.0) {
        cost += g.cost * std::round(x[static_cast<std::size_t>(g.column)]);
        continue;
      }
      for (int col : g.columns) {
        if (x[static_cast<std::size_t>(col)] > 0.0) {
          cost += g.cost;
          break;
        }
      }
    }
    return cost;
  }

  std::int64_t nodes = 0;
  std::int64_t iterations = 0;

 private:
  std::optional<Branch> choose_branch(const std::vector<double>& x, const Bounds& b) const;
  std::vector<double> clean(std::vector<double> x) const;
  LpStatus solve_lp(std::unique_ptr<DualSimplex>& lp, const Bounds& b);

  const Relaxation& r_;
  const SolveOptions& opt_;
  Clock::time_point deadline_;
};

LpStatus BranchAndBound::solve_lp(std::unique_ptr<DualSimplex>& lp, const Bounds& b) {
  if (!lp) lp = cold(b);
  const auto before = lp->iterations();
  LpStatus st = lp->solve();
  iterations += lp->iterations() - before;
  if (st == LpStatus::IterationLimit) {
    lp = cold(b);
    st = lp->solve(2000000);
    iterations += lp->iterations();
    if (st == LpStatus::IterationLimit) throw Error("LP relaxation did not converge");
  }
  return st;
}

std::vector<double> BranchAndBound::clean(std::vector<double> x) const {
  for (std::size_t c = 0; c < r_.classes.size(); ++c) {
    const TaskClass& tc = r_.classes[c];
    for (std::size_t k = 0; k < r_.slots; ++k) {
      double& v = x[static_cast<std::size_t>(r_.x(c, k))];
      if (tc.counted()) {
        const double unit = tc.omega * Relaxation::kScale;
        v = std::round(v / unit) * unit;
      } else if (v <= kZeroTol) {
        v = 0.0;
      }
    }
  }
  return x;
}

std::optional<Branch> BranchAndBound::choose_branch(const std::vector<double>& x,
                                                    const Bounds& b) const {
  // Fractional activations: the one with the most idle power left unpaid.
  int best_group = -1;
  double best_score = 0.0;
  for (int g : r_.branch_order) {
    const auto& grp = r_.groups[static_cast<std::size_t>(g)];
    const double v = x[static_cast<std::size_t>(grp.column)];
    const double frac = v - std::floor(v);
    if (frac <= kIntTol || frac >= 1.0 - kIntTol) continue;
    const double score = grp.cost * std::min(frac, 1.0 - frac);
    if (best_group < 0 || score > best_score) {
      best_group = g;
      best_score = score;
    }
  }
  if (best_group >= 0) {
    const auto& grp = r_.groups[static_cast<std::size_t>(best_group)];
    const double v = x[static_cast<std::size_t>(grp.column)];
    Branch br;
    br.down_hi.emplace_back(grp.column, std::floor(v));
    if (std::floor(v) == 0.0) {
      for (int col : grp.columns) br.down_hi.emplace_back(col, 0.0);
    }
    br.up_lo.emplace_back(grp.column, std::ceil(v));
    br.up_first = true;
    return br;
  }
  // Whole-task counts: branch on the most loaded fractional count.
  int pick = -1;
  double pick_n = 0.0;
  double pick_unit = 0.0;
  for (std::size_t c = 0; c < r_.classes.size(); ++c) {
    const TaskClass& tc = r_.classes[c];
    if (!tc.counted()) continue;
    const double unit = tc.omega * Relaxation::kScale;
    for (std::size_t k = 0; k < r_.slots; ++k) {
      const int col = r_.x(c, k);
      const double n = x[static_cast<std::size_t>(col)] / unit;
      const double frac = n - std::floor(n);
      if (std::min(frac, 1.0 - frac) <= kIntTol) continue;
      if (pick < 0 || n > pick_n) {
        pick = col;
        pick_n = n;
        pick_unit = unit;
      }
    }
  }
  if (pick >= 0) {
    Branch br;
    // Clamp so round-off in count * unit never crosses the existing bounds.
    const auto j = static_cast<std::size_t>(pick);
    br.down_hi.emplace_back(pick, std::max(std::floor(pick_n) * pick_unit, b.lo[j]));
    br.up_lo.emplace_back(pick, std::min(std::ceil(pick_n) * pick_unit, b.hi[j]));
    br.up_first = pick_n - std::floor(pick_n) >= 0.5;
    return br;
  }
  // Partial split limits: too many nodes in use.
  for (std::size_t c = 0; c < r_.classes.size(); ++c) {
    const TaskClass& tc = r_.classes[c];
    if (tc.counted() || tc.split_limit == kUnboundedSplit) continue;
    int used = 0;
    int smallest = -1;
    for (std::size_t k = 0; k < r_.slots; ++k) {
      const int col = r_.x(c, k);
      const double v = x[static_cast<std::size_t>(col)];
      if (v <= kZeroTol) continue;
      ++used;
      if (b.lo[static_cast<std::size_t>(col)] < r_.epsilon &&
          (smallest < 0 || v < x[static_cast<std::size_t>(smallest)])) {
        smallest = col;
      }
    }
    if (used > tc.split_limit && smallest >= 0) {
      Branch br;
      br.down_hi.emplace_back(smallest, 0.0);
      br.up_lo.emplace_back(smallest, r_.epsilon);
      return br;
    }
  }
  // Positive allocations below the minimum unit.
  for (std::size_t c = 0; c < r_.classes.size(); ++c) {
    if (r_.classes[c].counted()) continue;
    for (std::size_t k = 0; k < r_.slots; ++k) {
      const int col = r_.x(c, k);
      const double v = x[static_cast<std::size_t>(col)];
      if (v > kZeroTol && v < r_.epsilon * (1.0 - 1e-9)) {
        Branch br;
        br.down_hi.emplace_back(col, 0.0);
        br.up_lo.emplace_back(col, r_.epsilon);
        return br;
      }
    }
  }
  return std::nullopt;
}

BranchAndBound::Result BranchAndBound::run(const Bounds& root, std::optional<double> accept_at,
                                           std::unique_ptr<DualSimplex> warm) {
  struct Node {
    Bounds b;
    std::unique_ptr<DualSimplex> lp;
    double parent_bound;
  };
  Result res;
  std::vector<Node> stack;
  stack.push_back({root, std::move(warm), -kInf});
  std::size_t saved_bytes = 0;

  auto limit = [&]() {
    double lim = accept_at ? *accept_at : kInf;
    if (res.found) lim = std::min(lim, res.cost - opt_.gap_tol * std::max(1.0, std::fabs(res.cost)));
    return lim;
  };

  while (!stack.empty()) {
    if (Clock::now() > deadline_) {
      res.timed_out = true;
      for (const Node& n : stack) res.bound = std::min(res.bound, n.parent_bound);
      return res;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.lp) saved_bytes -= std::min(saved_bytes, node.lp->tableau_bytes());
    if (node.parent_bound > limit()) continue;
    ++nodes;

    if (solve_lp(node.lp, node.b) != LpStatus::Optimal) continue;
    const double lb = node.lp->objective();
    if (lb > limit()) continue;
    std::vector<double> x = node.lp->primal();

    auto br = choose_branch(x, node.b);
    if (!br) {
      x = clean(std::move(x));
      const double cost = true_cost(x);
      if (!res.found || cost < res.cost) {
        res.found = true;
        res.cost = cost;
        res.x = std::move(x);
      }
      if (accept_at && res.cost <= *accept_at) return res;
      continue;
    }

    Node down{node.b, nullptr, lb};
    for (auto [col, v] : br->down_hi) down.b.hi[static_cast<std::size_t>(col)] = v;
    Node up{node.b, nullptr, lb};
    for (auto [col, v] : br->up_lo) up.b.lo[static_cast<std::size_t>(col)] = v;
    // A child whose new bound crosses an existing one holds no solutions.
    auto empty = [](const Node& n, const std::vector<std::pair<int, double>>& changes) {
      for (auto [col, v] : changes) {
        const auto j = static_cast<std::size_t>(col);
        if (n.b.lo[j] > n.b.hi[j]) return true;
      }
      return false;
    };
    const bool down_empty = empty(down, br->down_hi);
    const bool up_empty = empty(up, br->up_lo);
    if (down_empty || up_empty) {
      if (down_empty && up_empty) continue;
      // One live child: it inherits the parent's LP directly.
      Node& only = down_empty ? up : down;
      const auto& changes = down_empty ? br->up_lo : br->down_hi;
      only.lp = std::move(node.lp);
      for (auto [col, v] : changes) {
        const auto j = static_cast<std::size_t>(col);
        if (!only.lp->set_bounds(col, only.b.lo[j], only.b.hi[j])) {
          only.lp.reset();
          break;
        }
      }
      if (only.lp) saved_bytes += only.lp->tableau_bytes();
      stack.push_back(std::move(only));
      continue;
    }
    Node& first = br->up_first ? up : down;
    Node& second = br->up_first ? down : up;
    const auto& first_changes = br->up_first ? br->up_lo : br->down_hi;

    if (saved_bytes + node.lp->tableau_bytes() <= opt_.warm_start_budget) {
      second.lp = std::make_unique<DualSimplex>(*node.lp);
      saved_bytes += second.lp->tableau_bytes();
      const auto& changes = br->up_first ? br->down_hi : br->up_lo;
      for (auto [col, v] : changes) {
        const auto j = static_cast<std::size_t>(col);
        if (!second.lp->set_bounds(col, second.b.lo[j], second.b.hi[j])) {
          saved_bytes -= second.lp->tableau_bytes();
          second.lp.reset();
          break;
        }
      }
    }
    first.lp = std::move(node.lp);
    for (auto [col, v] : first_changes) {
      const auto j = static_cast<std::size_t>(col);
      if (!first.lp->set_bounds(col, first.b.lo[j], first.b.hi[j])) {
        first.lp.reset();
        break;
      }
    }
    if (first.lp) saved_bytes += first.lp->tableau_bytes();
    stack.push_back(std::move(second));
    stack.push_back(std::move(first));
  }
  res.bound = res.found ? res.cost : kInf;
  return res;
}

Bounds root_bounds(const Relaxation& r) { return {r.lp.lower, r.lp.upper}; }

// Spreads slot amounts over pool members: whole tasks fill members in order,
// divisible work is shared evenly by the members switched on.
std::vector<std::vector<double>> node_amounts(const MilpModel& m, const Relaxation& r,
                                              const std::vector<double>& x) {
  std::vector<std::vector<double>> amount(r.classes.size(), std::vector<double>(m.pns.size(), 0.0));
  for (std::size_t q = 0; q < r.slots; ++q) {
    const detail::Slot& sl = r.slot[q];
    if (!sl.pooled()) {
      for (std::size_t c = 0; c < r.classes.size(); ++c) {
        amount[c][sl.members.front()] = x[static_cast<std::size_t>(r.x(c, q))] / Relaxation::kScale;
      }
      continue;
    }
    const auto& g = r.groups[static_cast<std::size_t>(sl.group)];
    if (g.column < 0) continue;  // nothing can reach the pool
    const auto on = static_cast<std::size_t>(std::round(x[static_cast<std::size_t>(g.column)]));
    std::size_t member = 0;
    int room = sl.per_member;
    for (std::size_t c = 0; c < r.classes.size(); ++c) {
      const TaskClass& tc = r.classes[c];
      const double y = x[static_cast<std::size_t>(r.x(c, q))] / Relaxation::kScale;
      if (y <= 0.0) continue;
      if (on == 0) throw Error("pooled nodes carry work while switched off");
      if (tc.counted()) {
        for (auto n = std::lround(y / tc.omega); n > 0; --n) {
          if (room == 0) {
            ++member;
            room = sl.per_member;
          }
          if (member >= on) throw Error("pooled nodes hold more tasks than they fit");
          amount[c][sl.members[member]] += tc.omega;
          --room;
        }
      } else {
        for (std::size_t i = 0; i < on; ++i) amount[c][sl.members[i]] = y / static_cast<double>(on);
      }
    }
  }
  return amount;
}

// Splits pooled class allocations back onto individual tasks. Returns nothing
// when a sequential split would leave a piece below the minimum unit.
std::optional<std::vector<std::vector<double>>> disaggregate(const MilpModel& m,
                                                             const Relaxation& r,
                                                             const std::vector<double>& x) {
  const std::size_t P = m.pns.size();
  const auto amounts = node_amounts(m, r, x);
  std::vector<std::vector<double>> alloc(m.tasks.size(), std::vector<double>(P, 0.0));
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    const TaskClass& tc = r.classes[c];
    std::vector<double> amount = amounts[c];
    if (tc.counted()) {
      std::size_t k = 0;
      for (std::size_t s : tc.members) {
        while (k < P && std::round(amount[k] / tc.omega) < 1.0) ++k;
        if (k == P) throw Error("pooled allocation does not cover its tasks");
        alloc[s][k] = tc.omega;
        amount[k] -= tc.omega;
      }
      continue;
    }
    std::size_t k = 0;
    for (std::size_t s : tc.members) {
      double need = tc.omega;
      std::size_t last_used = P;
      while (need > 1e-9 * tc.omega) {
        while (k < P && amount[k] <= 1e-9 * tc.omega) ++k;
        if (k == P) break;
        double piece = std::min(need, amount[k]);
        if (need - piece <= 1e-9 * tc.omega) piece = need;
        alloc[s][k] += piece;
        amount[k] -= piece;
        need -= piece;
        last_used = k;
      }
      // Round-off can leave a sliver of demand; it stays on the last node used.
      if (need > 1e-6 || last_used == P) throw Error("pooled allocation does not cover its tasks");
      alloc[s][last_used] += need;
      for (double v : alloc[s]) {
        if (v > 0.0 && v < m.epsilon_mips * (1.0 - 1e-9)) return std::nullopt;
      }
    }
  }
  return alloc;
}

Solution solve_impl(const MilpModel& m, const SolveOptions& opt, Clock::time_point start) {
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(opt.time_limit));
  if (m.tasks.empty()) {
    return make_solution(m, {}, SolveStatus::Optimal);
  }
  const Relaxation r = detail::build_relaxation(m, opt.pool_identical_tasks);
  BranchAndBound bb(r, opt, deadline);
  const Bounds root = root_bounds(r);

  BranchAndBound::Result best = bb.run(root, std::nullopt);
  if (!best.found) {
    Solution s;
    s.status = best.timed_out ? SolveStatus::GapLimit : SolveStatus::Infeasible;
    s.objective = kInf;
    s.bound = best.timed_out ? best.bound : kInf;
    s.gap = kInf;
    s.nodes = bb.nodes;
    s.lp_iterations = bb.iterations;
    return s;
  }

  std::vector<double> x = best.x;
  SolveStatus status = best.timed_out ? SolveStatus::GapLimit : SolveStatus::Optimal;
  double bound = best.timed_out ? std::min(best.bound, best.cost) : best.cost;

  if (status == SolveStatus::Optimal && opt.canonical_ties) {
    // Walk (class, node) pairs in order and push each one as far towards
    // "in use" as an optimal solution allows, fixing it before moving on.
    const double accept = best.cost + 1e-9 * std::max(1.0, std::fabs(best.cost));
    Bounds fixed = root;
    std::unique_ptr<DualSimplex> base = bb.cold(fixed);
    auto check = [&](Bounds trial) -> bool {
      auto lp = std::make_unique<DualSimplex>(*base);
      for (std::size_t j = 0; j < trial.lo.size(); ++j) {
        if (trial.lo[j] != fixed.lo[j] || trial.hi[j] != fixed.hi[j]) {
          if (!lp->set_bounds(static_cast<int>(j), trial.lo[j], trial.hi[j])) {
            lp.reset();
            break;
          }
        }
      }
      auto res = bb.run(trial, accept, std::move(lp));
      if (res.timed_out) throw Error("time limit reached while ordering optimal solutions");
      if (res.found) x = res.x;
      return res.found;
    };
    auto commit = [&](int col, double lo, double hi) {
      const auto j = static_cast<std::size_t>(col);
      fixed.lo[j] = lo;
      fixed.hi[j] = hi;
      if (!base->set_bounds(col, lo, hi)) base = bb.cold(fixed);
    };
    for (std::size_t c = 0; c < r.classes.size(); ++c) {
      const TaskClass& tc = r.classes[c];
      const double unit = tc.omega * Relaxation::kScale;
      double remaining = static_cast<double>(tc.members.size());
      for (std::size_t k = 0; k < r.slots; ++k) {
        const int col = r.x(c, k);
        const auto j = static_cast<std::size_t>(col);
        if (fixed.hi[j] <= 0.0) continue;
        if (tc.counted()) {
          const double top = std::min(remaining, std::round(fixed.hi[j] / unit));
          double chosen = 0.0;
          for (double t = top; t >= 1.0; t -= 1.0) {
            if (std::round(x[j] / unit) >= t) {
              chosen = t;
              break;
            }
            Bounds trial = fixed;
            trial.lo[j] = std::min(t * unit, fixed.hi[j]);
            if (check(std::move(trial))) {
              chosen = t;
              break;
            }
          }
          const double amount = std::min(chosen * unit, fixed.hi[j]);
          commit(col, amount, amount);
          remaining -= chosen;
        } else {
          bool on = x[j] > 0.0;
          if (!on) {
            Bounds trial = fixed;
            trial.lo[j] = r.epsilon;
            on = check(std::move(trial));
          }
          if (on) {
            commit(col, std::max(fixed.lo[j], r.epsilon), fixed.hi[j]);
          } else {
            commit(col, 0.0, 0.0);
          }
        }
      }
    }
    // Re-solve the amounts on the chosen pattern from a fresh factorization.
    for (const auto& g : r.groups) {
      if (g.column < 0) continue;
      bool used = false;
      for (int col : g.columns) used |= fixed.hi[static_cast<std::size_t>(col)] > 0.0 &&
                                        x[static_cast<std::size_t>(col)] > 0.0;
      const auto j = static_cast<std::size_t>(g.column);
      if (g.count > 1.0) {
        fixed.lo[j] = fixed.hi[j] = std::round(x[j]);
      } else {
        fixed.lo[j] = fixed.hi[j] = used ? 1.0 : 0.0;
      }
    }
    for (std::size_t j = 0; j < r.x_columns(); ++j) {
      if (x[j] == 0.0) fixed.lo[j] = fixed.hi[j] = 0.0;
    }
    auto polish = bb.cold(fixed);
    if (polish->solve() == LpStatus::Optimal) {
      std::vector<double> px = polish->primal();
      for (std::size_t j = 0; j < r.x_columns(); ++j) {
        if (px[j] <= kZeroTol) px[j] = 0.0;
      }
      if (bb.true_cost(px) <= bb.true_cost(x) + 1e-9 * std::max(1.0, bb.true_cost(x))) x = px;
    }
  }

  auto alloc = disaggregate(m, r, x);
  if (!alloc) {
    SolveOptions single = opt;
    single.pool_identical_tasks = false;
    return solve_impl(m, single, start);
  }
  Solution s = make_solution(m, std::move(*alloc), status);
  s.bound = std::min(bound, s.objective);
  s.gap = s.objective > 0.0 ? (s.objective - s.bound) / s.objective : 0.0;
  if (status == SolveStatus::Optimal) s.gap = 0.0;
  s.nodes = bb.nodes;
  s.lp_iterations = bb.iterations;
  return s;
}

}  // namespace

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::GapLimit:
      return "gap-limit";
  }
  return "unknown";
}

double Solution::pn_load(std::size_t k) const {
  double total = 0.0;
  for (const auto& row : allocation) total += row.at(k);
  return total;
}

Solution make_solution(const MilpModel& m, std::vector<std::vector<double>> allocation,
                       SolveStatus status) {
  const std::size_t S = m.tasks.size();
  const std::size_t P = m.pns.size();
  if (allocation.empty() && S > 0) throw InconsistentAssignment("allocation has no rows");
  if (S == 0) allocation.clear();

  Solution s;
  s.status = status;
  s.values.assign(m.variables.size(), 0.0);
  for (std::size_t t = 0; t < S; ++t) {
    for (std::size_t k = 0; k < P; ++k) {
      const double v = allocation.at(t).at(k);
      s.values[static_cast<std::size_t>(m.x(t, k))] = v;
      if (v > 0.0) {
        s.values[static_cast<std::size_t>(m.split(t, k))] = 1.0;
        s.values[static_cast<std::size_t>(m.node(k))] = 1.0;
      }
    }
  }
  LoadAssignment loads = assignment_from_allocation(*m.topology, m.tasks, m.pns, allocation);
  for (std::size_t j = 0; j < m.traffic_devices.size(); ++j) {
    if (loads.load[m.traffic_devices[j].index()] > 0.0) {
      s.values[static_cast<std::size_t>(m.traffic(j))] = 1.0;
    }
  }
  s.objective = m.objective(s.values);
  s.bound = s.objective;
  try {
    s.breakdown = total_power(*m.topology, loads);
  } catch (const CapacityExceeded&) {
    // Leave the verifier to report which rows the allocation breaks.
    s.breakdown.total = std::numeric_limits<double>::quiet_NaN();
  }
  s.per_vec_mips.assign(static_cast<std::size_t>(m.topology->cluster_count()), 0.0);
  for (std::size_t k = 0; k < P; ++k) {
    const Device& d = m.topology->device(m.pns[k]);
    if (d.kind != DeviceKind::VnProcessor) continue;
    for (std::size_t t = 0; t < S; ++t) {
      s.per_vec_mips[static_cast<std::size_t>(d.cluster - 1)] += allocation[t][k];
    }
  }
  s.allocation = std::move(allocation);
  return s;
}

Solution solve(const MilpModel& model, const SolveOptions& options) {
  const auto start = Clock::now();
  Solution s = solve_impl(model, options, start);
  s.solve_time = std::chrono::duration<double>(Clock::now() - start).count();
  return s;
}

}  // namespace vecfog
