#include "relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

namespace vecfog::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Terms = std::vector<std::pair<int, double>>;
using RowKey = std::pair<Terms, double>;

// Adds a normalized row (largest |coef| = 1) unless an identical one exists.
class RowSink {
 public:
  explicit RowSink(LpProblem& lp) : lp_(lp) {}

  void add(Terms terms, Sense sense, double rhs) {
    std::sort(terms.begin(), terms.end());
    double scale = 0.0;
    for (const auto& t : terms) scale = std::max(scale, std::fabs(t.second));
    if (scale == 0.0) return;
    for (auto& t : terms) t.second /= scale;
    rhs /= scale;
    RowKey key{terms, sense == Sense::GreaterEqual ? -rhs : rhs};
    if (sense == Sense::GreaterEqual) {
      for (auto& t : key.first) t.second = -t.second;
    }
    if (sense != Sense::Equal && !seen_.insert(key).second) return;
    lp_.rows.push_back({std::move(terms), sense, rhs});
  }

 private:
  LpProblem& lp_;
  std::set<RowKey> seen_;
};

bool subset(const std::vector<int>& small, const std::vector<int>& big) {
  return small.size() <= big.size() &&
         std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)); }

// One X-only row seen per processing node: (class, coefficient) pairs.
struct RowView {
  std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> by_pn;
  double rhs = 0.0;
};

}  // namespace

Relaxation build_relaxation(const MilpModel& m, bool aggregate) {
  Relaxation r;
  const Topology& topo = *m.topology;
  const std::size_t S = m.tasks.size();
  const std::size_t P = m.pns.size();
  r.epsilon = m.epsilon_mips * Relaxation::kScale;

  std::vector<std::size_t> class_of(S);
  std::vector<char> representative(S, 0);
  for (std::size_t s = 0; s < S; ++s) {
    const Task& t = m.tasks[s];
    const bool poolable = aggregate && (t.split_limit == 1 || t.split_limit == kUnboundedSplit);
    std::size_t c = r.classes.size();
    if (poolable) {
      for (std::size_t q = 0; q < r.classes.size(); ++q) {
        const TaskClass& tc = r.classes[q];
        if (tc.cluster == t.source_cluster && tc.omega == t.omega && tc.drr == t.drr &&
            tc.split_limit == t.split_limit &&
            (tc.split_limit == 1 || tc.split_limit == kUnboundedSplit)) {
          c = q;
          break;
        }
      }
    }
    if (c == r.classes.size()) {
      r.classes.push_back({{}, t.source_cluster, t.omega, t.drr, t.split_limit});
      representative[s] = 1;
    }
    r.classes[c].members.push_back(s);
    class_of[s] = c;
  }
  const std::size_t C = r.classes.size();
  auto rep = [&](std::size_t c) { return r.classes[c].members.front(); };

  // Rows over allocations only, seen per node, and the per-(task, node) upper
  // bounds each of them implies on its own.
  auto x_only = [&](const Constraint& con) {
    return std::all_of(con.terms.begin(), con.terms.end(), [&](const Term& t) {
      return static_cast<std::size_t>(t.var) < S * P;
    });
  };
  std::vector<RowView> views;
  std::vector<double> row_bound(S * P, kInf);
  for (const Constraint& con : m.constraints) {
    if (con.sense != Sense::LessEqual || con.label == "C24" || !x_only(con)) continue;
    RowView v;
    v.rhs = con.rhs;
    for (const Term& t : con.terms) {
      const auto s = static_cast<std::size_t>(t.var) / P;
      const auto k = static_cast<std::size_t>(t.var) % P;
      if (t.coef > 0.0) {
        auto& b = row_bound[static_cast<std::size_t>(t.var)];
        b = std::min(b, std::max(con.rhs, 0.0) / t.coef);
      }
      if (representative[s]) v.by_pn[k].emplace_back(class_of[s], t.coef);
    }
    for (auto& [k, list] : v.by_pn) std::sort(list.begin(), list.end());
    views.push_back(std::move(v));
  }

  // What one node alone can take from each class (MIPS).
  std::vector<double> member_upper(C * P, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    const TaskClass& tc = r.classes[c];
    for (std::size_t k = 0; k < P; ++k) {
      const double b = row_bound[static_cast<std::size_t>(m.x(rep(c), k))];
      if (tc.counted()) {
        const double fits = std::floor(b / tc.omega + 1e-9);
        member_upper[c * P + k] = tc.omega * std::min(static_cast<double>(tc.members.size()), fits);
      } else {
        member_upper[c * P + k] = std::min(tc.demand(), b);
      }
    }
  }

  std::map<DeviceId, double> entity_cost;
  for (std::size_t k = 0; k < P; ++k) entity_cost[m.pns[k]] += m.variables[m.node(k)].cost;
  for (std::size_t j = 0; j < m.traffic_devices.size(); ++j) {
    entity_cost[m.traffic_devices[j]] += m.variables[m.traffic(j)].cost;
  }

  // Interchangeable nodes: same profile, same costs, same bounds, paths that
  // differ only in devices private to each member, and rows that either touch
  // every member alike or a single member.
  struct Pool {
    std::vector<std::size_t> members;
    std::vector<std::set<DeviceId>> private_devices;
    double private_cost = 0.0;
    std::vector<const RowView*> private_rows;  // those of the first member
  };
  auto check_pool = [&](const std::vector<std::size_t>& members) -> std::optional<Pool> {
    const std::size_t k0 = members.front();
    const double cap0 = topo.profile(m.pns[k0]).capacity;
    std::vector<std::size_t> reaching;
    for (std::size_t c = 0; c < C; ++c) {
      if (member_upper[c * P + k0] > 0.0) reaching.push_back(c);
    }
    if (reaching.empty()) return std::nullopt;
    const TaskClass& first = r.classes[reaching.front()];
    for (std::size_t c : reaching) {
      const TaskClass& tc = r.classes[c];
      if (tc.split_limit != first.split_limit) return std::nullopt;
      if (tc.counted() && (tc.omega != first.omega || tc.drr != first.drr)) return std::nullopt;
    }
    for (std::size_t k : members) {
      if (topo.profile(m.pns[k]).capacity != cap0) return std::nullopt;
      if (!close(m.variables[m.node(k)].cost, m.variables[m.node(k0)].cost)) return std::nullopt;
      for (std::size_t c = 0; c < C; ++c) {
        if (!close(m.variables[m.x(rep(c), k)].cost, m.variables[m.x(rep(c), k0)].cost) ||
            !close(member_upper[c * P + k], member_upper[c * P + k0])) {
          return std::nullopt;
        }
      }
    }

    Pool pool;
    pool.members = members;
    const std::size_t n = members.size();
    const int cluster0 = first.cluster;
    std::vector<std::set<DeviceId>> on_path(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& path = topo.path(cluster0, m.pns[members[i]]);
      on_path[i] = {path.begin(), path.end()};
    }
    pool.private_devices.resize(n);
    std::vector<double> cost(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (DeviceId d : on_path[i]) {
        bool shared = false;
        for (std::size_t j = 0; j < n && !shared; ++j) shared = j != i && on_path[j].count(d);
        if (!shared) {
          pool.private_devices[i].insert(d);
          cost[i] += entity_cost.count(d) ? entity_cost.at(d) : 0.0;
        }
      }
      if (pool.private_devices[i].size() != pool.private_devices[0].size() ||
          !close(cost[i], cost[0])) {
        return std::nullopt;
      }
    }
    pool.private_cost = cost[0];
    for (std::size_t c : reaching) {
      std::set<DeviceId> shared0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& path = topo.path(r.classes[c].cluster, m.pns[members[i]]);
        std::set<DeviceId> rest;
        std::size_t seen_private = 0;
        for (DeviceId d : path) {
          if (pool.private_devices[i].count(d)) {
            ++seen_private;
          } else {
            rest.insert(d);
          }
        }
        if (seen_private != pool.private_devices[i].size()) return std::nullopt;
        if (i == 0) {
          shared0 = std::move(rest);
        } else if (rest != shared0) {
          return std::nullopt;
        }
      }
    }

    using Signature = std::pair<std::vector<std::pair<std::size_t, double>>, double>;
    std::vector<std::vector<Signature>> private_sigs(n);
    for (const RowView& v : views) {
      std::vector<std::size_t> touched;
      for (std::size_t i = 0; i < n; ++i) {
        if (v.by_pn.count(members[i])) touched.push_back(i);
      }
      if (touched.empty()) continue;
      if (touched.size() == n) {
        const auto& ref = v.by_pn.at(members.front());
        for (std::size_t i = 1; i < n; ++i) {
          if (v.by_pn.at(members[i]) != ref) return std::nullopt;
        }
      } else if (touched.size() == 1 && v.by_pn.size() == 1) {
        private_sigs[touched.front()].emplace_back(v.by_pn.begin()->second, v.rhs);
        if (touched.front() == 0) pool.private_rows.push_back(&v);
      } else {
        return std::nullopt;
      }
    }
    for (auto& sigs : private_sigs) std::sort(sigs.begin(), sigs.end());
    for (std::size_t i = 1; i < n; ++i) {
      if (private_sigs[i] != private_sigs[0]) return std::nullopt;
    }
    return pool;
  };

  std::vector<Pool> pools;
  if (aggregate) {
    std::map<int, std::vector<std::size_t>> vns_by_cluster;
    std::vector<std::size_t> cloud;
    for (std::size_t k = 0; k < P; ++k) {
      const Device& dev = topo.device(m.pns[k]);
      if (dev.kind == DeviceKind::VnProcessor) vns_by_cluster[dev.cluster].push_back(k);
      if (dev.kind == DeviceKind::CloudServer) cloud.push_back(k);
    }
    std::vector<std::vector<std::size_t>> candidates;
    for (auto& [cluster, list] : vns_by_cluster) candidates.push_back(list);
    candidates.push_back(cloud);
    for (const auto& cand : candidates) {
      if (cand.size() < 2) continue;
      if (auto pool = check_pool(cand)) pools.push_back(std::move(*pool));
    }
  }

  // Slots in node order; a pool sits where its first member would.
  std::vector<int> pool_at(P, -1);
  std::vector<char> in_pool(P, 0);
  for (std::size_t i = 0; i < pools.size(); ++i) {
    pool_at[pools[i].members.front()] = static_cast<int>(i);
    for (std::size_t k : pools[i].members) in_pool[k] = 1;
  }
  std::vector<int> slot_of(P, -1);
  std::vector<int> slot_pool;
  for (std::size_t k = 0; k < P; ++k) {
    if (pool_at[k] >= 0) {
      const Pool& pool = pools[static_cast<std::size_t>(pool_at[k])];
      for (std::size_t member : pool.members) slot_of[member] = static_cast<int>(r.slot.size());
      r.slot.push_back({pool.members, -1, 0});
      slot_pool.push_back(pool_at[k]);
    } else if (!in_pool[k]) {
      slot_of[k] = static_cast<int>(r.slot.size());
      r.slot.push_back({{k}, -1, 0});
      slot_pool.push_back(-1);
    }
  }
  const std::size_t Q = r.slot.size();
  r.slots = Q;

  // Whole tasks one member of a counted pool can hold.
  for (std::size_t q = 0; q < Q; ++q) {
    if (slot_pool[q] < 0) continue;
    const Pool& pool = pools[static_cast<std::size_t>(slot_pool[q])];
    const std::size_t k0 = pool.members.front();
    double limit = topo.profile(m.pns[k0]).capacity;
    double omega = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      if (member_upper[c * P + k0] > 0.0 && r.classes[c].counted()) omega = r.classes[c].omega;
    }
    if (omega <= 0.0) continue;
    for (const RowView* v : pool.private_rows) {
      double coef = 0.0;
      for (const auto& [c, a] : v->by_pn.begin()->second) coef = std::max(coef, a);
      if (coef > 0.0) limit = std::min(limit, std::max(v->rhs, 0.0) / coef);
    }
    r.slot[q].per_member = static_cast<int>(std::floor(limit / omega + 1e-9));
  }

  // Allocation columns (LP units): `upper` for the slot, `unit` for one member.
  std::vector<double> upper(C * Q, 0.0), unit(C * Q, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    const TaskClass& tc = r.classes[c];
    for (std::size_t q = 0; q < Q; ++q) {
      const Slot& sl = r.slot[q];
      const std::size_t k0 = sl.members.front();
      const double one = member_upper[c * P + k0];
      double u = one;
      if (sl.pooled()) {
        const auto n = static_cast<double>(sl.members.size());
        if (tc.counted()) {
          const double per = std::min(static_cast<double>(sl.per_member), std::round(one / tc.omega));
          u = tc.omega * std::min(static_cast<double>(tc.members.size()), per * n);
        } else {
          u = std::min(tc.demand(), one * n);
        }
      }
      upper[c * Q + q] = u * Relaxation::kScale;
      unit[c * Q + q] = one * Relaxation::kScale;
      r.lp.add_column(m.variables[m.x(rep(c), k0)].cost / Relaxation::kScale, 0.0, upper[c * Q + q]);
    }
  }

  RowSink rows(r.lp);
  for (std::size_t c = 0; c < C; ++c) {
    Terms terms;
    for (std::size_t q = 0; q < Q; ++q) terms.emplace_back(r.x(c, q), 1.0);
    rows.add(std::move(terms), Sense::Equal, r.classes[c].demand() * Relaxation::kScale);
  }
  struct MemberRow {
    std::size_t slot;
    Terms terms;
    double rhs;
  };
  std::vector<MemberRow> member_rows;
  for (const RowView& v : views) {
    if (v.by_pn.size() == 1 && in_pool[v.by_pn.begin()->first]) {
      const std::size_t k = v.by_pn.begin()->first;
      const auto q = static_cast<std::size_t>(slot_of[k]);
      if (r.slot[q].members.front() != k) continue;  // every member has the same rows
      MemberRow row{q, {}, v.rhs};
      double reach = 0.0;
      for (const auto& [c, a] : v.by_pn.begin()->second) {
        row.terms.emplace_back(r.x(c, q), a / Relaxation::kScale);
        if (a > 0.0) reach += a / Relaxation::kScale * unit[c * Q + q];
      }
      if (reach > v.rhs * (1.0 + 1e-12)) member_rows.push_back(std::move(row));
      continue;
    }
    std::map<int, double> coef;
    for (const auto& [k, list] : v.by_pn) {
      const auto q = static_cast<std::size_t>(slot_of[k]);
      const bool pooled = r.slot[q].pooled();
      if (pooled && r.slot[q].members.front() != k) continue;  // members alike: count once
      for (const auto& [c, a] : list) coef[r.x(c, q)] += a / Relaxation::kScale;
    }
    double reach = 0.0;
    for (const auto& [col, a] : coef) {
      if (a > 0.0) reach += a * upper[static_cast<std::size_t>(col)];
    }
    if (reach <= v.rhs * (1.0 + 1e-12)) continue;  // can never bind
    rows.add({coef.begin(), coef.end()}, Sense::LessEqual, v.rhs);
  }

  // Fixed-charge groups: shared devices by usage signature, one counting
  // group per pool for the devices private to its members.
  std::map<DeviceId, std::vector<int>> usage;
  std::vector<std::vector<DeviceId>> shared_path(C * Q);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t q = 0; q < Q; ++q) {
      if (upper[c * Q + q] <= 0.0) continue;
      const std::set<DeviceId>* own =
          slot_pool[q] >= 0 ? &pools[static_cast<std::size_t>(slot_pool[q])].private_devices[0]
                            : nullptr;
      for (DeviceId d : topo.path(r.classes[c].cluster, m.pns[r.slot[q].members.front()])) {
        if (own && own->count(d)) continue;
        usage[d].push_back(r.x(c, q));
        shared_path[c * Q + q].push_back(d);
      }
    }
  }
  std::map<std::vector<int>, std::size_t> by_signature;
  std::map<DeviceId, int> group_of;
  for (const auto& [dev, cols] : usage) {
    auto [it, fresh] = by_signature.try_emplace(cols, r.groups.size());
    if (fresh) r.groups.push_back(Group{{}, 0.0, cols, -1, false, 0.0, 1.0});
    Group& g = r.groups[it->second];
    g.devices.push_back(dev);
    g.cost += entity_cost.count(dev) ? entity_cost[dev] : 0.0;
    if (is_processing(topo.device(dev).kind)) {
      g.has_pn = true;
      g.pn_capacity = topo.profile(dev).capacity;
    }
    group_of[dev] = static_cast<int>(it->second);
  }
  for (std::size_t q = 0; q < Q; ++q) {
    if (slot_pool[q] < 0) continue;
    const Pool& pool = pools[static_cast<std::size_t>(slot_pool[q])];
    Group g;
    for (const auto& devs : pool.private_devices) g.devices.insert(g.devices.end(), devs.begin(), devs.end());
    g.cost = pool.private_cost;
    for (std::size_t c = 0; c < C; ++c) {
      if (upper[c * Q + q] > 0.0) g.columns.push_back(r.x(c, q));
    }
    g.has_pn = true;
    g.pn_capacity = topo.profile(m.pns[pool.members.front()]).capacity;
    g.count = static_cast<double>(pool.members.size());
    r.slot[q].group = static_cast<int>(r.groups.size());
    r.groups.push_back(std::move(g));
  }
  for (Group& g : r.groups) {
    if ((g.cost > 0.0 || g.count > 1.0) && !g.columns.empty()) g.column = r.lp.add_column(g.cost, 0.0, g.count);
  }
  auto column_of = [&](int g) { return r.groups[static_cast<std::size_t>(g)].column; };
  auto count_of = [&](int g) { return r.groups[static_cast<std::size_t>(g)].count; };

  for (const MemberRow& row : member_rows) {
    const int g = r.slot[row.slot].group;
    if (column_of(g) < 0) continue;
    Terms terms = row.terms;
    terms.emplace_back(column_of(g), -row.rhs);
    rows.add(std::move(terms), Sense::LessEqual, 0.0);
  }

  // Each allocation column is bounded by its tightest groups (those no other
  // group on its path is contained in); the rest follow by chain rows.
  auto sig = [&](int g) -> const std::vector<int>& { return r.groups[static_cast<std::size_t>(g)].columns; };
  auto below = [&](int h, int g) {
    if (!subset(sig(h), sig(g))) return false;
    return sig(h).size() < sig(g).size() || (count_of(h) > 1.0 && count_of(g) <= 1.0);
  };
  std::set<std::pair<int, int>> chains;
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t q = 0; q < Q; ++q) {
      const int col = r.x(c, q);
      const double u = upper[static_cast<std::size_t>(col)];
      if (u <= 0.0) continue;
      std::vector<int> on_path;
      for (DeviceId d : shared_path[c * Q + q]) {
        const int g = group_of.at(d);
        if (column_of(g) >= 0 && std::find(on_path.begin(), on_path.end(), g) == on_path.end()) {
          on_path.push_back(g);
        }
      }
      if (r.slot[q].group >= 0 && column_of(r.slot[q].group) >= 0) on_path.push_back(r.slot[q].group);
      std::vector<int> minimal;
      for (int g : on_path) {
        const bool is_min = std::none_of(on_path.begin(), on_path.end(),
                                         [&](int h) { return h != g && below(h, g); });
        if (is_min) minimal.push_back(g);
      }
      for (int g : minimal) {
        const double coef = count_of(g) > 1.0 ? unit[static_cast<std::size_t>(col)] : u;
        rows.add({{col, 1.0}, {column_of(g), -coef}}, Sense::LessEqual, 0.0);
      }
      for (int g : on_path) {
        if (std::find(minimal.begin(), minimal.end(), g) != minimal.end()) continue;
        bool via_single = false;
        for (int h : minimal) {
          if (below(h, g)) {
            chains.emplace(h, g);
            via_single |= count_of(h) <= 1.0;
          }
        }
        // A pool's chain row only bounds z by count / size; bound it directly.
        if (!via_single) rows.add({{col, 1.0}, {column_of(g), -u}}, Sense::LessEqual, 0.0);
      }
    }
  }
  for (auto [h, g] : chains) {
    rows.add({{column_of(h), 1.0}, {column_of(g), -count_of(h)}}, Sense::LessEqual, 0.0);
  }

  // Aggregate forms: one class through one group, all work on one node, and
  // whole tasks per pool member.
  for (std::size_t gi = 0; gi < r.groups.size(); ++gi) {
    const Group& g = r.groups[gi];
    if (g.column < 0) continue;
    for (std::size_t c = 0; c < C; ++c) {
      Terms terms;
      double reach = 0.0;
      for (int col : g.columns) {
        if (static_cast<std::size_t>(col) / Q != c) continue;
        terms.emplace_back(col, 1.0);
        reach += upper[static_cast<std::size_t>(col)];
      }
      if (terms.size() < 2) continue;
      const double cap = std::min(reach, r.classes[c].demand() * Relaxation::kScale);
      terms.emplace_back(g.column, -cap);
      rows.add(std::move(terms), Sense::LessEqual, 0.0);
    }
    if (!g.has_pn) continue;
    Terms terms;
    double reach = 0.0;
    for (int col : g.columns) {
      terms.emplace_back(col, 1.0);
      reach += upper[static_cast<std::size_t>(col)];
    }
    const double cap = g.pn_capacity * Relaxation::kScale;
    if (g.count > 1.0) {
      terms.emplace_back(g.column, -cap);
      rows.add(std::move(terms), Sense::LessEqual, 0.0);
    } else if (g.columns.size() >= 2) {
      terms.emplace_back(g.column, -std::min(reach, cap));
      rows.add(std::move(terms), Sense::LessEqual, 0.0);
    }
  }
  for (std::size_t q = 0; q < Q; ++q) {
    const Slot& sl = r.slot[q];
    if (sl.group < 0 || sl.per_member <= 0 || column_of(sl.group) < 0) continue;
    Terms terms;
    double omega = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      if (upper[c * Q + q] <= 0.0) continue;
      terms.emplace_back(r.x(c, q), 1.0);
      omega = r.classes[c].omega;
    }
    terms.emplace_back(column_of(sl.group), -omega * sl.per_member * Relaxation::kScale);
    rows.add(std::move(terms), Sense::LessEqual, 0.0);
  }

  // Interchangeable nodes left unpooled are opened in index order.
  auto order_pool = [&](const std::vector<DeviceId>& pool) {
    for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
      if (!group_of.count(pool[i]) || !group_of.count(pool[i + 1])) continue;
      const Group& a = r.groups[static_cast<std::size_t>(group_of[pool[i]])];
      const Group& b = r.groups[static_cast<std::size_t>(group_of[pool[i + 1]])];
      if (a.column < 0 || b.column < 0 || &a == &b) continue;
      if (a.cost != b.cost || a.columns.size() != b.columns.size()) continue;
      rows.add({{b.column, 1.0}, {a.column, -1.0}}, Sense::LessEqual, 0.0);
    }
  };
  std::map<int, std::vector<DeviceId>> vns_by_cluster;
  std::vector<DeviceId> cloud;
  for (std::size_t k = 0; k < P; ++k) {
    if (in_pool[k]) continue;
    const Device& dev = topo.device(m.pns[k]);
    if (dev.kind == DeviceKind::VnProcessor) vns_by_cluster[dev.cluster].push_back(m.pns[k]);
    if (dev.kind == DeviceKind::CloudServer) cloud.push_back(m.pns[k]);
  }
  for (const auto& [cluster, pool] : vns_by_cluster) order_pool(pool);
  order_pool(cloud);

  std::vector<int> pn_groups, other_groups;
  for (std::size_t g = 0; g < r.groups.size(); ++g) {
    if (r.groups[g].column < 0) continue;
    (r.groups[g].has_pn ? pn_groups : other_groups).push_back(static_cast<int>(g));
  }
  std::stable_sort(pn_groups.begin(), pn_groups.end(), [&](int a, int b) {
    const Group& ga = r.groups[static_cast<std::size_t>(a)];
    const Group& gb = r.groups[static_cast<std::size_t>(b)];
    return ga.cost / ga.pn_capacity < gb.cost / gb.pn_capacity;
  });
  r.branch_order = pn_groups;
  r.branch_order.insert(r.branch_order.end(), other_groups.begin(), other_groups.end());
  return r;
}

}  // namespace vecfog::detail
