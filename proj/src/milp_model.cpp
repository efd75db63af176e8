#include "vecfog/milp_model.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "vecfog/errors.hpp"
#include "vecfog/power_model.hpp"

namespace vecfog {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string sd_suffix(const Task& t, DeviceId d) {
  return "s" + std::to_string(t.id) + "_d" + std::to_string(d.value);
}

}  // namespace

double MilpModel::objective(const std::vector<double>& values) const {
  double total = objective_constant;
  for (std::size_t j = 0; j < variables.size(); ++j) total += variables[j].cost * values[j];
  return total;
}

std::size_t MilpModel::constraint_count(const std::string& label) const {
  return static_cast<std::size_t>(std::count_if(constraints.begin(), constraints.end(),
                                                [&](const Constraint& c) { return c.label == label; }));
}

MilpModel build_model(const Topology& topology, const std::vector<Task>& tasks,
                      const AvailabilityMask& mask) {
  MilpModel m;
  m.topology = std::make_shared<const Topology>(topology);
  m.tasks = tasks;
  for (const Task& t : tasks) topology.zone_of_cluster(t.source_cluster);
  for (DeviceId d : mask.nodes()) {
    if (!is_processing(topology.device(d).kind)) {
      throw ConfigError("availability mask enables a non-processing device");
    }
    m.pns.push_back(d);
  }
  if (m.pns.empty()) throw ConfigError("availability mask enables no processing node");

  const std::size_t S = tasks.size();
  const std::size_t P = m.pns.size();

  // Which network devices and directed links each (task, node) pair loads.
  std::map<DeviceId, std::vector<std::pair<std::size_t, std::size_t>>> through;
  std::map<std::pair<DeviceId, DeviceId>, std::vector<std::pair<std::size_t, std::size_t>>> on_link;
  std::map<DeviceId, std::vector<std::pair<std::size_t, std::size_t>>> wireless;  // by AP
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < P; ++k) {
      const auto& path = topology.path(tasks[s].source_cluster, m.pns[k]);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        through[path[i]].emplace_back(s, k);
        on_link[{path[i], path[i + 1]}].emplace_back(s, k);
        if (topology.device(path[i]).kind == DeviceKind::AccessPoint &&
            topology.device(path[i + 1]).kind == DeviceKind::VnWirelessAdapter) {
          wireless[path[i]].emplace_back(s, k);
        }
      }
    }
  }
  for (const auto& [id, pairs] : through) m.traffic_devices.push_back(id);
  const std::size_t N = m.traffic_devices.size();

  double total_flow = 0.0;
  double min_drr = kInf;
  for (const Task& t : tasks) {
    total_flow += t.flow;
    min_drr = std::min(min_drr, t.drr);
  }
  m.epsilon_traffic = S == 0 ? 0.0 : min_drr * m.epsilon_mips;

  // Variables: X, delta_sd, delta_d, Psi in that order.
  m.variables.reserve(2 * S * P + P + N);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < P; ++k) {
      const DeviceId d = m.pns[k];
      const auto& path = topology.path(tasks[s].source_cluster, d);
      double cost = load_cost(topology.profile(d));
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        cost += tasks[s].drr * load_cost(topology.profile(path[i]));
      }
      m.variables.push_back({"X_" + sd_suffix(tasks[s], d), VarType::Continuous,
                             VarRole::Allocation, 0.0, kInf, cost, static_cast<int>(s), d});
    }
  }
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < P; ++k) {
      m.variables.push_back({"D_" + sd_suffix(tasks[s], m.pns[k]), VarType::Binary,
                             VarRole::SplitOn, 0.0, 1.0, 0.0, static_cast<int>(s), m.pns[k]});
    }
  }
  for (std::size_t k = 0; k < P; ++k) {
    m.variables.push_back({"D_d" + std::to_string(m.pns[k].value), VarType::Binary,
                           VarRole::NodeOn, 0.0, 1.0, activation_cost(topology.profile(m.pns[k])),
                           -1, m.pns[k]});
  }
  for (std::size_t j = 0; j < N; ++j) {
    const DeviceId i = m.traffic_devices[j];
    m.variables.push_back({"P_i" + std::to_string(i.value), VarType::Binary, VarRole::TrafficOn,
                           0.0, 1.0, activation_cost(topology.profile(i)), -1, i});
  }

  auto add = [&](std::string label, std::string name, Sense sense, std::vector<Term> terms,
                 double rhs) {
    m.constraints.push_back({std::move(label), std::move(name), sense, std::move(terms), rhs});
  };
  auto traffic_terms = [&](const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<Term> terms;
    terms.reserve(pairs.size());
    for (auto [s, k] : pairs) terms.push_back({m.x(s, k), tasks[s].drr});
    return terms;
  };

  // Flow entering each pair's path equals the flow delivered at its end.
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < P; ++k) {
      add("C23", "C23_" + sd_suffix(tasks[s], m.pns[k]), Sense::Identity,
          {{m.x(s, k), tasks[s].drr}}, 0.0);
    }
  }
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < P; ++k) terms.push_back({m.x(s, k), 1.0});
    add("C24", "C24_s" + std::to_string(tasks[s].id), Sense::Equal, std::move(terms),
        tasks[s].omega);
  }
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < P; ++k) {
      const std::string sfx = sd_suffix(tasks[s], m.pns[k]);
      add("C25", "C25_" + sfx, Sense::GreaterEqual,
          {{m.x(s, k), 1.0}, {m.split(s, k), -m.epsilon_mips}}, 0.0);
      add("C26", "C26_" + sfx, Sense::LessEqual,
          {{m.x(s, k), 1.0}, {m.split(s, k), -tasks[s].omega}}, 0.0);
    }
  }
  for (std::size_t k = 0; k < P; ++k) {
    const std::string sfx = "d" + std::to_string(m.pns[k].value);
    std::vector<Term> lo, hi;
    for (std::size_t s = 0; s < S; ++s) {
      lo.push_back({m.split(s, k), 1.0});
      hi.push_back({m.split(s, k), 1.0});
    }
    lo.push_back({m.node(k), -1.0});
    hi.push_back({m.node(k), -static_cast<double>(S)});
    add("C27", "C27_" + sfx, Sense::GreaterEqual, std::move(lo), 0.0);
    add("C28", "C28_" + sfx, Sense::LessEqual, std::move(hi), 0.0);
  }
  for (std::size_t j = 0; j < N; ++j) {
    const DeviceId i = m.traffic_devices[j];
    const std::string sfx = "i" + std::to_string(i.value);
    const auto& pairs = through.at(i);
    add("C29", "C29_" + sfx, Sense::Identity, traffic_terms(pairs), 0.0);
    auto lo = traffic_terms(pairs);
    lo.push_back({m.traffic(j), -m.epsilon_traffic});
    add("C30", "C30_" + sfx, Sense::GreaterEqual, std::move(lo), 0.0);
    auto hi = traffic_terms(pairs);
    hi.push_back({m.traffic(j), -total_flow});
    add("C31", "C31_" + sfx, Sense::LessEqual, std::move(hi), 0.0);
  }
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < P; ++k) {
      add("C32", "C32_" + sd_suffix(tasks[s], m.pns[k]), Sense::Identity,
          {{m.x(s, k), tasks[s].drr}}, 0.0);
    }
  }
  for (std::size_t k = 0; k < P; ++k) {
    std::vector<Term> terms;
    for (std::size_t s = 0; s < S; ++s) terms.push_back({m.x(s, k), 1.0});
    add("C33", "C33_d" + std::to_string(m.pns[k].value), Sense::LessEqual, std::move(terms),
        topology.profile(m.pns[k]).capacity);
  }
  for (const auto& [link, pairs] : on_link) {
    add("C34", "C34_l" + std::to_string(link.first.value) + "_" + std::to_string(link.second.value),
        Sense::LessEqual, traffic_terms(pairs), topology.link_capacity(link.first, link.second));
  }
  // Node throughput; the AP's own limit is the wireless row below.
  for (const auto& [id, pairs] : through) {
    if (topology.device(id).kind == DeviceKind::AccessPoint) continue;
    add("C34", "C34_n" + std::to_string(id.value), Sense::LessEqual, traffic_terms(pairs),
        topology.profile(id).capacity);
  }
  for (const auto& [ap, pairs] : wireless) {
    add("C35", "C35_a" + std::to_string(ap.value), Sense::LessEqual, traffic_terms(pairs),
        topology.profile(ap).capacity);
  }
  for (std::size_t s = 0; s < S; ++s) {
    if (tasks[s].split_limit == kUnboundedSplit) continue;
    if (tasks[s].split_limit < 1) throw ConfigError("split limit must be at least 1");
    std::vector<Term> terms;
    for (std::size_t k = 0; k < P; ++k) terms.push_back({m.split(s, k), 1.0});
    add("C36", "C36_s" + std::to_string(tasks[s].id), Sense::LessEqual, std::move(terms),
        tasks[s].split_limit);
  }
  return m;
}

}  // namespace vecfog
