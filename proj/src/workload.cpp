#include "vecfog/workload.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "vecfog/errors.hpp"

namespace vecfog {
namespace {

constexpr std::array<std::string_view, 4> kPatterns = {
    "one-task-one-cluster", "one-task-each-cluster", "five-tasks-one-cluster",
    "five-tasks-each-cluster"};
constexpr std::array<std::string_view, 4> kCases = {"CCA", "CFA", "CFVA-L", "CFVA-H"};
constexpr std::array<std::string_view, 2> kStrategies = {"SA", "DA"};

bool iequal(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

template <typename E, std::size_t N>
E parse_named(std::string_view text, const std::array<std::string_view, N>& names,
              const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (iequal(text, names[i])) return static_cast<E>(i);
  }
  throw ConfigError(std::string("unknown ") + what + " '" + std::string(text) + "'");
}

}  // namespace

std::string_view pattern_name(Pattern p) { return kPatterns[static_cast<std::size_t>(p)]; }
std::string_view case_name(Case c) { return kCases[static_cast<std::size_t>(c)]; }
std::string_view strategy_name(Strategy s) { return kStrategies[static_cast<std::size_t>(s)]; }

Pattern parse_pattern(std::string_view text) {
  // Zones and clusters coincide in the multi-zone layout, so accept both words.
  std::string t(text);
  if (auto pos = t.find("zone"); pos != std::string::npos) t.replace(pos, 4, "cluster");
  return parse_named<Pattern>(t, kPatterns, "pattern");
}
Case parse_case(std::string_view text) { return parse_named<Case>(text, kCases, "case"); }
Strategy parse_strategy(std::string_view text) {
  return parse_named<Strategy>(text, kStrategies, "strategy");
}

Architecture parse_architecture(std::string_view text) {
  if (iequal(text, "one-zone")) return Architecture::OneZone;
  if (iequal(text, "multi-zone")) return Architecture::MultiZone;
  throw ConfigError("unknown architecture '" + std::string(text) + "'");
}

std::vector<DeviceId> AvailabilityMask::nodes() const {
  std::vector<DeviceId> out;
  for (std::size_t i = 0; i < enabled.size(); ++i) {
    if (enabled[i]) out.emplace_back(static_cast<std::int32_t>(i));
  }
  return out;
}

double mips_capacity(int cores, double clock_ghz, double ipc) {
  return cores * clock_ghz * 1000.0 * ipc;
}

double traffic_for(double omega, double drr) { return drr * omega; }

int vns_for_case(Case c) {
  switch (c) {
    case Case::CFVA_L:
      return 2;
    case Case::CFVA_H:
      return 15;
    default:
      return 0;
  }
}

TopologyParams scenario_topology(Architecture architecture, Case c, int cc_servers, int rr_hops) {
  TopologyParams p;
  p.architecture = architecture;
  p.zones = architecture == Architecture::OneZone ? 1 : 4;
  p.clusters_per_zone = architecture == Architecture::OneZone ? 4 : 1;
  p.vns_per_cluster = vns_for_case(c);
  p.cc_servers = cc_servers;
  p.rr_hops = rr_hops;
  return p;
}

AvailabilityMask availability_for(const Topology& topology, Case c) {
  AvailabilityMask mask;
  mask.enabled.assign(topology.devices().size(), 0);
  for (const Device& d : topology.devices()) {
    bool on = false;
    switch (d.kind) {
      case DeviceKind::CloudServer:
        on = true;
        break;
      case DeviceKind::MetroFogServer:
      case DeviceKind::OltFogServer:
      case DeviceKind::OnuFogProcessor:
        on = c != Case::CCA;
        break;
      case DeviceKind::VnProcessor:
        on = c == Case::CFVA_L || c == Case::CFVA_H;
        break;
      default:
        break;
    }
    mask.enabled[d.id.index()] = on ? 1 : 0;
  }
  return mask;
}

std::vector<Task> make_tasks(const Topology& topology, Pattern pattern, Strategy strategy,
                             double omega, double drr) {
  if (!(omega > 0.0)) throw ConfigError("task demand must be positive");
  if (!(drr > 0.0)) throw ConfigError("data rate ratio must be positive");
  const bool every_cluster =
      pattern == Pattern::OneTaskEachCluster || pattern == Pattern::FiveTasksEachCluster;
  const int per_cluster =
      pattern == Pattern::FiveTasksOneCluster || pattern == Pattern::FiveTasksEachCluster ? 5 : 1;
  const int clusters = every_cluster ? topology.cluster_count() : 1;

  std::vector<Task> tasks;
  for (int c = 1; c <= clusters; ++c) {
    for (int k = 0; k < per_cluster; ++k) {
      Task t;
      t.id = static_cast<int>(tasks.size()) + 1;
      t.source_cluster = c;
      t.source_zone = topology.zone_of_cluster(c);
      t.omega = omega;
      t.drr = drr;
      t.flow = traffic_for(omega, drr);
      t.split_limit = strategy == Strategy::SA ? 1 : kUnboundedSplit;
      tasks.push_back(t);
    }
  }
  return tasks;
}

Instance make_scenario(const Scenario& scenario, double omega, const TopologyParams& params,
                       const ProfileTable& profiles) {
  Topology topology = Topology::build(params, profiles);
  AvailabilityMask mask = availability_for(topology, scenario.availability);
  std::vector<Task> tasks =
      make_tasks(topology, scenario.pattern, scenario.strategy, omega, scenario.drr);
  return Instance{std::move(topology), std::move(mask), std::move(tasks)};
}

std::vector<double> high_demand_sweep() {
  std::vector<double> out;
  for (int w = 1000; w <= 10000; w += 1000) out.push_back(w);
  return out;
}

std::vector<double> low_demand_sweep() {
  std::vector<double> out;
  for (int w = 100; w <= 1000; w += 100) out.push_back(w);
  return out;
}

std::vector<double> drr_set() { return {0.001, 0.02, 0.04, 0.08, 0.1, 0.2, 0.4, 0.8}; }

}  // namespace vecfog
