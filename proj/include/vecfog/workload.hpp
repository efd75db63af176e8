#pragma once

#include <limits>
#include <string_view>
#include <vector>

#include "vecfog/topology.hpp"

namespace vecfog {

// Split limit used for distributed allocation: a task may use any number of
// processing nodes.
inline constexpr int kUnboundedSplit = std::numeric_limits<int>::max();

struct Task {
  int id = 0;
  int source_zone = 1;
  int source_cluster = 1;
  double omega = 0.0;  // MIPS
  double drr = 0.0;    // (Mb/s) per MIPS
  double flow = 0.0;   // Mb/s, always drr * omega
  int split_limit = 1;
};

enum class Pattern { OneTaskOneCluster, OneTaskEachCluster, FiveTasksOneCluster, FiveTasksEachCluster };
enum class Case { CCA, CFA, CFVA_L, CFVA_H };
enum class Strategy { SA, DA };

std::string_view pattern_name(Pattern p);
std::string_view case_name(Case c);
std::string_view strategy_name(Strategy s);
// Accept the names above (case-insensitive); throw ConfigError otherwise.
Pattern parse_pattern(std::string_view text);
Case parse_case(std::string_view text);
Strategy parse_strategy(std::string_view text);
Architecture parse_architecture(std::string_view text);

struct Scenario {
  Architecture architecture = Architecture::OneZone;
  Pattern pattern = Pattern::OneTaskOneCluster;
  Case availability = Case::CFA;
  Strategy strategy = Strategy::SA;
  std::vector<double> demands;  // MIPS per task, one solve per entry
  double drr = 0.001;
};

// Processing nodes that may receive work, indexed by DeviceId.
struct AvailabilityMask {
  std::vector<char> enabled;

  bool allows(DeviceId id) const { return id.index() < enabled.size() && enabled[id.index()] != 0; }
  std::vector<DeviceId> nodes() const;
};

struct Instance {
  Topology topology;
  AvailabilityMask mask;
  std::vector<Task> tasks;
};

// cores x clock (GHz -> MHz) x instructions per cycle.
double mips_capacity(int cores, double clock_ghz, double ipc);
double traffic_for(double omega, double drr);

int vns_for_case(Case c);
// One zone of four clusters, or four zones of one cluster, sized for the case.
TopologyParams scenario_topology(Architecture architecture, Case c, int cc_servers = 5,
                                 int rr_hops = 1);
AvailabilityMask availability_for(const Topology& topology, Case c);
// Tasks in cluster-major order; "one cluster" patterns use cluster 1.
std::vector<Task> make_tasks(const Topology& topology, Pattern pattern, Strategy strategy,
                             double omega, double drr);
Instance make_scenario(const Scenario& scenario, double omega, const TopologyParams& params,
                       const ProfileTable& profiles = default_profiles());

std::vector<double> high_demand_sweep();  // 1000..10000 step 1000
std::vector<double> low_demand_sweep();   // 100..1000 step 100
std::vector<double> drr_set();

}  // namespace vecfog
