#pragma once

#include <optional>
#include <string>

#include "vecfog/device.hpp"
#include "vecfog/topology.hpp"
#include "vecfog/workload.hpp"

namespace vecfog {

// Everything a run needs: the scenario, topology sizing and power profiles.
// Zone, cluster and VN counts follow the architecture and case unless set.
struct RunConfig {
  Scenario scenario;
  std::optional<int> zones;
  std::optional<int> clusters_per_zone;
  std::optional<int> vns_per_cluster;
  int cc_servers = 5;
  int rr_hops = 1;
  ProfileTable profiles = default_profiles();

  TopologyParams topology_for(Case c) const;
};

// JSON document, e.g.
//   {"architecture": "one-zone", "cc_servers": 5, "rr_hops": 1,
//    "profiles": {"NF": {"p_max": 15, "p_idle": 9, "capacity": 6000}},
//    "scenario": {"pattern": "one-task-one-cluster", "case": "CFA",
//                 "strategy": "SA", "demands": [1000, 2000], "drr": 0.001}}
// Unknown keys are rejected. Throws ConfigError / IoError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace vecfog
