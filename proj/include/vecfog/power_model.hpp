#pragma once

#include <span>
#include <vector>

#include "vecfog/device.hpp"
#include "vecfog/topology.hpp"

namespace vecfog {

struct Task;

// Watts per component block. The six top-level terms add up to `total`; the
// infrastructure term is itself the sum of the six nested network terms.
struct PowerBreakdown {
  double tpc_cc = 0.0;
  double tpc_mf = 0.0;
  double tpc_lf = 0.0;
  double tpc_nf = 0.0;
  double tpc_vn = 0.0;
  double tpc_net = 0.0;

  double tpc_rr = 0.0;
  double tpc_mr = 0.0;
  double tpc_ms = 0.0;
  double tpc_o = 0.0;
  double tpc_u = 0.0;
  double tpc_a = 0.0;

  double total = 0.0;
};

// Per-device load (MIPS on processors, Mb/s on network devices) and the
// matching activation flags, indexed by DeviceId.
struct LoadAssignment {
  std::vector<double> load;
  std::vector<char> active;

  static LoadAssignment empty(const Topology& topology);
};

// Raw linear profile: p_idle + load * (p_max - p_idle) / capacity.
// Throws CapacityExceeded when load > capacity.
double linear_power(const DeviceProfile& profile, double load);

// Facility watts of one device: PUE x (charged idle + marginal load).
// VN processors never charge idle; VN adapters charge their full idle once
// activated. Access points may carry wired traffic beyond their radio rating,
// so their capacity is not enforced here.
double device_power(const DeviceProfile& profile, double carried, bool activated);

// Watts charged once a device is activated (PUE included).
double activation_cost(const DeviceProfile& profile);
// Watts per unit of carried load (PUE included).
double load_cost(const DeviceProfile& profile);

// Throws InconsistentAssignment when a flag disagrees with its load and
// CapacityExceeded when a load is above capacity.
PowerBreakdown total_power(const Topology& topology, const LoadAssignment& assignment);

// Builds the load assignment induced by an allocation matrix
// (allocation[s][k] = MIPS of task s on processor pns[k]) by walking the
// unique routing path of every (task, processor) pair.
LoadAssignment assignment_from_allocation(const Topology& topology, std::span<const Task> tasks,
                                          std::span<const DeviceId> pns,
                                          const std::vector<std::vector<double>>& allocation);

}  // namespace vecfog
