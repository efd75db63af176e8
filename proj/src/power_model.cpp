#include "vecfog/power_model.hpp"

#include <cmath>
#include <string>

#include "vecfog/errors.hpp"
#include "vecfog/workload.hpp"

namespace vecfog {
namespace {

// Solver output is accurate to ~1e-9; loads within this relative slack of
// capacity are treated as at capacity.
constexpr double kCapacitySlack = 1e-9;

void check_capacity(const DeviceProfile& p, double load) {
  if (load < 0.0 || !std::isfinite(load)) {
    throw CapacityExceeded(std::string(kind_code(p.kind)) + ": invalid load " +
                           std::to_string(load));
  }
  if (load > p.capacity * (1.0 + kCapacitySlack)) {
    throw CapacityExceeded(std::string(kind_code(p.kind)) + ": load " + std::to_string(load) +
                           " exceeds capacity " + std::to_string(p.capacity));
  }
}

double charged_idle(const DeviceProfile& p) {
  switch (p.kind) {
    case DeviceKind::VnProcessor:
      return 0.0;
    case DeviceKind::VnWirelessAdapter:
      return p.p_idle;
    default:
      return p.idle_fraction * p.p_idle;
  }
}

}  // namespace

LoadAssignment LoadAssignment::empty(const Topology& topology) {
  const std::size_t n = topology.devices().size();
  return LoadAssignment{std::vector<double>(n, 0.0), std::vector<char>(n, 0)};
}

double linear_power(const DeviceProfile& profile, double load) {
  check_capacity(profile, load);
  if (load == profile.capacity) return profile.p_max;
  return profile.p_idle + load * profile.marginal();
}

double device_power(const DeviceProfile& profile, double carried, bool activated) {
  if (profile.kind == DeviceKind::AccessPoint) {
    if (carried < 0.0 || !std::isfinite(carried)) check_capacity(profile, carried);
  } else {
    check_capacity(profile, carried);
  }
  const double idle = activated ? charged_idle(profile) : 0.0;
  return profile.pue * (idle + carried * profile.marginal());
}

double activation_cost(const DeviceProfile& profile) {
  return profile.pue * charged_idle(profile);
}

double load_cost(const DeviceProfile& profile) { return profile.pue * profile.marginal(); }

PowerBreakdown total_power(const Topology& topology, const LoadAssignment& a) {
  const auto& devices = topology.devices();
  if (a.load.size() != devices.size() || a.active.size() != devices.size()) {
    throw InconsistentAssignment("assignment does not match the topology size");
  }
  PowerBreakdown b;
  for (const Device& d : devices) {
    const double load = a.load[d.id.index()];
    const bool active = a.active[d.id.index()] != 0;
    if (active != (load > 0.0)) {
      throw InconsistentAssignment(std::string(kind_code(d.kind)) + " device " +
                                   std::to_string(d.id.value) +
                                   (active ? " is active without load" : " carries load while inactive"));
    }
    if (!active) continue;
    const double w = device_power(topology.profile(d.id), load, true);
    using K = DeviceKind;
    switch (d.kind) {
      case K::CloudServer:
      case K::CloudRouterPort:
      case K::CloudSwitch:
        b.tpc_cc += w;
        break;
      case K::MetroFogServer:
      case K::MetroFogRouterPort:
      case K::MetroFogSwitch:
        b.tpc_mf += w;
        break;
      case K::OltFogServer:
      case K::OltFogRouterPort:
      case K::OltFogSwitch:
        b.tpc_lf += w;
        break;
      case K::OnuFogProcessor:
        b.tpc_nf += w;
        break;
      case K::VnProcessor:
      case K::VnWirelessAdapter:
        b.tpc_vn += w;
        break;
      case K::CoreRouterPort:
        b.tpc_rr += w;
        break;
      case K::MetroRouterPort:
        b.tpc_mr += w;
        break;
      case K::MetroSwitch:
        b.tpc_ms += w;
        break;
      case K::Olt:
        b.tpc_o += w;
        break;
      case K::Onu:
        b.tpc_u += w;
        break;
      case K::AccessPoint:
        b.tpc_a += w;
        break;
      case K::SourceNode:
        break;
    }
  }
  b.tpc_net = b.tpc_rr + b.tpc_mr + b.tpc_ms + b.tpc_o + b.tpc_u + b.tpc_a;
  b.total = b.tpc_cc + b.tpc_mf + b.tpc_lf + b.tpc_nf + b.tpc_vn + b.tpc_net;
  return b;
}

LoadAssignment assignment_from_allocation(const Topology& topology, std::span<const Task> tasks,
                                          std::span<const DeviceId> pns,
                                          const std::vector<std::vector<double>>& allocation) {
  if (allocation.size() != tasks.size()) {
    throw InconsistentAssignment("allocation rows do not match the task list");
  }
  LoadAssignment a = LoadAssignment::empty(topology);
  for (std::size_t s = 0; s < tasks.size(); ++s) {
    if (allocation[s].size() != pns.size()) {
      throw InconsistentAssignment("allocation columns do not match the processor list");
    }
    for (std::size_t k = 0; k < pns.size(); ++k) {
      const double x = allocation[s][k];
      if (x == 0.0) continue;
      if (x < 0.0) throw InconsistentAssignment("negative allocation");
      const auto& path = topology.path(tasks[s].source_cluster, pns[k]);
      const double flow = tasks[s].drr * x;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) a.load[path[i].index()] += flow;
      a.load[pns[k].index()] += x;
    }
  }
  for (std::size_t i = 0; i < a.load.size(); ++i) a.active[i] = a.load[i] > 0.0 ? 1 : 0;
  return a;
}

}  // namespace vecfog
