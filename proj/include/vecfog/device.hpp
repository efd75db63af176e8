#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace vecfog {

// Equipment classes of the cloud / fog / vehicular-edge tree. The enumeration
// order is also the tie-break order of the canonical device ordering.
enum class DeviceKind {
  SourceNode,
  AccessPoint,
  Onu,
  Olt,
  MetroSwitch,
  MetroRouterPort,
  CoreRouterPort,
  CloudRouterPort,
  CloudSwitch,
  CloudServer,
  MetroFogRouterPort,
  MetroFogSwitch,
  MetroFogServer,
  OltFogRouterPort,
  OltFogSwitch,
  OltFogServer,
  OnuFogProcessor,
  VnProcessor,
  VnWirelessAdapter,
};

inline constexpr std::size_t kDeviceKindCount = 19;

// Short code used in names, configs and reports ("CC", "ONU", ...).
std::string_view kind_code(DeviceKind kind);
std::optional<DeviceKind> kind_from_code(std::string_view code);

// Processing nodes: CC, MF, LF, NF, VN. Everything else routes traffic.
constexpr bool is_processing(DeviceKind kind) {
  return kind == DeviceKind::CloudServer || kind == DeviceKind::MetroFogServer ||
         kind == DeviceKind::OltFogServer || kind == DeviceKind::OnuFogProcessor ||
         kind == DeviceKind::VnProcessor;
}

// Linear power profile of one equipment class. Capacity is MIPS for processing
// nodes and Mb/s for network devices. idle_fraction is the share of idle power
// charged to the application when the device is active.
struct DeviceProfile {
  DeviceKind kind = DeviceKind::SourceNode;
  double p_max = 0.0;
  double p_idle = 0.0;
  double capacity = 1.0;
  double idle_fraction = 1.0;
  double pue = 1.0;

  // Watts per unit of load, before PUE.
  double marginal() const { return (p_max - p_idle) / capacity; }
};

// Throws ConfigError if the profile breaks 0 <= p_idle <= p_max, capacity > 0,
// idle_fraction in [0, 1] or pue >= 1.
void validate(const DeviceProfile& profile);

class ProfileTable {
 public:
  const DeviceProfile& operator[](DeviceKind kind) const;
  void set(const DeviceProfile& profile);

 private:
  std::array<DeviceProfile, kDeviceKindCount> profiles_{};
};

// Table values: processor capacities from cores x clock x IPC, network
// capacities in Mb/s, 6% idle attribution on shared network gear, PUE by site.
ProfileTable default_profiles();

}  // namespace vecfog
