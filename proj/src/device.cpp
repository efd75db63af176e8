#include "vecfog/device.hpp"

#include <cmath>

#include "vecfog/errors.hpp"

namespace vecfog {
namespace {

constexpr std::array<std::string_view, kDeviceKindCount> kCodes = {
    "SN", "AP",  "ONU", "OLT", "MS", "MR", "RR", "CR", "CS", "CC",
    "MFR", "MFS", "MF",  "LFR", "LFS", "LF", "NF", "VN", "VW",
};

constexpr std::size_t slot(DeviceKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

std::string_view kind_code(DeviceKind kind) { return kCodes[slot(kind)]; }

std::optional<DeviceKind> kind_from_code(std::string_view code) {
  for (std::size_t i = 0; i < kCodes.size(); ++i) {
    if (kCodes[i] == code) return static_cast<DeviceKind>(i);
  }
  return std::nullopt;
}

void validate(const DeviceProfile& p) {
  const std::string who(kind_code(p.kind));
  if (!(p.p_idle >= 0.0) || !(p.p_idle <= p.p_max)) {
    throw ConfigError(who + ": profile needs 0 <= p_idle <= p_max");
  }
  if (!(p.capacity > 0.0) || !std::isfinite(p.capacity)) {
    throw ConfigError(who + ": profile capacity must be positive");
  }
  if (!(p.idle_fraction >= 0.0 && p.idle_fraction <= 1.0)) {
    throw ConfigError(who + ": idle_fraction must lie in [0, 1]");
  }
  if (!(p.pue >= 1.0)) throw ConfigError(who + ": pue must be >= 1");
}

const DeviceProfile& ProfileTable::operator[](DeviceKind kind) const {
  if (kind == DeviceKind::SourceNode) {
    throw ConfigError("source nodes carry no power profile");
  }
  return profiles_[slot(kind)];
}

void ProfileTable::set(const DeviceProfile& profile) {
  validate(profile);
  profiles_[slot(profile.kind)] = profile;
}

ProfileTable default_profiles() {
  using K = DeviceKind;
  constexpr double kTau = 0.06;
  constexpr double kNetPue = 1.5;
  ProfileTable t;
  // kind, p_max, p_idle, capacity, idle_fraction, pue
  t.set({K::CoreRouterPort, 638.0, 574.2, 40000.0, kTau, kNetPue});
  t.set({K::MetroRouterPort, 25.0, 22.5, 40000.0, kTau, kNetPue});
  t.set({K::MetroSwitch, 500.0, 450.0, 1800000.0, kTau, kNetPue});
  t.set({K::Olt, 50.0, 45.0, 1920000.0, kTau, kNetPue});
  t.set({K::Onu, 15.0, 13.5, 10000.0, 1.0, 1.0});
  t.set({K::AccessPoint, 11.0, 4.8, 1167.0, 1.0, 1.0});
  t.set({K::CloudRouterPort, 25.0, 22.5, 40000.0, kTau, 1.1});
  t.set({K::CloudSwitch, 460.0, 414.0, 600000.0, kTau, 1.1});
  t.set({K::MetroFogRouterPort, 13.0, 11.7, 40000.0, kTau, 1.4});
  t.set({K::MetroFogSwitch, 245.0, 220.5, 200000.0, kTau, 1.4});
  t.set({K::OltFogRouterPort, 13.0, 11.7, 40000.0, kTau, 1.5});
  t.set({K::OltFogSwitch, 245.0, 220.5, 200000.0, kTau, 1.5});
  t.set({K::VnWirelessAdapter, 2.5, 1.5, 72.2, 1.0, 1.0});
  t.set({K::CloudServer, 115.0, 69.0, 144000.0, 1.0, 1.1});
  t.set({K::MetroFogServer, 85.0, 51.0, 88000.0, 1.0, 1.4});
  t.set({K::OltFogServer, 85.0, 51.0, 54400.0, 1.0, 1.5});
  t.set({K::OnuFogProcessor, 15.0, 9.0, 6000.0, 1.0, 1.0});
  t.set({K::VnProcessor, 10.0, 6.0, 3200.0, 1.0, 1.0});
  return t;
}

}  // namespace vecfog
