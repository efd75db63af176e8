#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vecfog/device.hpp"

namespace vecfog {

struct DeviceId {
  std::int32_t value = -1;

  constexpr DeviceId() = default;
  constexpr explicit DeviceId(std::int32_t v) : value(v) {}
  constexpr std::size_t index() const { return static_cast<std::size_t>(value); }
  constexpr bool valid() const { return value >= 0; }
  friend constexpr auto operator<=>(DeviceId, DeviceId) = default;
};

enum class Architecture { OneZone, MultiZone };

std::string_view architecture_name(Architecture a);

// Zones and clusters are numbered from 1. Shared core/metro/OLT equipment sits
// in zone 0, cluster 0; ONU and NF sit in their zone with cluster 0.
struct Device {
  DeviceId id;
  DeviceKind kind = DeviceKind::SourceNode;
  int zone = 0;
  int cluster = 0;
  int index = 0;  // position among same-kind devices of the same zone/cluster
};

// Directed link; capacity is the receiving device's rated throughput (the
// sending device's when the receiver is a processor).
struct Link {
  DeviceId from;
  DeviceId to;
  double capacity = 0.0;
};

struct TopologyParams {
  Architecture architecture = Architecture::OneZone;
  int zones = 1;
  int clusters_per_zone = 4;
  int vns_per_cluster = 0;
  int cc_servers = 5;
  int rr_hops = 1;
};

// Immutable four-layer tree: core (RR ports, CR, CS, CC pool), metro (MS, MR,
// MF block), access (OLT, LF block, ONUs with NF), edge (APs, VW+VN pairs).
class Topology {
 public:
  static Topology build(const TopologyParams& params,
                        const ProfileTable& profiles = default_profiles());

  const TopologyParams& params() const { return params_; }
  const ProfileTable& profiles() const { return profiles_; }

  // Canonical order: (zone, cluster, kind, index); a device's id is its position.
  const std::vector<Device>& devices() const { return devices_; }
  const Device& device(DeviceId id) const;
  const DeviceProfile& profile(DeviceId id) const { return profiles_[device(id).kind]; }
  std::span<const DeviceId> neighbors(DeviceId id) const;
  const std::vector<Link>& links() const { return links_; }
  double link_capacity(DeviceId from, DeviceId to) const;

  int zone_count() const { return params_.zones; }
  int cluster_count() const { return params_.zones * params_.clusters_per_zone; }
  int zone_of_cluster(int cluster) const;
  DeviceId access_point(int cluster) const;
  DeviceId onu(int zone) const;

  std::vector<DeviceId> processing_nodes() const;
  std::vector<DeviceId> devices_of_kind(DeviceKind kind) const;

  // Unique device sequence from the cluster's AP to `pn`, both ends included.
  // Throws UnknownNode if `pn` is not a processing node of this topology.
  const std::vector<DeviceId>& path(int source_cluster, DeviceId pn) const;

  // Deterministic text form: one line per device and per link.
  std::string serialize() const;

 private:
  Topology() = default;
  void add_edge(DeviceId a, DeviceId b);
  void build_paths();

  TopologyParams params_;
  ProfileTable profiles_;
  std::vector<Device> devices_;
  std::vector<std::vector<DeviceId>> adjacency_;
  std::vector<Link> links_;
  std::vector<DeviceId> access_points_;  // by cluster - 1
  std::vector<DeviceId> onus_;           // by zone - 1
  // paths_[cluster - 1][device index]; empty unless the device is a processor.
  std::vector<std::vector<std::vector<DeviceId>>> paths_;
};

Topology build_one_zone(int clusters, int vns_per_cluster, int cc_servers, int rr_hops = 1,
                        const ProfileTable& profiles = default_profiles());

Topology build_multi_zone(int zones, int clusters_per_zone, int vns_per_cluster, int cc_servers,
                          int rr_hops = 1, const ProfileTable& profiles = default_profiles());

}  // namespace vecfog

template <>
struct std::hash<vecfog::DeviceId> {
  std::size_t operator()(vecfog::DeviceId id) const noexcept {
    return std::hash<std::int32_t>{}(id.value);
  }
};
