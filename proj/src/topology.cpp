#include "vecfog/topology.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <queue>
#include <tuple>

#include "vecfog/errors.hpp"

namespace vecfog {
namespace {

using Key = std::tuple<int, int, DeviceKind, int>;  // zone, cluster, kind, index

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::string_view architecture_name(Architecture a) {
  return a == Architecture::OneZone ? "one-zone" : "multi-zone";
}

Topology Topology::build(const TopologyParams& params, const ProfileTable& profiles) {
  require(params.zones >= 1, "topology needs at least one zone");
  require(params.clusters_per_zone >= 1, "topology needs at least one cluster per zone");
  require(params.vns_per_cluster >= 0, "vns_per_cluster must be non-negative");
  require(params.cc_servers >= 1, "topology needs at least one cloud server");
  require(params.rr_hops >= 0, "rr_hops must be non-negative");

  Topology t;
  t.params_ = params;
  t.profiles_ = profiles;

  using K = DeviceKind;
  std::vector<Key> keys;
  keys.emplace_back(0, 0, K::Olt, 0);
  keys.emplace_back(0, 0, K::MetroSwitch, 0);
  keys.emplace_back(0, 0, K::MetroRouterPort, 0);
  for (int i = 0; i < params.rr_hops; ++i) keys.emplace_back(0, 0, K::CoreRouterPort, i);
  keys.emplace_back(0, 0, K::CloudRouterPort, 0);
  keys.emplace_back(0, 0, K::CloudSwitch, 0);
  for (int i = 0; i < params.cc_servers; ++i) keys.emplace_back(0, 0, K::CloudServer, i);
  keys.emplace_back(0, 0, K::MetroFogRouterPort, 0);
  keys.emplace_back(0, 0, K::MetroFogSwitch, 0);
  keys.emplace_back(0, 0, K::MetroFogServer, 0);
  keys.emplace_back(0, 0, K::OltFogRouterPort, 0);
  keys.emplace_back(0, 0, K::OltFogSwitch, 0);
  keys.emplace_back(0, 0, K::OltFogServer, 0);
  int cluster = 0;
  for (int z = 1; z <= params.zones; ++z) {
    keys.emplace_back(z, 0, K::Onu, 0);
    keys.emplace_back(z, 0, K::OnuFogProcessor, 0);
    for (int c = 0; c < params.clusters_per_zone; ++c) {
      ++cluster;
      keys.emplace_back(z, cluster, K::AccessPoint, 0);
      for (int v = 0; v < params.vns_per_cluster; ++v) {
        keys.emplace_back(z, cluster, K::VnProcessor, v);
        keys.emplace_back(z, cluster, K::VnWirelessAdapter, v);
      }
    }
  }
  std::sort(keys.begin(), keys.end());

  std::map<Key, DeviceId> ids;
  t.devices_.reserve(keys.size());
  for (const auto& key : keys) {
    const auto& [zone, clus, kind, index] = key;
    DeviceId id(static_cast<std::int32_t>(t.devices_.size()));
    t.devices_.push_back(Device{id, kind, zone, clus, index});
    ids.emplace(key, id);
  }
  t.adjacency_.assign(t.devices_.size(), {});
  auto at = [&](int zone, int clus, K kind, int index) { return ids.at({zone, clus, kind, index}); };

  const DeviceId olt = at(0, 0, K::Olt, 0);
  const DeviceId ms = at(0, 0, K::MetroSwitch, 0);
  t.add_edge(olt, ms);
  DeviceId upstream = at(0, 0, K::MetroRouterPort, 0);
  t.add_edge(ms, upstream);
  for (int i = 0; i < params.rr_hops; ++i) {
    const DeviceId rr = at(0, 0, K::CoreRouterPort, i);
    t.add_edge(upstream, rr);
    upstream = rr;
  }
  const DeviceId cr = at(0, 0, K::CloudRouterPort, 0);
  const DeviceId cs = at(0, 0, K::CloudSwitch, 0);
  t.add_edge(upstream, cr);
  t.add_edge(cr, cs);
  for (int i = 0; i < params.cc_servers; ++i) t.add_edge(cs, at(0, 0, K::CloudServer, i));

  t.add_edge(ms, at(0, 0, K::MetroFogRouterPort, 0));
  t.add_edge(at(0, 0, K::MetroFogRouterPort, 0), at(0, 0, K::MetroFogSwitch, 0));
  t.add_edge(at(0, 0, K::MetroFogSwitch, 0), at(0, 0, K::MetroFogServer, 0));
  t.add_edge(olt, at(0, 0, K::OltFogRouterPort, 0));
  t.add_edge(at(0, 0, K::OltFogRouterPort, 0), at(0, 0, K::OltFogSwitch, 0));
  t.add_edge(at(0, 0, K::OltFogSwitch, 0), at(0, 0, K::OltFogServer, 0));

  cluster = 0;
  for (int z = 1; z <= params.zones; ++z) {
    const DeviceId onu = at(z, 0, K::Onu, 0);
    t.onus_.push_back(onu);
    t.add_edge(olt, onu);
    t.add_edge(onu, at(z, 0, K::OnuFogProcessor, 0));
    for (int c = 0; c < params.clusters_per_zone; ++c) {
      ++cluster;
      const DeviceId ap = at(z, cluster, K::AccessPoint, 0);
      t.access_points_.push_back(ap);
      t.add_edge(onu, ap);
      for (int v = 0; v < params.vns_per_cluster; ++v) {
        const DeviceId vw = at(z, cluster, K::VnWirelessAdapter, v);
        t.add_edge(ap, vw);
        t.add_edge(vw, at(z, cluster, K::VnProcessor, v));
      }
    }
  }
  for (auto& adj : t.adjacency_) std::sort(adj.begin(), adj.end());
  if (t.links_.size() != 2 * (t.devices_.size() - 1)) {
    throw ConfigError("routing layer is not a tree");
  }
  t.build_paths();
  return t;
}

void Topology::add_edge(DeviceId a, DeviceId b) {
  adjacency_[a.index()].push_back(b);
  adjacency_[b.index()].push_back(a);
  auto directed = [&](DeviceId from, DeviceId to) {
    const Device& receiver = devices_[to.index()];
    const DeviceId rated = is_processing(receiver.kind) ? from : to;
    links_.push_back(Link{from, to, profiles_[devices_[rated.index()].kind].capacity});
  };
  directed(a, b);
  directed(b, a);
}

void Topology::build_paths() {
  const std::size_t n = devices_.size();
  paths_.assign(access_points_.size(), std::vector<std::vector<DeviceId>>(n));
  for (std::size_t c = 0; c < access_points_.size(); ++c) {
    std::vector<DeviceId> parent(n);
    std::vector<char> seen(n, 0);
    std::queue<DeviceId> frontier;
    frontier.push(access_points_[c]);
    seen[access_points_[c].index()] = 1;
    std::size_t reached = 0;
    while (!frontier.empty()) {
      const DeviceId u = frontier.front();
      frontier.pop();
      ++reached;
      for (DeviceId v : adjacency_[u.index()]) {
        if (seen[v.index()]) continue;
        seen[v.index()] = 1;
        parent[v.index()] = u;
        frontier.push(v);
      }
    }
    if (reached != n) throw ConfigError("routing layer is not connected");
    for (const Device& d : devices_) {
      if (!is_processing(d.kind)) continue;
      std::vector<DeviceId>& p = paths_[c][d.id.index()];
      for (DeviceId v = d.id; v != access_points_[c]; v = parent[v.index()]) p.push_back(v);
      p.push_back(access_points_[c]);
      std::reverse(p.begin(), p.end());
    }
  }
}

const Device& Topology::device(DeviceId id) const {
  if (!id.valid() || id.index() >= devices_.size()) {
    throw UnknownNode("device " + std::to_string(id.value) + " is not in the topology");
  }
  return devices_[id.index()];
}

std::span<const DeviceId> Topology::neighbors(DeviceId id) const {
  return adjacency_[device(id).id.index()];
}

double Topology::link_capacity(DeviceId from, DeviceId to) const {
  for (const Link& l : links_) {
    if (l.from == from && l.to == to) return l.capacity;
  }
  throw UnknownNode("no link " + std::to_string(from.value) + " -> " + std::to_string(to.value));
}

int Topology::zone_of_cluster(int cluster) const {
  if (cluster < 1 || cluster > cluster_count()) {
    throw UnknownNode("cluster " + std::to_string(cluster) + " is not in the topology");
  }
  return (cluster - 1) / params_.clusters_per_zone + 1;
}

DeviceId Topology::access_point(int cluster) const {
  zone_of_cluster(cluster);
  return access_points_[static_cast<std::size_t>(cluster - 1)];
}

DeviceId Topology::onu(int zone) const {
  if (zone < 1 || zone > params_.zones) {
    throw UnknownNode("zone " + std::to_string(zone) + " is not in the topology");
  }
  return onus_[static_cast<std::size_t>(zone - 1)];
}

std::vector<DeviceId> Topology::processing_nodes() const {
  std::vector<DeviceId> out;
  for (const Device& d : devices_) {
    if (is_processing(d.kind)) out.push_back(d.id);
  }
  return out;
}

std::vector<DeviceId> Topology::devices_of_kind(DeviceKind kind) const {
  std::vector<DeviceId> out;
  for (const Device& d : devices_) {
    if (d.kind == kind) out.push_back(d.id);
  }
  return out;
}

const std::vector<DeviceId>& Topology::path(int source_cluster, DeviceId pn) const {
  zone_of_cluster(source_cluster);
  const Device& d = device(pn);
  if (!is_processing(d.kind)) {
    throw UnknownNode("device " + std::to_string(pn.value) + " is not a processing node");
  }
  return paths_[static_cast<std::size_t>(source_cluster - 1)][pn.index()];
}

std::string Topology::serialize() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "topology architecture=%s zones=%d clusters_per_zone=%d vns_per_cluster=%d "
                "cc_servers=%d rr_hops=%d\n",
                std::string(architecture_name(params_.architecture)).c_str(), params_.zones,
                params_.clusters_per_zone, params_.vns_per_cluster, params_.cc_servers,
                params_.rr_hops);
  out += buf;
  for (const Device& d : devices_) {
    std::snprintf(buf, sizeof buf, "device %d %s zone=%d cluster=%d index=%d\n", d.id.value,
                  std::string(kind_code(d.kind)).c_str(), d.zone, d.cluster, d.index);
    out += buf;
  }
  for (const Link& l : links_) {
    std::snprintf(buf, sizeof buf, "link %d %d %.17g\n", l.from.value, l.to.value, l.capacity);
    out += buf;
  }
  return out;
}

Topology build_one_zone(int clusters, int vns_per_cluster, int cc_servers, int rr_hops,
                        const ProfileTable& profiles) {
  return Topology::build(
      {Architecture::OneZone, 1, clusters, vns_per_cluster, cc_servers, rr_hops}, profiles);
}

Topology build_multi_zone(int zones, int clusters_per_zone, int vns_per_cluster, int cc_servers,
                          int rr_hops, const ProfileTable& profiles) {
  return Topology::build(
      {Architecture::MultiZone, zones, clusters_per_zone, vns_per_cluster, cc_servers, rr_hops},
      profiles);
}

}  // namespace vecfog
