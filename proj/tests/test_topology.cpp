#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>

#include "vecfog/errors.hpp"
#include "vecfog/topology.hpp"

using namespace vecfog;

namespace {

std::map<DeviceKind, int> census(const Topology& t) {
  std::map<DeviceKind, int> n;
  for (const Device& d : t.devices()) ++n[d.kind];
  return n;
}

// Plain BFS over the adjacency lists; parents give the route back to `from`.
std::vector<DeviceId> bfs_path(const Topology& t, DeviceId from, DeviceId to) {
  std::vector<int> parent(t.devices().size(), -2);
  std::queue<DeviceId> q;
  q.push(from);
  parent[from.index()] = -1;
  while (!q.empty()) {
    DeviceId u = q.front();
    q.pop();
    for (DeviceId v : t.neighbors(u)) {
      if (parent[v.index()] != -2) continue;
      parent[v.index()] = u.value;
      q.push(v);
    }
  }
  std::vector<DeviceId> path;
  for (int v = to.value; v != -1; v = parent[static_cast<std::size_t>(v)]) {
    REQUIRE(v >= 0);
    path.emplace_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

TEST_CASE("one-zone device census") {
  const Topology t = build_one_zone(4, 2, 5, 1);
  auto n = census(t);
  CHECK(n[DeviceKind::AccessPoint] == 4);
  CHECK(n[DeviceKind::Onu] == 1);
  CHECK(n[DeviceKind::Olt] == 1);
  CHECK(n[DeviceKind::CloudServer] == 5);
  CHECK(n[DeviceKind::CoreRouterPort] == 1);
  CHECK(n[DeviceKind::MetroFogServer] == 1);
  CHECK(n[DeviceKind::OltFogServer] == 1);
  CHECK(n[DeviceKind::OnuFogProcessor] == 1);
  CHECK(n[DeviceKind::VnProcessor] == 8);
  CHECK(n[DeviceKind::VnWirelessAdapter] == 8);
  CHECK(t.processing_nodes().size() == 5 + 1 + 1 + 1 + 8);
}

TEST_CASE("multi-zone device census") {
  const Topology t = build_multi_zone(4, 1, 1, 3, 2);
  auto n = census(t);
  CHECK(n[DeviceKind::AccessPoint] == 4);
  CHECK(n[DeviceKind::Onu] == 4);
  CHECK(n[DeviceKind::OnuFogProcessor] == 4);
  CHECK(n[DeviceKind::Olt] == 1);
  CHECK(n[DeviceKind::CloudServer] == 3);
  CHECK(n[DeviceKind::CoreRouterPort] == 2);
  CHECK(n[DeviceKind::VnProcessor] == 4);
  for (int c = 1; c <= 4; ++c) CHECK(t.zone_of_cluster(c) == c);
}

TEST_CASE("ids follow canonical order") {
  const Topology t = build_multi_zone(2, 2, 2, 2);
  const auto& d = t.devices();
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d[i].id.index() == i);
    if (i > 0) {
      auto key = [](const Device& x) { return std::tuple(x.zone, x.cluster, x.kind, x.index); };
      CHECK(key(d[i - 1]) < key(d[i]));
    }
  }
}

TEST_CASE("routing paths match breadth-first search") {
  for (const Topology& t : {build_one_zone(4, 2, 5, 1), build_multi_zone(4, 1, 2, 2, 3),
                            build_multi_zone(2, 2, 1, 1, 1)}) {
    for (int c = 1; c <= t.cluster_count(); ++c) {
      for (DeviceId pn : t.processing_nodes()) {
        CHECK(t.path(c, pn) == bfs_path(t, t.access_point(c), pn));
      }
    }
  }
}

TEST_CASE("adjacency is symmetric and forms a tree") {
  const Topology t = build_multi_zone(4, 1, 2, 5, 2);
  std::size_t edges = 0;
  for (const Device& d : t.devices()) {
    for (DeviceId v : t.neighbors(d.id)) {
      auto back = t.neighbors(v);
      CHECK(std::find(back.begin(), back.end(), d.id) != back.end());
      ++edges;
    }
  }
  CHECK(edges / 2 + 1 == t.devices().size());
}

TEST_CASE("cloud and fog paths have the expected layers") {
  const Topology t = build_one_zone(4, 1, 5, 2);
  auto kinds = [&](int c, DeviceKind k) {
    std::vector<DeviceKind> out;
    for (DeviceId d : t.path(c, t.devices_of_kind(k).front())) out.push_back(t.device(d).kind);
    return out;
  };
  using K = DeviceKind;
  CHECK(kinds(1, K::CloudServer) ==
        std::vector<K>{K::AccessPoint, K::Onu, K::Olt, K::MetroSwitch, K::MetroRouterPort,
                       K::CoreRouterPort, K::CoreRouterPort, K::CloudRouterPort, K::CloudSwitch,
                       K::CloudServer});
  CHECK(kinds(1, K::OltFogServer) == std::vector<K>{K::AccessPoint, K::Onu, K::Olt,
                                                    K::OltFogRouterPort, K::OltFogSwitch,
                                                    K::OltFogServer});
  CHECK(kinds(1, K::OnuFogProcessor) == std::vector<K>{K::AccessPoint, K::Onu, K::OnuFogProcessor});
  CHECK(kinds(1, K::VnProcessor) ==
        std::vector<K>{K::AccessPoint, K::VnWirelessAdapter, K::VnProcessor});
}

TEST_CASE("link capacity is the receiver's, or the sender's into a processor") {
  const Topology t = build_multi_zone(4, 1, 1, 2);
  for (const Link& l : t.links()) {
    const DeviceKind to = t.device(l.to).kind;
    const double expected =
        is_processing(to) ? t.profile(l.from).capacity : t.profile(l.to).capacity;
    CHECK(l.capacity == expected);
    CHECK(t.link_capacity(l.from, l.to) == expected);
  }
}

TEST_CASE("serialize is deterministic") {
  const std::string a = build_multi_zone(4, 1, 2, 5, 2).serialize();
  const std::string b = build_multi_zone(4, 1, 2, 5, 2).serialize();
  CHECK(a == b);
  CHECK(a != build_multi_zone(4, 1, 2, 5, 1).serialize());
}

TEST_CASE("unknown nodes and clusters throw") {
  const Topology t = build_one_zone(4, 0, 1);
  CHECK_THROWS_AS(t.path(1, t.access_point(2)), UnknownNode);
  CHECK_THROWS_AS(t.path(5, t.processing_nodes().front()), UnknownNode);
  CHECK_THROWS_AS(t.device(DeviceId(100000)), UnknownNode);
  CHECK_THROWS_AS(t.access_point(0), UnknownNode);
  CHECK_THROWS_AS(t.link_capacity(t.access_point(1), t.access_point(2)), UnknownNode);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(build_one_zone(0, 0, 1), ConfigError);
  CHECK_THROWS_AS(build_one_zone(4, -1, 1), ConfigError);
  CHECK_THROWS_AS(build_multi_zone(4, 1, 0, 0, 1), ConfigError);
  CHECK_NOTHROW(build_one_zone(1, 0, 1, 0));
}
