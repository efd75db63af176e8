#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vecfog/errors.hpp"
#include "vecfog/power_model.hpp"
#include "vecfog/workload.hpp"

using namespace vecfog;
using K = DeviceKind;

namespace {

const ProfileTable kDefaults = default_profiles();

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

TEST_CASE("linear profile by hand") {
  const auto& nf = kDefaults[K::OnuFogProcessor];
  CHECK(linear_power(nf, 0.0) == doctest::Approx(9.0));
  CHECK(linear_power(nf, 3000.0) == doctest::Approx(12.0));
  CHECK(linear_power(nf, 6000.0) == 15.0);
  CHECK_THROWS_AS(linear_power(nf, 6001.0), CapacityExceeded);
  CHECK_THROWS_AS(linear_power(nf, -1.0), CapacityExceeded);

  const auto& cc = kDefaults[K::CloudServer];
  CHECK(linear_power(cc, 72000.0) == doctest::Approx(92.0));
}

TEST_CASE("facility power applies idle share and PUE") {
  const auto& olt = kDefaults[K::Olt];
  CHECK(device_power(olt, 4.0, true) ==
        doctest::Approx(1.5 * (0.06 * 45.0 + 4.0 * 5.0 / 1.92e6)).epsilon(1e-12));
  CHECK(device_power(olt, 0.0, false) == 0.0);

  // VN processors charge no idle; their adapters charge all of it.
  const auto& vn = kDefaults[K::VnProcessor];
  CHECK(device_power(vn, 1600.0, true) == doctest::Approx(2.0));
  const auto& vw = kDefaults[K::VnWirelessAdapter];
  CHECK(device_power(vw, 1.6, true) == doctest::Approx(1.5 + 1.6 / 72.2));

  const auto& lf = kDefaults[K::OltFogServer];
  CHECK(device_power(lf, 5440.0, true) == doctest::Approx(1.5 * (51.0 + 5440.0 * 34.0 / 54400.0)));

  // Access points carry wired traffic past their radio rating.
  const auto& ap = kDefaults[K::AccessPoint];
  CHECK_NOTHROW(device_power(ap, 5000.0, true));
  CHECK_THROWS_AS(device_power(kDefaults[K::Onu], 20000.0, true), CapacityExceeded);
}

TEST_CASE("idle identities") {
  const double fog_idle = kDefaults[K::MetroFogServer].p_idle + kDefaults[K::OltFogServer].p_idle;
  CHECK(rel(fog_idle, 102.0) <= 1e-9);
  CHECK(rel(kDefaults[K::CloudServer].p_idle, 69.0) <= 1e-9);
  const double edge =
      4 * activation_cost(kDefaults[K::VnWirelessAdapter]) + 2 * activation_cost(kDefaults[K::AccessPoint]);
  CHECK(rel(edge, 15.6) <= 1e-9);
}

TEST_CASE("activation and load costs") {
  const auto& cs = kDefaults[K::CloudSwitch];
  CHECK(activation_cost(cs) == doctest::Approx(1.1 * 0.06 * 414.0));
  CHECK(load_cost(cs) == doctest::Approx(1.1 * 46.0 / 600000.0));
  CHECK(activation_cost(kDefaults[K::VnProcessor]) == 0.0);
}

TEST_CASE("total power groups devices by tier") {
  const Topology t = build_one_zone(4, 1, 2);
  const std::vector<Task> tasks = make_tasks(t, Pattern::OneTaskOneCluster, Strategy::SA, 2000.0, 0.001);
  const auto pns = t.processing_nodes();
  // Everything on the OLT fog server.
  std::vector<std::vector<double>> alloc(1, std::vector<double>(pns.size(), 0.0));
  const DeviceId lf = t.devices_of_kind(K::OltFogServer).front();
  for (std::size_t k = 0; k < pns.size(); ++k) {
    if (pns[k] == lf) alloc[0][k] = 2000.0;
  }
  const LoadAssignment a = assignment_from_allocation(t, tasks, pns, alloc);
  const PowerBreakdown b = total_power(t, a);

  auto w = [&](K k, double load) { return device_power(kDefaults[k], load, true); };
  const double flow = 2.0;
  CHECK(b.tpc_lf == doctest::Approx(w(K::OltFogRouterPort, flow) + w(K::OltFogSwitch, flow) +
                                    w(K::OltFogServer, 2000.0)));
  CHECK(b.tpc_o == doctest::Approx(w(K::Olt, flow)));
  CHECK(b.tpc_u == doctest::Approx(w(K::Onu, flow)));
  CHECK(b.tpc_a == doctest::Approx(w(K::AccessPoint, flow)));
  CHECK(b.tpc_cc == 0.0);
  CHECK(b.tpc_mf == 0.0);
  CHECK(b.tpc_nf == 0.0);
  CHECK(b.tpc_vn == 0.0);
  CHECK(b.tpc_net == doctest::Approx(b.tpc_rr + b.tpc_mr + b.tpc_ms + b.tpc_o + b.tpc_u + b.tpc_a));
  CHECK(b.total == doctest::Approx(b.tpc_cc + b.tpc_mf + b.tpc_lf + b.tpc_nf + b.tpc_vn + b.tpc_net));

  // Path loads: the processor gets MIPS, everything before it Mb/s.
  for (DeviceId d : t.path(1, lf)) {
    CHECK(a.active[d.index()] == 1);
    CHECK(a.load[d.index()] == doctest::Approx(d == lf ? 2000.0 : flow));
  }
}

TEST_CASE("loads from several tasks add up on shared devices") {
  const Topology t = build_one_zone(4, 0, 1);
  const auto tasks = make_tasks(t, Pattern::OneTaskEachCluster, Strategy::SA, 1000.0, 0.01);
  const auto pns = t.processing_nodes();
  std::vector<std::vector<double>> alloc(tasks.size(), std::vector<double>(pns.size(), 0.0));
  for (auto& row : alloc) row.back() = 1000.0;  // NF is the last processor
  const LoadAssignment a = assignment_from_allocation(t, tasks, pns, alloc);
  CHECK(a.load[t.onu(1).index()] == doctest::Approx(40.0));
  for (int c = 1; c <= 4; ++c) CHECK(a.load[t.access_point(c).index()] == doctest::Approx(10.0));
  CHECK(a.load[pns.back().index()] == doctest::Approx(4000.0));
}

TEST_CASE("inconsistent assignments are rejected") {
  const Topology t = build_one_zone(1, 0, 1);
  LoadAssignment a = LoadAssignment::empty(t);
  CHECK(total_power(t, a).total == 0.0);

  const DeviceId nf = t.devices_of_kind(K::OnuFogProcessor).front();
  a.active[nf.index()] = 1;
  CHECK_THROWS_AS(total_power(t, a), InconsistentAssignment);
  a.active[nf.index()] = 0;
  a.load[nf.index()] = 100.0;
  CHECK_THROWS_AS(total_power(t, a), InconsistentAssignment);
  a.active[nf.index()] = 1;
  a.load[nf.index()] = 7000.0;
  CHECK_THROWS_AS(total_power(t, a), CapacityExceeded);

  LoadAssignment small;
  CHECK_THROWS_AS(total_power(t, small), InconsistentAssignment);
}

TEST_CASE("profile validation") {
  ProfileTable p = default_profiles();
  CHECK_THROWS_AS(p.set({K::OnuFogProcessor, 5.0, 9.0, 6000.0, 1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(p.set({K::OnuFogProcessor, 15.0, 9.0, 0.0, 1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(p.set({K::OnuFogProcessor, 15.0, 9.0, 6000.0, 1.5, 1.0}), ConfigError);
  CHECK_THROWS_AS(p.set({K::OnuFogProcessor, 15.0, 9.0, 6000.0, 1.0, 0.9}), ConfigError);
  CHECK_THROWS_AS(p[K::SourceNode], ConfigError);
  CHECK(kind_from_code("NF") == K::OnuFogProcessor);
  CHECK(!kind_from_code("XX").has_value());
  CHECK(mips_capacity(8, 2.5, 3.0) == doctest::Approx(60000.0));
}
