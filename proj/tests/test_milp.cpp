#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "vecfog/errors.hpp"
#include "vecfog/milp_model.hpp"
#include "vecfog/solver.hpp"

using namespace vecfog;

namespace {

MilpModel scenario_model(Architecture arch, Pattern p, Case c, Strategy s, double omega,
                         double drr = 0.001) {
  Scenario sc;
  sc.architecture = arch;
  sc.pattern = p;
  sc.availability = c;
  sc.strategy = s;
  sc.drr = drr;
  const Instance inst = make_scenario(sc, omega, scenario_topology(arch, c));
  return build_model(inst.topology, inst.tasks, inst.mask);
}

bool near(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

void check_same(const ParsedModel& a, const ParsedModel& b, double tol) {
  auto same_terms = [&](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].first != y[i].first || !near(x[i].second, y[i].second, tol)) return false;
    }
    return true;
  };
  CHECK(same_terms(a.objective, b.objective));
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    INFO(a.rows[i].name);
    CHECK(a.rows[i].name == b.rows[i].name);
    CHECK(a.rows[i].sense == b.rows[i].sense);
    CHECK(near(a.rows[i].rhs, b.rows[i].rhs, tol));
    CHECK(same_terms(a.rows[i].terms, b.rows[i].terms));
  }
  CHECK(a.binaries == b.binaries);
  REQUIRE(a.bounds.size() == b.bounds.size());
  for (std::size_t i = 0; i < a.bounds.size(); ++i) {
    CHECK(std::get<0>(a.bounds[i]) == std::get<0>(b.bounds[i]));
    CHECK(near(std::get<1>(a.bounds[i]), std::get<1>(b.bounds[i]), tol));
    const double ha = std::get<2>(a.bounds[i]), hb = std::get<2>(b.bounds[i]);
    CHECK(((std::isinf(ha) && std::isinf(hb)) || near(ha, hb, tol)));
  }
}

}  // namespace

TEST_CASE("variable count and layout") {
  for (Case c : {Case::CCA, Case::CFA, Case::CFVA_L}) {
    for (Strategy s : {Strategy::SA, Strategy::DA}) {
      const MilpModel m = scenario_model(Architecture::MultiZone, Pattern::OneTaskEachCluster, c, s, 1000);
      const std::size_t S = m.tasks.size(), P = m.pns.size(), N = m.traffic_devices.size();
      CHECK(m.variables.size() == 2 * S * P + P + N);
      for (std::size_t t = 0; t < S; ++t) {
        for (std::size_t k = 0; k < P; ++k) {
          CHECK(m.variables[m.x(t, k)].role == VarRole::Allocation);
          CHECK(m.variables[m.x(t, k)].device == m.pns[k]);
          CHECK(m.variables[m.split(t, k)].type == VarType::Binary);
          CHECK(m.variables[m.split(t, k)].task == static_cast<int>(t));
        }
      }
      for (std::size_t k = 0; k < P; ++k) CHECK(m.variables[m.node(k)].role == VarRole::NodeOn);
      for (std::size_t j = 0; j < N; ++j) CHECK(m.variables[m.traffic(j)].role == VarRole::TrafficOn);
    }
  }
}

TEST_CASE("label completeness") {
  for (Strategy s : {Strategy::SA, Strategy::DA}) {
    const MilpModel m = scenario_model(Architecture::OneZone, Pattern::FiveTasksOneCluster, Case::CFVA_L, s, 2000);
    const std::size_t S = m.tasks.size(), P = m.pns.size(), N = m.traffic_devices.size();
    for (int l = 23; l <= 35; ++l) CHECK(m.constraint_count("C" + std::to_string(l)) > 0);
    CHECK(m.constraint_count("C24") == S);
    CHECK(m.constraint_count("C25") == S * P);
    CHECK(m.constraint_count("C26") == S * P);
    CHECK(m.constraint_count("C27") == P);
    CHECK(m.constraint_count("C28") == P);
    CHECK(m.constraint_count("C29") == N);
    CHECK(m.constraint_count("C33") == P);
    CHECK(m.constraint_count("C36") == (s == Strategy::SA ? S : 0));
    for (const Constraint& c : m.constraints) CHECK(c.label.rfind("C", 0) == 0);
  }
}

TEST_CASE("single task on the cloud pool") {
  const MilpModel m = scenario_model(Architecture::OneZone, Pattern::OneTaskOneCluster, Case::CCA, Strategy::SA, 1000);
  CHECK(m.pns.size() == 5);
  std::size_t xs = 0;
  for (const Variable& v : m.variables) xs += v.role == VarRole::Allocation ? 1 : 0;
  CHECK(xs == 5);
  for (const Constraint& c : m.constraints) {
    if (c.label == "C24") CHECK(c.rhs == 1000.0);
  }
}

TEST_CASE("big-M values are tight") {
  const MilpModel m = scenario_model(Architecture::OneZone, Pattern::FiveTasksOneCluster, Case::CFA, Strategy::DA, 3000, 0.02);
  for (const Constraint& c : m.constraints) {
    if (c.label == "C26") CHECK(c.terms[1].coef == -3000.0);
    if (c.label == "C28") CHECK(c.terms.back().coef == -5.0);
    if (c.label == "C31") CHECK(c.terms.back().coef == doctest::Approx(-5 * 60.0));
  }
}

TEST_CASE("AP to VW link blocks a high data rate task") {
  const MilpModel m = scenario_model(Architecture::OneZone, Pattern::OneTaskOneCluster, Case::CFVA_L, Strategy::SA, 1000, 0.08);
  const Topology& t = *m.topology;
  int links = 0;
  for (const Constraint& c : m.constraints) {
    if (c.label != "C34" || c.name.rfind("C34_l", 0) != 0) continue;
    const Variable& x = m.variables[c.terms.front().var];
    if (t.device(x.device).kind != DeviceKind::VnProcessor) continue;
    const auto& path = t.path(1, x.device);
    if (c.name != "C34_l" + std::to_string(path[0].value) + "_" + std::to_string(path[1].value)) continue;
    ++links;
    CHECK(c.rhs == doctest::Approx(72.2));
    CHECK(c.terms.front().coef * 1000.0 > c.rhs);
  }
  CHECK(links == 2);
  const Solution s = solve(m);
  REQUIRE(s.status == SolveStatus::Optimal);
  for (std::size_t k = 0; k < m.pns.size(); ++k) {
    if (t.device(m.pns[k]).kind == DeviceKind::VnProcessor) CHECK(s.allocation[0][k] == 0.0);
  }
}

TEST_CASE("cloud server activation cost") {
  const MilpModel m = scenario_model(Architecture::OneZone, Pattern::FiveTasksEachCluster, Case::CCA, Strategy::SA, 1000);
  CHECK(m.tasks.size() == 20);
  for (std::size_t k = 0; k < m.pns.size(); ++k) {
    CHECK(m.variables[m.node(k)].cost == doctest::Approx(75.9).epsilon(1e-12));
  }
}

TEST_CASE("objective equals total power on random allocations") {
  std::mt19937 rng(7);
  for (Case c : {Case::CCA, Case::CFA, Case::CFVA_L}) {
    for (Architecture a : {Architecture::OneZone, Architecture::MultiZone}) {
      const MilpModel m = scenario_model(a, Pattern::FiveTasksEachCluster, c, Strategy::DA, 400, 0.01);
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> alloc(m.tasks.size(), std::vector<double>(m.pns.size(), 0.0));
        for (std::size_t s = 0; s < m.tasks.size(); ++s) {
          std::uniform_int_distribution<std::size_t> pick(0, m.pns.size() - 1);
          const std::size_t k1 = pick(rng), k2 = pick(rng);
          // Keep both parts above the 1 MIPS floor of a positive allocation.
          const double share = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
          alloc[s][k1] += 400.0 * share;
          alloc[s][k2] += 400.0 * (1.0 - share);
        }
        const Solution sol = make_solution(m, alloc, SolveStatus::Optimal);
        const double direct =
            total_power(*m.topology, assignment_from_allocation(*m.topology, m.tasks, m.pns, alloc)).total;
        CHECK(std::fabs(m.objective(sol.values) - direct) <= 1e-9 * direct);
        const ResidualReport r = verify(sol, m);
        CHECK(r.max_violation.at("C24") <= 1e-9);
        CHECK(r.max_violation.at("C25") <= 1e-9);
        CHECK(r.max_violation.at("C31") <= 1e-9);
      }
    }
  }
}

TEST_CASE("verifier flags an injected capacity violation") {
  const MilpModel m = scenario_model(Architecture::OneZone, Pattern::OneTaskOneCluster, Case::CFA, Strategy::SA, 6001);
  std::vector<std::vector<double>> alloc(1, std::vector<double>(m.pns.size(), 0.0));
  std::size_t nf = 0;
  for (std::size_t k = 0; k < m.pns.size(); ++k) {
    if (m.topology->device(m.pns[k]).kind == DeviceKind::OnuFogProcessor) nf = k;
  }
  alloc[0][nf] = 6001.0;
  const Solution sol = make_solution(m, alloc, SolveStatus::Optimal);
  const ResidualReport r = verify(sol, m);
  CHECK(r.max_violation.at("C33") == doctest::Approx(1.0));
  CHECK(std::isnan(r.objective_delta));
}

TEST_CASE("LP and MPS round trip") {
  for (Strategy s : {Strategy::SA, Strategy::DA}) {
    const MilpModel m = scenario_model(Architecture::MultiZone, Pattern::OneTaskEachCluster, Case::CFVA_L, s, 2000, 0.02);
    const ParsedModel direct = to_parsed(m);
    check_same(read_lp(export_model(m, ModelFormat::Lp)), direct, 1e-12);
    check_same(read_mps(export_model(m, ModelFormat::Mps)), direct, 1e-9);
  }
}

TEST_CASE("export is deterministic and uses stable names") {
  const MilpModel a = scenario_model(Architecture::OneZone, Pattern::OneTaskOneCluster, Case::CFA, Strategy::SA, 1000);
  const MilpModel b = scenario_model(Architecture::OneZone, Pattern::OneTaskOneCluster, Case::CFA, Strategy::SA, 1000);
  const std::string lp = export_model(a, ModelFormat::Lp);
  CHECK(lp == export_model(b, ModelFormat::Lp));
  CHECK(export_model(a, ModelFormat::Mps) == export_model(b, ModelFormat::Mps));
  CHECK(lp.find("X_s1_d") != std::string::npos);
  // Mangled MPS names fit in eight characters.
  const std::string mps = export_model(a, ModelFormat::Mps);
  CHECK(mps.find("V0000001") != std::string::npos);
}

TEST_CASE("empty task list") {
  const Topology t = build_one_zone(1, 0, 1);
  const MilpModel m = build_model(t, {}, availability_for(t, Case::CFA));
  CHECK(m.objective_constant == 0.0);
  const Solution s = solve(m);
  CHECK(s.status == SolveStatus::Optimal);
  CHECK(s.objective == 0.0);
  CHECK(read_lp(export_model(m, ModelFormat::Lp)).rows.size() == to_parsed(m).rows.size());
}

TEST_CASE("builder input errors") {
  const Topology t = build_one_zone(1, 0, 1);
  AvailabilityMask none;
  none.enabled.assign(t.devices().size(), 0);
  CHECK_THROWS_AS(build_model(t, {}, none), ConfigError);
  AvailabilityMask bad = none;
  bad.enabled[t.access_point(1).index()] = 1;
  CHECK_THROWS_AS(build_model(t, {}, bad), ConfigError);
  Task far;
  far.source_cluster = 3;
  far.omega = 100;
  CHECK_THROWS_AS(build_model(t, {far}, availability_for(t, Case::CFA)), UnknownNode);
}
