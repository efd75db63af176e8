#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vecfog/errors.hpp"
#include "vecfog/harness.hpp"

using namespace vecfog;
namespace fs = std::filesystem;

namespace {

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

RunRecord fake(Case c, Strategy s, double demand, double total) {
  RunRecord r;
  r.availability = c;
  r.strategy = s;
  r.demand = demand;
  r.drr = 0.001;
  r.status = SolveStatus::Optimal;
  r.power.total = total;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vecfog_test_harness";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("one record makes a two-line CSV") {
  RunConfig cfg;
  const RunRecord r = run_point(cfg, Case::CFA, Strategy::SA, 1000);
  const std::string csv = to_csv({r});
  CHECK(lines(csv) == 2);
  CHECK(csv.find('\r') == std::string::npos);
  const auto header = split(csv.substr(0, csv.find('\n')), ',');
  CHECK(header.size() == 24);
  CHECK(header.front() == "architecture");
  CHECK(header[6] == "total_w");
  const auto row = split(csv.substr(csv.find('\n') + 1, csv.size() - csv.find('\n') - 2), ',');
  CHECK(row.size() == header.size());
  CHECK(row[2] == "CFA");
  CHECK(row.back() == "NA");  // timing off by default
  CHECK(std::stod(row[6]) == doctest::Approx(r.power.total).epsilon(1e-6));
}

TEST_CASE("full case matrix and DRR study sizes") {
  RunConfig cfg;
  cfg.scenario.demands = high_demand_sweep();
  const auto matrix = run_case_matrix(cfg);
  CHECK(matrix.size() == 60);
  CHECK(lines(to_csv(matrix)) == 61);
  CHECK(check_invariants(matrix).empty());

  cfg.scenario.availability = Case::CFVA_L;
  const auto drr = run_drr_study(cfg);
  CHECK(drr.size() == 160);
  CHECK(lines(to_csv(drr)) == 161);
  CHECK(check_invariants(drr).empty());
}

TEST_CASE("savings arithmetic") {
  const RunRecord base = fake(Case::CFA, Strategy::SA, 1000, 100.0);
  CHECK(savings(base, base) == 0.0);
  CHECK(savings(base, fake(Case::CFVA_L, Strategy::SA, 1000, 30.0)) == doctest::Approx(70.0));
  CHECK_THROWS_AS(savings(base, fake(Case::CFVA_L, Strategy::SA, 2000, 30.0)), MismatchedRecords);
  RunRecord other = fake(Case::CFVA_L, Strategy::SA, 1000, 30.0);
  other.pattern = Pattern::FiveTasksOneCluster;
  CHECK_THROWS_AS(savings(base, other), MismatchedRecords);
  other = fake(Case::CFVA_L, Strategy::SA, 1000, 30.0);
  other.drr = 0.02;
  CHECK_THROWS_AS(savings(base, other), MismatchedRecords);
  other.drr = 0.001;
  other.status = SolveStatus::Infeasible;
  CHECK_THROWS_AS(savings(base, other), MismatchedRecords);
  CHECK_THROWS_AS(savings(fake(Case::CFA, Strategy::SA, 1000, 0.0), base), MismatchedRecords);
}

TEST_CASE("invariant checks catch planted violations") {
  std::vector<RunRecord> ok = {fake(Case::CCA, Strategy::SA, 1000, 200), fake(Case::CFA, Strategy::SA, 1000, 100),
                               fake(Case::CFVA_L, Strategy::SA, 1000, 40), fake(Case::CFVA_L, Strategy::DA, 1000, 40),
                               fake(Case::CFA, Strategy::SA, 2000, 110)};
  CHECK(check_invariants(ok).empty());

  auto cfa_above_cca = ok;
  cfa_above_cca[1].power.total = 250;
  CHECK(!check_invariants(cfa_above_cca).empty());

  auto da_above_sa = ok;
  da_above_sa[3].power.total = 41;
  CHECK(check_invariants(da_above_sa).size() == 1);

  auto falling = ok;
  falling[4].power.total = 90;
  CHECK(check_invariants(falling).size() == 1);

  auto lost = ok;
  lost[3].status = SolveStatus::Infeasible;
  CHECK(!check_invariants(lost).empty());

  // Within the relative tolerance is fine.
  auto close = ok;
  close[3].power.total = 40 * (1 + 1e-8);
  CHECK(check_invariants(close).empty());
}

TEST_CASE("CSV is byte-identical across runs and thread counts") {
  RunConfig cfg;
  cfg.scenario.pattern = Pattern::OneTaskEachCluster;
  cfg.scenario.demands = low_demand_sweep();
  HarnessOptions serial;
  serial.parallel = false;
  const std::string a = to_csv(run_case_matrix(cfg));
  const std::string b = to_csv(run_case_matrix(cfg));
  const std::string c = to_csv(run_case_matrix(cfg, serial));
  CHECK(a == b);
  CHECK(a == c);

  const fs::path p = scratch("matrix.csv");
  write_csv(p.string(), run_case_matrix(cfg));
  CHECK(slurp(p) == a);
}

TEST_CASE("infeasible points are reported, not fatal") {
  RunConfig cfg;
  cfg.scenario.pattern = Pattern::FiveTasksEachCluster;
  cfg.cc_servers = 1;
  // 20 tasks of 10000 MIPS against one cloud server of 144000.
  const RunRecord r = run_point(cfg, Case::CCA, Strategy::SA, 10000);
  CHECK(!r.feasible());
  CHECK(std::isnan(r.power.total));
  const std::string csv = to_csv({r});
  CHECK(csv.find(",NA,") != std::string::npos);
  CHECK(csv.find(",infeasible,") != std::string::npos);
}

TEST_CASE("summary lists case pairs and per-VEC rows") {
  RunConfig cfg;
  cfg.scenario.demands = {1000, 2000};
  const std::string s = summary(run_case_matrix(cfg));
  CHECK(s.find("CFVA-L-SA vs CFA-SA") != std::string::npos);
  CHECK(s.find("CFA-SA vs CCA-SA") != std::string::npos);
  CHECK(s.find("per-VEC allocation") != std::string::npos);
  CHECK(s.find("CFVA-L-SA demand=1000.000000") != std::string::npos);
}

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_config(R"({
    "architecture": "multi-zone", "cc_servers": 2, "rr_hops": 3,
    "profiles": {"NF": {"capacity": 8000, "p_max": 16}},
    "scenario": {"pattern": "one-task-each-cluster", "case": "CFVA-L", "strategy": "DA",
                 "demands": [100, 200], "drr": 0.04}})");
  CHECK(cfg.scenario.architecture == Architecture::MultiZone);
  CHECK(cfg.scenario.availability == Case::CFVA_L);
  CHECK(cfg.scenario.strategy == Strategy::DA);
  CHECK(cfg.scenario.demands == std::vector<double>{100, 200});
  CHECK(cfg.scenario.drr == 0.04);
  CHECK(cfg.profiles[DeviceKind::OnuFogProcessor].capacity == 8000);
  CHECK(cfg.profiles[DeviceKind::OnuFogProcessor].p_idle == 9);
  const TopologyParams p = cfg.topology_for(Case::CFVA_L);
  CHECK(p.zones == 4);
  CHECK(p.cc_servers == 2);
  CHECK(p.rr_hops == 3);
  CHECK(p.vns_per_cluster == 2);

  const RunConfig sized = parse_config(R"({"vns_per_cluster": 3, "zones": 2})");
  CHECK(sized.topology_for(Case::CFVA_H).vns_per_cluster == 3);
  CHECK(sized.topology_for(Case::CFA).vns_per_cluster == 0);
  CHECK(sized.topology_for(Case::CFA).zones == 2);

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": {"cases": "CFA"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"profiles": {"XX": {}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"profiles": {"NF": {"watts": 3}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"profiles": {"NF": {"p_idle": 20}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"cc_servers": "five"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": {"case": "CXA"}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/vecfog.json"), IoError);
}

TEST_CASE("config overrides change results") {
  RunConfig cfg = parse_config(R"({"profiles": {"NF": {"p_idle": 12}}})");
  RunConfig base;
  const double a = run_point(base, Case::CFA, Strategy::SA, 1000).power.total;
  const double b = run_point(cfg, Case::CFA, Strategy::SA, 1000).power.total;
  CHECK(b > a);
}

TEST_CASE("solution files round trip and catch tampering") {
  RunConfig cfg;
  cfg.scenario.pattern = Pattern::FiveTasksOneCluster;
  Solution sol;
  const RunRecord r = run_point(cfg, Case::CFVA_L, Strategy::DA, 3000, {}, &sol);
  REQUIRE(r.feasible());
  SolutionFile f;
  f.pattern = cfg.scenario.pattern;
  f.availability = Case::CFVA_L;
  f.strategy = Strategy::DA;
  f.demand = 3000;
  f.drr = cfg.scenario.drr;
  f.objective = sol.objective;
  f.allocation = sol.allocation;
  const fs::path p = scratch("solution.json");
  write_solution(p.string(), f);
  const SolutionFile back = read_solution(p.string());
  CHECK(back.allocation == f.allocation);
  CHECK(back.objective == f.objective);
  CHECK(back.availability == Case::CFVA_L);

  const VerifyOutcome good = verify_solution(back, RunConfig{});
  CHECK(good.ok);
  CHECK(good.recomputed == doctest::Approx(r.power.total).epsilon(1e-9));

  SolutionFile wrong_objective = back;
  wrong_objective.objective += 1.0;
  CHECK(!verify_solution(wrong_objective, RunConfig{}).ok);

  // Move 1 MIPS off one node: demand is no longer met.
  SolutionFile short_task = back;
  for (auto& row : short_task.allocation) {
    auto it = std::max_element(row.begin(), row.end());
    *it -= 1.0;
    break;
  }
  const VerifyOutcome bad = verify_solution(short_task, RunConfig{});
  CHECK(!bad.ok);
  CHECK(bad.residuals.max_violation.at("C24") == doctest::Approx(1.0));

  SolutionFile wrong_shape = back;
  wrong_shape.allocation.pop_back();
  CHECK_THROWS_AS(verify_solution(wrong_shape, RunConfig{}), InconsistentAssignment);

  std::ofstream(scratch("broken.json")) << "{\"architecture\": \"one-zone\"}";
  CHECK_THROWS_AS(read_solution(scratch("broken.json").string()), ParseError);
  CHECK_THROWS_AS(read_solution("/nonexistent/solution.json"), IoError);
}

TEST_CASE("unwritable output is an I/O error") {
  CHECK_THROWS_AS(write_csv("/nonexistent/dir/out.csv", {}), IoError);
  CHECK_THROWS_AS(write_solution("/nonexistent/dir/s.json", SolutionFile{}), IoError);
}
