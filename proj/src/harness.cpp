#include "vecfog/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "vecfog/errors.hpp"

namespace vecfog {
namespace {

constexpr double kResidualTol = 1e-6;

std::string fmt(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid "-0.000000" so equal runs print equal bytes.
  if (std::string(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += fmt(v[i]);
  }
  return out;
}

Scenario scenario_for(const RunConfig& cfg, Case c, Strategy s) {
  Scenario sc = cfg.scenario;
  sc.availability = c;
  sc.strategy = s;
  return sc;
}

struct Point {
  Case availability;
  Strategy strategy;
  double demand;
  double drr;
};

// Points run in any order; results land in their own slot.
std::vector<RunRecord> run_points(const RunConfig& cfg, const std::vector<Point>& points,
                                  const HarnessOptions& opt) {
  std::vector<RunRecord> out(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    const Point& p = points[static_cast<std::size_t>(i)];
    try {
      RunConfig local = cfg;
      local.scenario.drr = p.drr;
      out[static_cast<std::size_t>(i)] = run_point(local, p.availability, p.strategy, p.demand, opt);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string record_key(const RunRecord& r) {
  return std::string(architecture_name(r.architecture)) + "/" + std::string(pattern_name(r.pattern)) +
         "/" + std::string(case_name(r.availability)) + "/" + std::string(strategy_name(r.strategy)) +
         " demand=" + fmt(r.demand) + " drr=" + fmt(r.drr);
}

int case_rank(Case c) {
  switch (c) {
    case Case::CCA:
      return 0;
    case Case::CFA:
      return 1;
    case Case::CFVA_L:
      return 2;
    case Case::CFVA_H:
      return 3;
  }
  return 0;
}

bool same_point(const RunRecord& a, const RunRecord& b) {
  return a.architecture == b.architecture && a.pattern == b.pattern && a.demand == b.demand &&
         a.drr == b.drr;
}

}  // namespace

RunRecord run_point(const RunConfig& cfg, Case c, Strategy s, double demand,
                    const HarnessOptions& opt, Solution* solution_out) {
  const Scenario sc = scenario_for(cfg, c, s);
  const Instance inst = make_scenario(sc, demand, cfg.topology_for(c), cfg.profiles);
  const MilpModel model = build_model(inst.topology, inst.tasks, inst.mask);

  const auto start = std::chrono::steady_clock::now();
  Solution sol = solve(model, opt.solve);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunRecord r;
  r.architecture = sc.architecture;
  r.pattern = sc.pattern;
  r.availability = c;
  r.strategy = s;
  r.demand = demand;
  r.drr = sc.drr;
  r.status = sol.status;
  r.nodes = sol.nodes;
  r.solve_time = opt.record_time ? elapsed : -1.0;
  r.per_pn_mips.assign(model.pns.size(), 0.0);
  r.per_vec_mips.assign(static_cast<std::size_t>(inst.topology.cluster_count()), 0.0);

  if (sol.status != SolveStatus::Infeasible) {
    const ResidualReport rep = verify(sol, model);
    if (rep.max_residual() > kResidualTol || !(rep.objective_delta <= kResidualTol)) {
      throw Error("verification failed for " + record_key(r) + ": residual " +
                  fmt(rep.max_residual()) + ", objective delta " + fmt(rep.objective_delta));
    }
    r.power = sol.breakdown;
    r.gap = sol.gap;
    r.per_vec_mips = sol.per_vec_mips;
    for (std::size_t k = 0; k < model.pns.size(); ++k) {
      const double load = sol.pn_load(k);
      r.per_pn_mips[k] = load;
      switch (inst.topology.device(model.pns[k]).kind) {
        case DeviceKind::CloudServer:
          r.alloc_cc += load;
          break;
        case DeviceKind::MetroFogServer:
          r.alloc_mf += load;
          break;
        case DeviceKind::OltFogServer:
          r.alloc_lf += load;
          break;
        case DeviceKind::OnuFogProcessor:
          r.alloc_nf += load;
          break;
        case DeviceKind::VnProcessor:
          r.alloc_vn += load;
          break;
        default:
          break;
      }
    }
  } else {
    r.power.total = std::numeric_limits<double>::quiet_NaN();
    r.gap = std::numeric_limits<double>::quiet_NaN();
  }
  if (solution_out) *solution_out = std::move(sol);
  return r;
}

std::vector<RunRecord> run_sweep(const RunConfig& cfg, const HarnessOptions& opt) {
  std::vector<Point> points;
  for (double d : cfg.scenario.demands) {
    points.push_back({cfg.scenario.availability, cfg.scenario.strategy, d, cfg.scenario.drr});
  }
  return run_points(cfg, points, opt);
}

std::vector<RunRecord> run_case_matrix(const RunConfig& cfg, const HarnessOptions& opt) {
  const std::vector<std::pair<Case, Strategy>> combos = {
      {Case::CCA, Strategy::SA},    {Case::CFA, Strategy::SA},    {Case::CFVA_L, Strategy::SA},
      {Case::CFVA_L, Strategy::DA}, {Case::CFVA_H, Strategy::SA}, {Case::CFVA_H, Strategy::DA}};
  std::vector<Point> points;
  for (const auto& [c, s] : combos) {
    for (double d : cfg.scenario.demands) points.push_back({c, s, d, cfg.scenario.drr});
  }
  return run_points(cfg, points, opt);
}

std::vector<RunRecord> run_drr_study(const RunConfig& cfg, const HarnessOptions& opt) {
  std::vector<Point> points;
  for (double drr : drr_set()) {
    for (Strategy s : {Strategy::SA, Strategy::DA}) {
      for (double d : cfg.scenario.demands) points.push_back({cfg.scenario.availability, s, d, drr});
    }
  }
  return run_points(cfg, points, opt);
}

double savings(const RunRecord& baseline, const RunRecord& candidate) {
  if (!same_point(baseline, candidate)) {
    throw MismatchedRecords("cannot compare " + record_key(baseline) + " with " +
                            record_key(candidate));
  }
  if (!baseline.feasible() || !candidate.feasible()) {
    throw MismatchedRecords("savings need two feasible records");
  }
  if (!(baseline.power.total > 0.0)) throw MismatchedRecords("baseline consumes no power");
  return 100.0 * (baseline.power.total - candidate.power.total) / baseline.power.total;
}

std::string csv_header() {
  return "architecture,pattern,case,strategy,demand_mips,drr,total_w,tpc_cc_w,tpc_mf_w,tpc_lf_w,"
         "tpc_nf_w,tpc_vn_w,tpc_net_w,alloc_cc_mips,alloc_mf_mips,alloc_lf_mips,alloc_nf_mips,"
         "alloc_vn_mips,per_pn_mips,per_vec_mips,status,gap,nodes,solve_time_s";
}

std::string to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << csv_header() << '\n';
  for (const RunRecord& r : records) {
    const bool ok = r.feasible();
    auto w = [&](double v) { return ok ? fmt(v) : std::string("NA"); };
    out << architecture_name(r.architecture) << ',' << pattern_name(r.pattern) << ','
        << case_name(r.availability) << ',' << strategy_name(r.strategy) << ',' << fmt(r.demand)
        << ',' << fmt(r.drr) << ',' << w(r.power.total) << ',' << w(r.power.tpc_cc) << ','
        << w(r.power.tpc_mf) << ',' << w(r.power.tpc_lf) << ',' << w(r.power.tpc_nf) << ','
        << w(r.power.tpc_vn) << ',' << w(r.power.tpc_net) << ',' << w(r.alloc_cc) << ','
        << w(r.alloc_mf) << ',' << w(r.alloc_lf) << ',' << w(r.alloc_nf) << ',' << w(r.alloc_vn)
        << ',' << join(r.per_pn_mips) << ',' << join(r.per_vec_mips) << ','
        << status_name(r.status) << ',' << w(r.gap) << ',' << r.nodes << ','
        << (r.solve_time < 0.0 ? std::string("NA") : fmt(r.solve_time)) << '\n';
  }
  return out.str();
}

void write_csv(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << to_csv(records);
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string summary(const std::vector<RunRecord>& records) {
  using Combo = std::pair<Case, Strategy>;
  const std::vector<std::pair<Combo, Combo>> pairs = {
      {{Case::CCA, Strategy::SA}, {Case::CFA, Strategy::SA}},
      {{Case::CFA, Strategy::SA}, {Case::CFVA_L, Strategy::SA}},
      {{Case::CFA, Strategy::SA}, {Case::CFVA_H, Strategy::SA}},
      {{Case::CFVA_L, Strategy::SA}, {Case::CFVA_H, Strategy::SA}},
      {{Case::CFVA_L, Strategy::SA}, {Case::CFVA_L, Strategy::DA}},
      {{Case::CFVA_H, Strategy::SA}, {Case::CFVA_H, Strategy::DA}},
      {{Case::CFA, Strategy::SA}, {Case::CFA, Strategy::DA}},
  };
  std::ostringstream out;
  out << "savings (candidate vs baseline, over points where both are feasible)\n";
  for (const auto& [base, cand] : pairs) {
    // Savings grouped by DRR so a DRR study reports one line per ratio.
    std::map<double, std::vector<double>> by_drr;
    for (const RunRecord& b : records) {
      if (b.availability != base.first || b.strategy != base.second || !b.feasible()) continue;
      for (const RunRecord& c : records) {
        if (c.availability != cand.first || c.strategy != cand.second || !c.feasible()) continue;
        if (same_point(b, c)) by_drr[b.drr].push_back(savings(b, c));
      }
    }
    for (const auto& [drr, v] : by_drr) {
      double lo = v.front(), hi = v.front(), sum = 0.0;
      for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        sum += x;
      }
      char line[256];
      std::snprintf(line, sizeof line, "  %s-%s vs %s-%s drr=%g: n=%zu min=%.2f%% mean=%.2f%% max=%.2f%%\n",
                    std::string(case_name(cand.first)).c_str(),
                    std::string(strategy_name(cand.second)).c_str(),
                    std::string(case_name(base.first)).c_str(),
                    std::string(strategy_name(base.second)).c_str(), drr, v.size(), lo,
                    sum / static_cast<double>(v.size()), hi);
      out << line;
    }
  }
  out << "per-VEC allocation (MIPS by cluster)\n";
  for (const RunRecord& r : records) {
    if (!r.feasible() || r.alloc_vn <= 0.0) continue;
    out << "  " << case_name(r.availability) << '-' << strategy_name(r.strategy)
        << " demand=" << fmt(r.demand) << " drr=" << fmt(r.drr) << ": " << join(r.per_vec_mips)
        << '\n';
  }
  return out.str();
}

std::vector<std::string> check_invariants(const std::vector<RunRecord>& records, double tol) {
  std::vector<std::string> bad;
  auto above = [tol](double a, double b) { return a > b + tol * std::max(1.0, std::fabs(b)); };

  // More nodes available and more freedom to split can only help.
  for (const RunRecord& a : records) {
    for (const RunRecord& b : records) {
      if (&a == &b || !same_point(a, b)) continue;
      const bool a_relaxes_b = case_rank(a.availability) >= case_rank(b.availability) &&
                               (a.strategy == Strategy::DA || b.strategy == Strategy::SA);
      if (!a_relaxes_b || !b.feasible()) continue;
      if (!a.feasible()) {
        bad.push_back(record_key(a) + " infeasible although " + record_key(b) + " is feasible");
      } else if (above(a.power.total, b.power.total)) {
        bad.push_back(record_key(a) + " uses " + fmt(a.power.total) + " W, more than " +
                      record_key(b) + " at " + fmt(b.power.total) + " W");
      }
    }
  }

  // Totals never drop as demand grows.
  using Series = std::tuple<Architecture, Pattern, Case, Strategy, double>;
  std::map<Series, std::vector<const RunRecord*>> series;
  for (const RunRecord& r : records) {
    series[{r.architecture, r.pattern, r.availability, r.strategy, r.drr}].push_back(&r);
  }
  for (auto& [key, list] : series) {
    std::stable_sort(list.begin(), list.end(),
                     [](const RunRecord* x, const RunRecord* y) { return x->demand < y->demand; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      const RunRecord& lo = *list[i - 1];
      const RunRecord& hi = *list[i];
      if (!lo.feasible()) {
        if (hi.feasible()) bad.push_back(record_key(hi) + " feasible after an infeasible lower demand");
        continue;
      }
      if (hi.feasible() && above(lo.power.total, hi.power.total)) {
        bad.push_back(record_key(hi) + " uses less power than " + record_key(lo));
      }
    }
  }
  return bad;
}

void write_solution(const std::string& path, const SolutionFile& f) {
  nlohmann::json doc = {
      {"architecture", architecture_name(f.architecture)},
      {"pattern", pattern_name(f.pattern)},
      {"case", case_name(f.availability)},
      {"strategy", strategy_name(f.strategy)},
      {"demand", f.demand},
      {"drr", f.drr},
      {"cc_servers", f.cc_servers},
      {"rr_hops", f.rr_hops},
      {"objective", f.objective},
      {"allocation", f.allocation},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

SolutionFile read_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open solution file '" + path + "'");
  SolutionFile f;
  try {
    const auto doc = nlohmann::json::parse(in);
    f.architecture = parse_architecture(doc.at("architecture").get<std::string>());
    f.pattern = parse_pattern(doc.at("pattern").get<std::string>());
    f.availability = parse_case(doc.at("case").get<std::string>());
    f.strategy = parse_strategy(doc.at("strategy").get<std::string>());
    f.demand = doc.at("demand").get<double>();
    f.drr = doc.at("drr").get<double>();
    f.cc_servers = doc.value("cc_servers", 5);
    f.rr_hops = doc.value("rr_hops", 1);
    f.objective = doc.at("objective").get<double>();
    f.allocation = doc.at("allocation").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("solution file '" + path + "': " + e.what());
  }
  return f;
}

VerifyOutcome verify_solution(const SolutionFile& f, const RunConfig& config, double tol) {
  RunConfig cfg = config;
  cfg.scenario.architecture = f.architecture;
  cfg.scenario.pattern = f.pattern;
  cfg.scenario.drr = f.drr;
  cfg.cc_servers = f.cc_servers;
  cfg.rr_hops = f.rr_hops;
  const Scenario sc = scenario_for(cfg, f.availability, f.strategy);
  const Instance inst = make_scenario(sc, f.demand, cfg.topology_for(f.availability), cfg.profiles);
  const MilpModel model = build_model(inst.topology, inst.tasks, inst.mask);
  if (f.allocation.size() != model.tasks.size()) {
    throw InconsistentAssignment("solution has " + std::to_string(f.allocation.size()) +
                                 " tasks, scenario has " + std::to_string(model.tasks.size()));
  }
  for (const auto& row : f.allocation) {
    if (row.size() != model.pns.size()) {
      throw InconsistentAssignment("solution row does not match the processing node count");
    }
  }
  const Solution sol = make_solution(model, f.allocation, SolveStatus::Optimal);
  VerifyOutcome out;
  out.residuals = verify(sol, model);
  out.recomputed = sol.breakdown.total;
  const double stored_delta =
      std::fabs(f.objective - out.recomputed) / std::max(1.0, std::fabs(out.recomputed));
  out.ok = out.residuals.max_residual() <= tol && out.residuals.objective_delta <= tol &&
           stored_delta <= tol;
  return out;
}

}  // namespace vecfog
