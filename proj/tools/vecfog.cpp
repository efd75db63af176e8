// vecfog: solve fog/VEC placement scenarios and write CSV reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vecfog/config.hpp"
#include "vecfog/errors.hpp"
#include "vecfog/harness.hpp"
#include "vecfog/milp_model.hpp"

namespace {

using namespace vecfog;

constexpr int kExitFailure = 1;  // infeasible under --strict, failed verification or invariants
constexpr int kExitError = 2;    // bad input, I/O

struct Common {
  std::string config;
  std::string arch, pattern, availability, strategy;
  std::vector<double> demands;
  double drr = -1.0;
  int rr_hops = -1;
  int cc_servers = -1;
  unsigned seed = 0;  // reserved; every stage is deterministic
  std::string out;
  std::string backend = "serial";
  double time_limit = 60.0;
  bool strict = false;
  bool timing = false;
};

void add_common(CLI::App* app, Common& c, bool many_demands) {
  app->add_option("--config", c.config, "JSON config (topology, profiles, scenario)");
  app->add_option("--arch", c.arch, "one-zone | multi-zone");
  app->add_option("--pattern", c.pattern,
                  "one-task-one-cluster | one-task-each-cluster | five-tasks-one-cluster | "
                  "five-tasks-each-cluster");
  app->add_option("--case", c.availability, "CCA | CFA | CFVA-L | CFVA-H");
  app->add_option("--strategy", c.strategy, "SA | DA");
  if (many_demands) {
    app->add_option("--demand", c.demands, "MIPS per task (repeatable); 'high'/'low' presets via --sweep");
  } else {
    app->add_option("--demand", c.demands, "MIPS per task")->expected(1);
  }
  app->add_option("--drr", c.drr, "data rate ratio, Mb/s per MIPS");
  app->add_option("--rr-hops", c.rr_hops, "core router hops to the cloud");
  app->add_option("--cc-servers", c.cc_servers, "central cloud servers");
  app->add_option("--seed", c.seed, "reserved, no effect");
  app->add_option("--out", c.out, "output file");
  app->add_option("--backend", c.backend, "pivot kernel: serial | omp")
      ->check(CLI::IsMember({"serial", "omp"}));
  app->add_option("--time-limit", c.time_limit, "seconds per solve");
  app->add_flag("--strict", c.strict, "exit nonzero if any point is infeasible");
  app->add_flag("--timing", c.timing, "record solve times (output no longer reproducible)");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  if (!c.arch.empty()) cfg.scenario.architecture = parse_architecture(c.arch);
  if (!c.pattern.empty()) cfg.scenario.pattern = parse_pattern(c.pattern);
  if (!c.availability.empty()) cfg.scenario.availability = parse_case(c.availability);
  if (!c.strategy.empty()) cfg.scenario.strategy = parse_strategy(c.strategy);
  if (!c.demands.empty()) cfg.scenario.demands = c.demands;
  if (c.drr >= 0.0) cfg.scenario.drr = c.drr;
  if (c.rr_hops >= 0) cfg.rr_hops = c.rr_hops;
  if (c.cc_servers >= 0) cfg.cc_servers = c.cc_servers;
  return cfg;
}

HarnessOptions harness_options(const Common& c) {
  HarnessOptions o;
  o.solve.backend = c.backend == "omp" ? KernelBackend::OpenMP : KernelBackend::Serial;
  o.solve.time_limit = c.time_limit;
  o.record_time = c.timing;
  return o;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write '" + path + "'");
}

int any_infeasible(const std::vector<RunRecord>& records) {
  for (const auto& r : records) {
    if (!r.feasible()) return 1;
  }
  return 0;
}

int cmd_run(const Common& c, const std::string& solution_path) {
  RunConfig cfg = resolve(c);
  if (cfg.scenario.demands.size() != 1) throw ConfigError("run needs exactly one --demand");
  Solution sol;
  const RunRecord r = run_point(cfg, cfg.scenario.availability, cfg.scenario.strategy,
                                cfg.scenario.demands.front(), harness_options(c), &sol);
  emit(c.out, to_csv({r}));
  if (r.feasible()) {
    std::fprintf(stderr,
                 "%s: %.3f W (cc %.3f, mf %.3f, lf %.3f, nf %.3f, vn %.3f, net %.3f), %lld nodes\n",
                 std::string(status_name(r.status)).c_str(), r.power.total, r.power.tpc_cc,
                 r.power.tpc_mf, r.power.tpc_lf, r.power.tpc_nf, r.power.tpc_vn, r.power.tpc_net,
                 static_cast<long long>(r.nodes));
    if (!solution_path.empty()) {
      SolutionFile f;
      f.architecture = cfg.scenario.architecture;
      f.pattern = cfg.scenario.pattern;
      f.availability = cfg.scenario.availability;
      f.strategy = cfg.scenario.strategy;
      f.demand = cfg.scenario.demands.front();
      f.drr = cfg.scenario.drr;
      f.cc_servers = cfg.cc_servers;
      f.rr_hops = cfg.rr_hops;
      f.objective = sol.objective;
      f.allocation = sol.allocation;
      write_solution(solution_path, f);
    }
  } else {
    std::fprintf(stderr, "infeasible\n");
  }
  return c.strict ? any_infeasible({r}) : 0;
}

int cmd_sweep(const Common& c, const std::string& grid, const std::string& preset,
              bool print_summary) {
  RunConfig cfg = resolve(c);
  if (preset == "high") cfg.scenario.demands = high_demand_sweep();
  if (preset == "low") cfg.scenario.demands = low_demand_sweep();
  if (cfg.scenario.demands.empty()) throw ConfigError("sweep needs demands (--demand, --sweep or config)");
  const HarnessOptions opt = harness_options(c);
  std::vector<RunRecord> records;
  if (grid == "matrix") {
    records = run_case_matrix(cfg, opt);
  } else if (grid == "drr") {
    records = run_drr_study(cfg, opt);
  } else {
    records = run_sweep(cfg, opt);
  }
  emit(c.out, to_csv(records));
  if (print_summary) std::cerr << summary(records);
  int rc = 0;
  for (const std::string& v : check_invariants(records)) {
    std::cerr << "invariant violated: " << v << '\n';
    rc = kExitFailure;
  }
  if (c.strict && any_infeasible(records)) rc = kExitFailure;
  return rc;
}

int cmd_export(const Common& c, const std::string& format) {
  RunConfig cfg = resolve(c);
  if (cfg.scenario.demands.size() != 1) throw ConfigError("export-lp needs exactly one --demand");
  const Instance inst = make_scenario(cfg.scenario, cfg.scenario.demands.front(),
                                      cfg.topology_for(cfg.scenario.availability), cfg.profiles);
  const MilpModel model = build_model(inst.topology, inst.tasks, inst.mask);
  emit(c.out, export_model(model, format == "mps" ? ModelFormat::Mps : ModelFormat::Lp));
  return 0;
}

int cmd_verify(const Common& c, const std::string& solution_path) {
  const RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  const SolutionFile f = read_solution(solution_path);
  const VerifyOutcome v = verify_solution(f, cfg);
  for (const auto& [label, viol] : v.residuals.max_violation) {
    std::printf("%-8s %.3e\n", label.c_str(), viol);
  }
  std::printf("integrality %.3e\nobjective %.6f W, recomputed %.6f W\n%s\n",
              v.residuals.integrality, f.objective, v.recomputed, v.ok ? "OK" : "FAILED");
  return v.ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-optimal task placement over cloud, fog and vehicular edge nodes"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts, export_opts, verify_opts;
  std::string solution_out, grid = "single", preset, format = "lp", solution_in;
  bool print_summary = false;

  auto* run = app.add_subcommand("run", "solve a single point and print its CSV row");
  add_common(run, run_opts, false);
  run->add_option("--solution", solution_out, "also write the allocation as JSON");

  auto* sweep = app.add_subcommand("sweep", "solve a grid of points");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--grid", grid, "single: scenario case only; matrix: six case/strategy combos; "
                                    "drr: SA and DA over every DRR")
      ->check(CLI::IsMember({"single", "matrix", "drr"}));
  sweep->add_option("--sweep", preset, "demand preset: high (1000..10000) | low (100..1000)")
      ->check(CLI::IsMember({"high", "low"}));
  sweep->add_flag("--summary", print_summary, "print savings and per-VEC tables to stderr");

  auto* exp = app.add_subcommand("export-lp", "write the MILP for one point");
  add_common(exp, export_opts, false);
  exp->add_option("--format", format, "lp | mps")->check(CLI::IsMember({"lp", "mps"}));

  auto* ver = app.add_subcommand("verify", "re-check a solution file against its model");
  ver->add_option("--config", verify_opts.config, "JSON config with profile overrides");
  ver->add_option("solution", solution_in, "solution JSON written by run --solution")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts, solution_out);
    if (*sweep) return cmd_sweep(sweep_opts, grid, preset, print_summary);
    if (*exp) return cmd_export(export_opts, format);
    if (*ver) return cmd_verify(verify_opts, solution_in);
  } catch (const vecfog::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
