#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vecfog/config.hpp"
#include "vecfog/solver.hpp"
#include "vecfog/workload.hpp"

namespace vecfog {

struct RunRecord {
  Architecture architecture = Architecture::OneZone;
  Pattern pattern = Pattern::OneTaskOneCluster;
  Case availability = Case::CFA;
  Strategy strategy = Strategy::SA;
  double demand = 0.0;  // MIPS per task
  double drr = 0.0;

  SolveStatus status = SolveStatus::Infeasible;
  PowerBreakdown power;  // NaN total when infeasible
  // MIPS placed on each tier, then per processing node in model order.
  double alloc_cc = 0.0, alloc_mf = 0.0, alloc_lf = 0.0, alloc_nf = 0.0, alloc_vn = 0.0;
  std::vector<double> per_pn_mips;
  std::vector<double> per_vec_mips;  // by cluster
  double gap = 0.0;
  std::int64_t nodes = 0;
  double solve_time = -1.0;  // negative means not recorded

  bool feasible() const { return status != SolveStatus::Infeasible; }
};

struct HarnessOptions {
  SolveOptions solve;
  bool record_time = false;  // off keeps CSV output byte-reproducible
  bool parallel = true;      // solve sweep points concurrently
};

// One point: build, solve, verify. Throws Error if the verifier finds a
// residual above 1e-6, which would mean a solver bug rather than bad input.
RunRecord run_point(const RunConfig& config, Case c, Strategy s, double demand,
                    const HarnessOptions& options = {}, Solution* solution = nullptr);

// Every demand in the config's scenario for its case and strategy.
std::vector<RunRecord> run_sweep(const RunConfig& config, const HarnessOptions& options = {});

// The six case/strategy combinations (CCA, CFA as SA; CFVA-L, CFVA-H as SA
// and DA) over the scenario's demands.
std::vector<RunRecord> run_case_matrix(const RunConfig& config, const HarnessOptions& options = {});

// The scenario's case under SA and DA for every DRR in drr_set().
std::vector<RunRecord> run_drr_study(const RunConfig& config, const HarnessOptions& options = {});

// 100 * (baseline - candidate) / baseline. Throws MismatchedRecords unless
// both are feasible and share architecture, pattern, demand and DRR.
double savings(const RunRecord& baseline, const RunRecord& candidate);

std::string csv_header();
std::string to_csv(const std::vector<RunRecord>& records);
void write_csv(const std::string& path, const std::vector<RunRecord>& records);

// Min/mean/max savings for each case pair present in the records, then the
// per-VEC allocation table.
std::string summary(const std::vector<RunRecord>& records);

// Cross-record ordering checks; one message per violation, empty if clean.
// Relative tolerance absorbs the solver's optimality gap.
std::vector<std::string> check_invariants(const std::vector<RunRecord>& records,
                                          double rel_tol = 1e-6);

// A solved point as JSON, enough to rebuild the model and re-check it.
struct SolutionFile {
  Architecture architecture = Architecture::OneZone;
  Pattern pattern = Pattern::OneTaskOneCluster;
  Case availability = Case::CFA;
  Strategy strategy = Strategy::SA;
  double demand = 0.0;
  double drr = 0.0;
  int cc_servers = 5;
  int rr_hops = 1;
  double objective = 0.0;
  std::vector<std::vector<double>> allocation;  // [task][pn]
};

void write_solution(const std::string& path, const SolutionFile& file);
SolutionFile read_solution(const std::string& path);

struct VerifyOutcome {
  ResidualReport residuals;
  double recomputed = 0.0;  // total_power of the stored allocation
  bool ok = false;
};

// Rebuilds the model from the file (profiles from config) and checks the
// stored allocation against every row, plus the stored objective.
VerifyOutcome verify_solution(const SolutionFile& file, const RunConfig& config,
                              double tol = 1e-6);

}  // namespace vecfog
