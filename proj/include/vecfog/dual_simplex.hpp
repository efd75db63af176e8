#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vecfog/kernels.hpp"
#include "vecfog/milp_model.hpp"

namespace vecfog {

// min c.x  s.t.  rows (<=, >=, =),  lower <= x <= upper.
// Every variable needs a finite bound on the side its cost pushes it to.
struct LpProblem {
  struct Row {
    std::vector<std::pair<int, double>> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
  };
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int add_column(double c, double lo, double hi);
  std::size_t columns() const { return cost.size(); }
};

enum class LpStatus { Optimal, Infeasible, IterationLimit };

// Bounded-variable dual simplex on a dense tableau that holds only the
// nonbasic columns (plus the reduced-cost row). Starts from the all-slack
// basis; bound changes keep the basis, so a copy of a solved instance is a
// warm start for a tightened child problem.
class DualSimplex {
 public:
  explicit DualSimplex(const LpProblem& problem, KernelBackend backend = KernelBackend::Serial);

  LpStatus solve(std::int64_t max_iterations = 200000);

  // Changes bounds of a structural column. Returns false when the current
  // basis can no longer be kept (caller must rebuild).
  bool set_bounds(int j, double lower, double upper);
  double lower(int j) const { return lo_[static_cast<std::size_t>(j)]; }
  double upper(int j) const { return hi_[static_cast<std::size_t>(j)]; }

  std::vector<double> primal() const;
  double objective() const;
  std::int64_t iterations() const { return iterations_; }
  std::size_t rows() const { return m_; }
  std::size_t columns() const { return n_; }
  std::size_t tableau_bytes() const { return tab_.size() * sizeof(double); }
  KernelBackend backend() const { return backend_; }

 private:
  enum class At : std::uint8_t { Lower, Upper };

  double value_of_nonbasic(std::size_t var) const;
  void refresh_primal();
  double* row(std::size_t i) { return tab_.data() + i * n_; }
  const double* row(std::size_t i) const { return tab_.data() + i * n_; }

  std::size_t n_ = 0;  // structural columns (= nonbasic count)
  std::size_t m_ = 0;  // rows (= basic count)
  KernelBackend backend_;
  std::vector<double> cost_;     // by variable (slacks cost 0)
  std::vector<double> lo_, hi_;  // by variable; slacks are n_ .. n_+m_-1
  std::vector<double> rhs_;
  std::vector<double> tab_;         // (m_+1) x n_, last row = reduced costs
  std::vector<std::size_t> basic_;  // variable in each row
  std::vector<std::size_t> nonbasic_;  // variable in each tableau column
  std::vector<At> at_;                 // by variable, meaningful when nonbasic
  std::vector<std::int64_t> pos_;      // by variable: row if basic, -(col+1) if nonbasic
  std::vector<double> xb_;
  std::int64_t iterations_ = 0;
};

}  // namespace vecfog
