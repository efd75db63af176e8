#include "vecfog/dual_simplex.hpp"

#include <cmath>
#include <limits>

#include "vecfog/errors.hpp"

namespace vecfog {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPrimalTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kDualTol = 1e-11;
constexpr double kRatioTieTol = 1e-12;

}  // namespace

int LpProblem::add_column(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return static_cast<int>(cost.size()) - 1;
}

DualSimplex::DualSimplex(const LpProblem& p, KernelBackend backend)
    : n_(p.columns()), m_(p.rows.size()), backend_(backend) {
  const std::size_t total = n_ + m_;
  cost_.assign(total, 0.0);
  lo_.assign(total, 0.0);
  hi_.assign(total, 0.0);
  rhs_.resize(m_);
  for (std::size_t j = 0; j < n_; ++j) {
    cost_[j] = p.cost[j];
    lo_[j] = p.lower[j];
    hi_[j] = p.upper[j];
    if (lo_[j] > hi_[j]) throw ConfigError("LP column with empty bound interval");
  }
  tab_.assign((m_ + 1) * n_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    const auto& r = p.rows[i];
    rhs_[i] = r.rhs;
    for (auto [j, a] : r.terms) row(i)[static_cast<std::size_t>(j)] += a;
    const std::size_t s = n_ + i;
    switch (r.sense) {
      case Sense::LessEqual:
        lo_[s] = 0.0;
        hi_[s] = kInf;
        break;
      case Sense::GreaterEqual:
        lo_[s] = -kInf;
        hi_[s] = 0.0;
        break;
      case Sense::Equal:
        break;
      case Sense::Identity:
        lo_[s] = -kInf;
        hi_[s] = kInf;
        break;
    }
  }
  for (std::size_t j = 0; j < n_; ++j) row(m_)[j] = cost_[j];

  basic_.resize(m_);
  nonbasic_.resize(n_);
  at_.assign(total, At::Lower);
  pos_.resize(total);
  for (std::size_t i = 0; i < m_; ++i) {
    basic_[i] = n_ + i;
    pos_[n_ + i] = static_cast<std::int64_t>(i);
  }
  for (std::size_t j = 0; j < n_; ++j) {
    nonbasic_[j] = j;
    pos_[j] = -static_cast<std::int64_t>(j) - 1;
    const bool lower_ok = std::isfinite(lo_[j]) && cost_[j] >= 0.0;
    const bool upper_ok = std::isfinite(hi_[j]) && cost_[j] <= 0.0;
    if (lower_ok) {
      at_[j] = At::Lower;
    } else if (upper_ok) {
      at_[j] = At::Upper;
    } else {
      throw ConfigError("LP column has no finite bound on its cost side");
    }
  }
  xb_.assign(m_, 0.0);
  refresh_primal();
}

double DualSimplex::value_of_nonbasic(std::size_t var) const {
  return at_[var] == At::Lower ? lo_[var] : hi_[var];
}

void DualSimplex::refresh_primal() {
  // Weight of each tableau column: the rhs it carries when it holds a slack
  // (its column is then a column of the basis inverse) minus its value.
  std::vector<double> w(n_);
  for (std::size_t q = 0; q < n_; ++q) {
    const std::size_t var = nonbasic_[q];
    const double b = var >= n_ ? rhs_[var - n_] : 0.0;
    w[q] = b - value_of_nonbasic(var);
  }
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t var = basic_[i];
    double acc = var >= n_ ? rhs_[var - n_] : 0.0;
    const double* t = row(i);
    for (std::size_t q = 0; q < n_; ++q) {
      if (w[q] != 0.0) acc += t[q] * w[q];
    }
    xb_[i] = acc;
  }
}

bool DualSimplex::set_bounds(int jj, double lower, double upper) {
  const auto j = static_cast<std::size_t>(jj);
  if (lower > upper) throw ConfigError("LP column with empty bound interval");
  if (pos_[j] >= 0) {
    lo_[j] = lower;
    hi_[j] = upper;
    return true;
  }
  const std::size_t q = static_cast<std::size_t>(-pos_[j] - 1);
  const double old = value_of_nonbasic(j);
  const double d = row(m_)[q];
  lo_[j] = lower;
  hi_[j] = upper;
  if (at_[j] == At::Lower && !std::isfinite(lower)) {
    if (!std::isfinite(upper) || d > kDualTol) return false;
    at_[j] = At::Upper;
  } else if (at_[j] == At::Upper && !std::isfinite(upper)) {
    if (!std::isfinite(lower) || d < -kDualTol) return false;
    at_[j] = At::Lower;
  }
  const double delta = value_of_nonbasic(j) - old;
  if (delta != 0.0) {
    for (std::size_t i = 0; i < m_; ++i) xb_[i] -= row(i)[q] * delta;
  }
  return true;
}

LpStatus DualSimplex::solve(std::int64_t max_iterations) {
  const std::int64_t bland_after = 50 * static_cast<std::int64_t>(m_ + n_) + 1000;
  std::int64_t local = 0;
  bool refreshed = false;
  double* costs = row(m_);
  while (true) {
    const bool bland = local > bland_after;
    std::size_t r = m_;
    double worst = 0.0;
    bool below = false;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t var = basic_[i];
      const double v = xb_[i];
      double viol = 0.0;
      bool b = false;
      if (v < lo_[var] - kPrimalTol * (1.0 + std::fabs(lo_[var]))) {
        viol = lo_[var] - v;
        b = true;
      } else if (v > hi_[var] + kPrimalTol * (1.0 + std::fabs(hi_[var]))) {
        viol = v - hi_[var];
      } else {
        continue;
      }
      const bool better = bland ? (r == m_ || var < basic_[r]) : viol > worst;
      if (better) {
        r = i;
        worst = viol;
        below = b;
      }
    }
    if (r == m_) {
      if (refreshed) return LpStatus::Optimal;
      refresh_primal();
      refreshed = true;
      continue;
    }
    refreshed = false;
    if (local >= max_iterations) return LpStatus::IterationLimit;

    const double* tr = row(r);
    std::size_t k = n_;
    double best_ratio = kInf;
    double best_alpha = 0.0;
    for (std::size_t q = 0; q < n_; ++q) {
      const double a = tr[q];
      if (std::fabs(a) <= kPivotTol) continue;
      const std::size_t var = nonbasic_[q];
      if (lo_[var] == hi_[var]) continue;
      const bool at_lower = at_[var] == At::Lower;
      // Moving x_q must push the leaving variable towards its violated bound.
      const bool eligible = below ? (at_lower ? a < 0.0 : a > 0.0) : (at_lower ? a > 0.0 : a < 0.0);
      if (!eligible) continue;
      const double d = at_lower ? std::max(costs[q], 0.0) : std::max(-costs[q], 0.0);
      const double ratio = d / std::fabs(a);
      bool take = false;
      if (k == n_ || ratio < best_ratio - kRatioTieTol) {
        take = true;
      } else if (ratio <= best_ratio + kRatioTieTol) {
        if (bland) {
          take = var < nonbasic_[k];
        } else {
          take = std::fabs(a) > std::fabs(best_alpha) ||
                 (std::fabs(a) == std::fabs(best_alpha) && var < nonbasic_[k]);
        }
      }
      if (take) {
        k = q;
        best_ratio = ratio;
        best_alpha = a;
      }
    }
    if (k == n_) return LpStatus::Infeasible;

    const std::size_t leaving = basic_[r];
    const std::size_t entering = nonbasic_[k];
    const double target = below ? lo_[leaving] : hi_[leaving];
    const double delta = (xb_[r] - target) / tr[k];
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) xb_[i] -= row(i)[k] * delta;
    }
    xb_[r] = value_of_nonbasic(entering) + delta;
    at_[leaving] = below ? At::Lower : At::Upper;

    pivot(backend_, tab_.data(), m_ + 1, n_, r, k);

    basic_[r] = entering;
    nonbasic_[k] = leaving;
    pos_[entering] = static_cast<std::int64_t>(r);
    pos_[leaving] = -static_cast<std::int64_t>(k) - 1;
    ++iterations_;
    ++local;
  }
}

std::vector<double> DualSimplex::primal() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    x[j] = pos_[j] >= 0 ? xb_[static_cast<std::size_t>(pos_[j])] : value_of_nonbasic(j);
  }
  return x;
}

double DualSimplex::objective() const {
  const auto x = primal();
  double z = 0.0;
  for (std::size_t j = 0; j < n_; ++j) z += cost_[j] * x[j];
  return z;
}

}  // namespace vecfog
