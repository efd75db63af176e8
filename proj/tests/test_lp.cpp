#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <random>

#include "vecfog/dual_simplex.hpp"
#include "vecfog/errors.hpp"
#include "vecfog/kernels.hpp"

using namespace vecfog;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Brute-force LP oracle: every choice of n tight constraints (rows or bounds)
// gives a candidate vertex; the cheapest feasible one is optimal when the
// feasible region is a bounded polytope.
struct Halfspace {
  std::vector<double> a;
  double b;  // a.x <= b, tight when equal
};

std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    }
    if (std::fabs(A[piv][c]) < 1e-12) return std::nullopt;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

std::optional<double> vertex_oracle(const LpProblem& p) {
  const std::size_t n = p.columns();
  std::vector<Halfspace> hs;
  std::vector<bool> equality;
  for (const auto& r : p.rows) {
    std::vector<double> a(n, 0.0);
    for (auto [j, c] : r.terms) a[static_cast<std::size_t>(j)] += c;
    if (r.sense == Sense::GreaterEqual) {
      for (double& v : a) v = -v;
      hs.push_back({a, -r.rhs});
    } else {
      hs.push_back({a, r.rhs});
    }
    equality.push_back(r.sense == Sense::Equal);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    hs.push_back({e, p.upper[j]});
    e[j] = -1.0;
    hs.push_back({e, -p.lower[j]});
    equality.push_back(false);
    equality.push_back(false);
  }
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  // Lexicographic n-subsets of the halfspaces.
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t i : pick) {
      A.push_back(hs[i].a);
      b.push_back(hs[i].b);
    }
    if (auto x = solve_square(A, b)) {
      bool ok = true;
      for (std::size_t h = 0; h < hs.size() && ok; ++h) {
        double act = 0.0;
        for (std::size_t j = 0; j < n; ++j) act += hs[h].a[j] * (*x)[j];
        ok = act <= hs[h].b + 1e-7 && (!equality[h] || act >= hs[h].b - 1e-7);
      }
      if (ok) {
        double obj = 0.0;
        for (std::size_t j = 0; j < n; ++j) obj += p.cost[j] * (*x)[j];
        if (!best || obj < *best) best = obj;
      }
    }
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == hs.size() - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

LpProblem random_lp(std::mt19937& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> coef(-3.0, 5.0), cost(-4.0, 6.0), ub(1.0, 10.0);
  std::uniform_int_distribution<int> sense(0, 5);
  LpProblem p;
  for (std::size_t j = 0; j < n; ++j) p.add_column(std::round(cost(rng)), 0.0, std::round(ub(rng)));
  for (std::size_t i = 0; i < m; ++i) {
    LpProblem::Row r;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::round(coef(rng));
      if (a != 0.0) r.terms.emplace_back(static_cast<int>(j), a);
    }
    const int s = sense(rng);
    r.sense = s < 4 ? Sense::LessEqual : (s == 4 ? Sense::GreaterEqual : Sense::Equal);
    r.rhs = std::round(coef(rng) * 3.0);
    p.rows.push_back(std::move(r));
  }
  return p;
}

void check_feasible(const LpProblem& p, const std::vector<double>& x) {
  for (std::size_t j = 0; j < p.columns(); ++j) {
    CHECK(x[j] >= p.lower[j] - 1e-7);
    CHECK(x[j] <= p.upper[j] + 1e-7);
  }
  for (const auto& r : p.rows) {
    double act = 0.0;
    for (auto [j, a] : r.terms) act += a * x[static_cast<std::size_t>(j)];
    if (r.sense == Sense::LessEqual) CHECK(act <= r.rhs + 1e-7);
    if (r.sense == Sense::GreaterEqual) CHECK(act >= r.rhs - 1e-7);
    if (r.sense == Sense::Equal) CHECK(std::fabs(act - r.rhs) <= 1e-7);
  }
}

}  // namespace

TEST_CASE("textbook maximization") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  x=2, y=6, value 36.
  LpProblem p;
  p.add_column(-3.0, 0.0, 100.0);  // bounds on the cost side are required
  p.add_column(-5.0, 0.0, 100.0);
  p.rows.push_back({{{0, 1.0}}, Sense::LessEqual, 4.0});
  p.rows.push_back({{{1, 2.0}}, Sense::LessEqual, 12.0});
  p.rows.push_back({{{0, 3.0}, {1, 2.0}}, Sense::LessEqual, 18.0});
  DualSimplex lp(p);
  REQUIRE(lp.solve() == LpStatus::Optimal);
  CHECK(lp.objective() == doctest::Approx(-36.0));
  const auto x = lp.primal();
  CHECK(x[0] == doctest::Approx(2.0));
  CHECK(x[1] == doctest::Approx(6.0));
}

TEST_CASE("covering problem with equality") {
  // min 2a + 3b + c, a + b + c = 10, a + 2b >= 8, c <= 3  ->  a=6, b=1, c=3.
  LpProblem p;
  p.add_column(2.0, 0.0, kInf);
  p.add_column(3.0, 0.0, kInf);
  p.add_column(1.0, 0.0, 3.0);
  p.rows.push_back({{{0, 1.0}, {1, 1.0}, {2, 1.0}}, Sense::Equal, 10.0});
  p.rows.push_back({{{0, 1.0}, {1, 2.0}}, Sense::GreaterEqual, 8.0});
  DualSimplex lp(p);
  REQUIRE(lp.solve() == LpStatus::Optimal);
  CHECK(lp.objective() == doctest::Approx(18.0));
  const auto x = lp.primal();
  CHECK(x[0] == doctest::Approx(6.0));
  CHECK(x[1] == doctest::Approx(1.0));
  CHECK(x[2] == doctest::Approx(3.0));
}

TEST_CASE("infeasible and malformed problems") {
  LpProblem p;
  p.add_column(1.0, 0.0, 5.0);
  p.rows.push_back({{{0, 1.0}}, Sense::GreaterEqual, 6.0});
  DualSimplex lp(p);
  CHECK(lp.solve() == LpStatus::Infeasible);

  LpProblem q;
  q.add_column(1.0, 2.0, 1.0);
  CHECK_THROWS_AS(DualSimplex{q}, ConfigError);

  LpProblem r;
  r.add_column(-1.0, 0.0, kInf);
  CHECK_THROWS_AS(DualSimplex{r}, ConfigError);
}

TEST_CASE("random problems agree with vertex enumeration") {
  std::mt19937 rng(2024);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 3, m = 1 + trial % 4;
    const LpProblem p = random_lp(rng, n, m);
    const auto oracle = vertex_oracle(p);
    DualSimplex lp(p);
    const LpStatus st = lp.solve();
    INFO("trial " << trial);
    if (!oracle) {
      CHECK(st == LpStatus::Infeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(st == LpStatus::Optimal);
    CHECK(lp.objective() == doctest::Approx(*oracle).epsilon(1e-7));
    check_feasible(p, lp.primal());
    ++optimal;
  }
  // Both outcomes exercised.
  CHECK(optimal > 50);
  CHECK(infeasible > 5);
}

TEST_CASE("pivot kernel matches the exchange formula") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::size_t rows = 7, cols = 5, r = 3, k = 2;
  std::vector<double> t(rows * cols);
  for (double& v : t) v = u(rng);
  t[r * cols + k] = 1.7;
  std::vector<double> out = t;
  pivot_serial(out.data(), rows, cols, r, k);
  const double p = t[r * cols + k];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double expect;
      if (i == r) {
        expect = j == k ? 1.0 / p : t[r * cols + j] / p;
      } else {
        expect = j == k ? -t[i * cols + k] / p : t[i * cols + j] - t[i * cols + k] * t[r * cols + j] / p;
      }
      CHECK(out[i * cols + j] == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  // The exchange is an involution.
  pivot_serial(out.data(), rows, cols, r, k);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(out[i] == doctest::Approx(t[i]).epsilon(1e-12));
}

TEST_CASE("serial and OpenMP pivots are bitwise identical") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t rows = 300, cols = 200;  // above the parallel threshold
  std::vector<double> a(rows * cols);
  for (double& v : a) v = u(rng);
  std::vector<double> b = a;
  for (std::size_t step = 0; step < 20; ++step) {
    const std::size_t r = (step * 37) % rows, k = (step * 13) % cols;
    a[r * cols + k] = b[r * cols + k] = 0.5 + u(rng) * 0.1;
    pivot_serial(a.data(), rows, cols, r, k);
    pivot_omp(b.data(), rows, cols, r, k);
  }
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  CHECK(omp_threads() >= 1);
}

TEST_CASE("serial and OpenMP solves are bitwise identical") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const LpProblem p = random_lp(rng, 150, 120);
    DualSimplex s(p, KernelBackend::Serial), o(p, KernelBackend::OpenMP);
    const LpStatus a = s.solve(), b = o.solve();
    CHECK(a == b);
    CHECK(s.iterations() == o.iterations());
    if (a != LpStatus::Optimal) continue;
    const auto xs = s.primal(), xo = o.primal();
    CHECK(std::memcmp(xs.data(), xo.data(), xs.size() * sizeof(double)) == 0);
    CHECK(s.objective() == o.objective());
  }
}

TEST_CASE("warm start after bound changes matches a cold solve") {
  std::mt19937 rng(31);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    LpProblem p = random_lp(rng, 4, 3);
    DualSimplex warm(p);
    if (warm.solve() != LpStatus::Optimal) continue;
    const auto x = warm.primal();
    // Tighten the variable furthest from integral, as a branch would.
    const int j = trial % 4;
    const double cut = std::floor(x[static_cast<std::size_t>(j)]);
    DualSimplex child = warm;
    if (!child.set_bounds(j, p.lower[static_cast<std::size_t>(j)], cut)) continue;
    p.upper[static_cast<std::size_t>(j)] = cut;
    DualSimplex cold(p);
    const LpStatus a = child.solve(), b = cold.solve();
    CHECK(a == b);
    if (a == LpStatus::Optimal) {
      CHECK(child.objective() == doctest::Approx(cold.objective()).epsilon(1e-9));
      CHECK(child.upper(j) == cut);
      ++compared;
    }
  }
  CHECK(compared > 20);
}
