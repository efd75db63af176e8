#include "vecfog/kernels.hpp"

#include <omp.h>

namespace vecfog {
namespace {

// Below this many tableau entries the fork/join overhead dominates.
constexpr std::size_t kParallelThreshold = 1 << 14;

inline void scale_pivot_row(double* row, std::size_t cols, std::size_t k) {
  const double p = row[k];
  for (std::size_t j = 0; j < cols; ++j) row[j] /= p;
  row[k] = 1.0 / p;
}

// Eliminates column k from `row` using the already scaled pivot row.
inline void eliminate(double* row, const double* prow, std::size_t cols, std::size_t k,
                      double inv_p) {
  const double f = row[k];
  if (f == 0.0) return;
  for (std::size_t j = 0; j < cols; ++j) row[j] -= f * prow[j];
  row[k] = -f * inv_p;
}

}  // namespace

std::string_view backend_name(KernelBackend backend) {
  return backend == KernelBackend::OpenMP ? "openmp" : "serial";
}

void pivot_serial(double* t, std::size_t rows, std::size_t cols, std::size_t r, std::size_t k) {
  double* prow = t + r * cols;
  scale_pivot_row(prow, cols, k);
  const double inv_p = prow[k];
  for (std::size_t i = 0; i < rows; ++i) {
    if (i != r) eliminate(t + i * cols, prow, cols, k, inv_p);
  }
}

void pivot_omp(double* t, std::size_t rows, std::size_t cols, std::size_t r, std::size_t k) {
  double* prow = t + r * cols;
  scale_pivot_row(prow, cols, k);
  const double inv_p = prow[k];
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static) if (rows * cols >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (static_cast<std::size_t>(i) != r) {
      eliminate(t + static_cast<std::size_t>(i) * cols, prow, cols, k, inv_p);
    }
  }
}

int omp_threads() { return omp_get_max_threads(); }

}  // namespace vecfog
