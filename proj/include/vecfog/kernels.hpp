#pragma once

#include <cstddef>
#include <string_view>

namespace vecfog {

// Pivot kernels for a dense row-major tableau of `rows` x `cols`. Both
// backends perform the same per-element operations in the same order, so
// their results are bitwise identical; the serial one is the reference.
enum class KernelBackend { Serial, OpenMP };

std::string_view backend_name(KernelBackend backend);

// Gauss-Jordan exchange on (r, k): row r is divided by the pivot and column
// k becomes the column of the leaving variable.
void pivot_serial(double* tableau, std::size_t rows, std::size_t cols, std::size_t r,
                  std::size_t k);
void pivot_omp(double* tableau, std::size_t rows, std::size_t cols, std::size_t r, std::size_t k);

inline void pivot(KernelBackend backend, double* tableau, std::size_t rows, std::size_t cols,
                  std::size_t r, std::size_t k) {
  if (backend == KernelBackend::OpenMP) {
    pivot_omp(tableau, rows, cols, r, k);
  } else {
    pivot_serial(tableau, rows, cols, r, k);
  }
}

// Threads the OpenMP backend will use (1 when built without OpenMP).
int omp_threads();

}  // namespace vecfog
