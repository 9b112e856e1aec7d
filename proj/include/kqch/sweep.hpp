#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace kqch {

// Execution policy for per-point evaluation kernels.  Point evaluations are
// pure functions of immutable fields, so the parallel path must produce
// bit-identical output to the serial reference; tests compare the two.
enum class Exec { serial, parallel };

inline bool openmp_enabled() {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

// Evaluates fn(i) for i in [0, count) into a vector, ordered by index.
// The serial branch is the reference implementation.
template <typename T, typename F>
std::vector<T> map_indexed(std::size_t count, F&& fn, Exec exec = Exec::parallel) {
  std::vector<T> out(count);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::string first_error;
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      out[i] = fn(i);
    } catch (const std::exception& e) {
#pragma omp critical
      if (first_error.empty()) first_error = e.what();
    }
  }
#else
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
#endif
  if (!first_error.empty()) throw std::runtime_error(first_error);
  return out;
}

}  // namespace kqch
