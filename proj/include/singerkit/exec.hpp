#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace singerkit {

// Execution policy for grid kernels. Serial is the reference path; Parallel
// runs the same per-point body under OpenMP. Results are identical bit for
// bit because every index is computed independently and reductions happen
// serially afterwards.
enum class Exec : unsigned char { Serial, Parallel };

template <class F>
void for_each_index(Exec exec, std::size_t count, F&& body) {
  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
      body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < count; ++i) body(i);
  }
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace singerkit
