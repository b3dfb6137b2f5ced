#pragma once

#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adgen::par {

// OpenMP-parallel index loop that forwards exceptions to the caller
// (an exception escaping a parallel region would terminate the process).
// When several iterations throw, the lowest index wins, so error
// reporting does not depend on scheduling.
template <class F>
void for_index(long n, long min_parallel, F&& fn) {
  (void)min_parallel;
  std::exception_ptr first_error = nullptr;
  long first_index = n;
#ifdef _OPENMP
#pragma omp parallel for if (n >= min_parallel) schedule(dynamic)
#endif
  for (long i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(adgen_par_for_index)
#endif
      {
        if (i < first_index) {
          first_index = i;
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

inline bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace adgen::par
