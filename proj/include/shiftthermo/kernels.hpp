#pragma once

// Task-parallel loop used by the batch kernels. Serial and Parallel must give
// bit-identical results: each task writes only its own output slot.

#include <cstddef>
#include <exception>
#include <string_view>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shiftthermo {

enum class Exec { Serial, Parallel };

inline std::string_view to_string(Exec e) { return e == Exec::Serial ? "serial" : "parallel"; }

inline void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <class Fn>
void for_each_task(Exec exec, std::size_t count, Fn&& fn) {
  if (exec == Exec::Serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(shiftthermo_task_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace shiftthermo
