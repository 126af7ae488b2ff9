#pragma once

#include <cstddef>
#include <exception>

#include "conflab/parallel.hpp"

namespace conflab::detail {

/// Runs body(i) for i in [0, count). Exceptions thrown inside the OpenMP
/// region are captured and the first one is rethrown after the loop.
template <typename Body>
void parallel_for(std::size_t count, Execution exec, Body&& body) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(conflab_parallel_for_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace conflab::detail
