#pragma once

namespace conflab {

/// Selects the OpenMP kernel or the serial reference loop. Both produce
/// identical results; the serial path is kept for testing and benchmarks.
enum class Execution { serial, parallel };

/// Reads CONFLAB_THREADS and, when it holds a positive integer, caps the
/// OpenMP worker count. Returns the thread count in effect.
int apply_thread_cap_from_env();

int max_threads();

}  // namespace conflab
