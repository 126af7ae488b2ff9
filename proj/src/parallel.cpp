#include "conflab/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace conflab {

int apply_thread_cap_from_env() {
  if (const char* env = std::getenv("CONFLAB_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) omp_set_num_threads(cap);
    } catch (const std::exception&) {
      // unparsable values leave the default in place
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace conflab
