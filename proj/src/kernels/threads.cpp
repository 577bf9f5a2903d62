#include <algorithm>
#include <cstdlib>
#include <string>

#include "rotorlab/kernels.hpp"

#include <omp.h>

namespace rotorlab::kernels {

int configured_threads() {
  int threads = omp_get_num_procs();
  if (const char* env = std::getenv("ROTORLAB_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) threads = std::min(threads, cap);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return std::max(threads, 1);
}

void apply_thread_cap() { omp_set_num_threads(configured_threads()); }

}  // namespace rotorlab::kernels
