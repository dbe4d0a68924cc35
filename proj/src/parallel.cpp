#include "gelfand/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gelfand {

unsigned worker_count() {
  if (const char* env = std::getenv("GELFAND_ATLAS_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return unsigned(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

}  // namespace gelfand
