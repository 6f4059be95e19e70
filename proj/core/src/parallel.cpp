#include "varcomp/parallel.hpp"

#include <cstdlib>
#include <string>

namespace varcomp {

int default_workers() {
  if (const char* env = std::getenv("VARCOMP_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) {
        return value;
      }
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace varcomp
