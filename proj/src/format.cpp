#include "diaboli/format.hpp"

#include <cstdio>
#include <cstdlib>
#include <thread>

namespace diaboli {

std::string format_double(double v) {
  char buf[32];
  // No negative zero in output files.
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("DIABOLI_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

}  // namespace diaboli
