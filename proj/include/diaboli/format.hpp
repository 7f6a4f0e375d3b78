#pragma once

#include <string>

namespace diaboli {

/// Round-trippable `%.17g` rendering used for every CSV number.
std::string format_double(double v);

/// Reads DIABOLI_THREADS, falling back to hardware concurrency (at least 1).
unsigned worker_count();

}  // namespace diaboli
