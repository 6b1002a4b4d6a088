#pragma once

// Shared test plumbing: a deterministic RNG whose seed can be rotated via
// THIN2GRAPH_SEED for the randomized property tests.

#include <cstdlib>
#include <random>
#include <string>

namespace t2g_test {

inline std::uint32_t property_seed() {
  if (const char* s = std::getenv("THIN2GRAPH_SEED")) return std::strtoul(s, nullptr, 10);
  return 987654321u;
}

inline std::mt19937& rng() {
  static std::mt19937 gen(property_seed());
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline int uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng());
}

}  // namespace t2g_test
