#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace testing_support {

inline std::vector<double> uniform_series(std::mt19937_64& gen, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = u(gen);
  return x;
}

/// Values on a coarse lattice, so that cells collide often.
inline std::vector<double> lattice_series(std::mt19937_64& gen, std::size_t n, int levels) {
  std::uniform_int_distribution<int> u(0, levels - 1);
  std::vector<double> x(n);
  for (auto& v : x) v = static_cast<double>(u(gen)) / levels;
  return x;
}

inline std::vector<double> step_series(std::size_t before, std::size_t after, double low = 0.0, double high = 1.0) {
  std::vector<double> x(before, low);
  x.insert(x.end(), after, high);
  return x;
}

}  // namespace testing_support
