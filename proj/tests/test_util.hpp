#pragma once

#include <cmath>
#include <random>

namespace testutil {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

/// Smallest absolute difference between two angles, radians.
inline double angle_dist(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * M_PI));
}

}  // namespace testutil
