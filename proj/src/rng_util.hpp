#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace snev::detail {

// splitmix64 finalizer; mix64(key + k * golden) walks stream `key`.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Uniform on (0, 1]; never 0, so log(u) is safe.
inline double u01(std::uint64_t key, std::uint64_t ctr) {
  const std::uint64_t bits = mix64(key + 0x9e3779b97f4a7c15ull * ctr);
  return static_cast<double>((bits >> 11) + 1) * 0x1p-53;
}

// One skew-normal draw: index i consumes counters 2i and 2i+1 of the key's
// stream, Box-Muller turns them into the (U0, U1) pair.
inline double sn_draw(double delta, double codelta, std::uint64_t key, std::uint64_t i) {
  const double u1 = u01(key, 2 * i);
  const double u2 = u01(key, 2 * i + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  const double z0 = r * std::cos(ang);
  const double z1 = r * std::sin(ang);
  return delta * std::fabs(z0) + codelta * z1;
}

}  // namespace snev::detail
