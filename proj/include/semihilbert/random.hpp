#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

#include "semihilbert/matrix.hpp"

namespace semihilbert {

/// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of `name`.
inline constexpr std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Counter-based generator: draw k of stream (seed, name) is
/// mix64(key + k * golden) with key = mix64(seed ^ mix64(fnv1a(name))).
/// Streams are independent of each other and of the order in which they are
/// created, so adding a named stream never perturbs an existing one.
/// Normals use Box-Muller with std::log/std::cos only, no library distributions.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view name)
      : key_(mix64(seed ^ mix64(hash_name(name)))) {}

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  cplx complex_normal() { return cplx(normal(), normal()) * (1.0 / std::numbers::sqrt2); }

  Vector complex_normal_vector(std::size_t n) {
    Vector v(n);
    for (auto& z : v) z = complex_normal();
    return v;
  }

  ComplexMatrix complex_normal_matrix(std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (auto& z : m.data()) z = complex_normal();
    return m;
  }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace semihilbert
