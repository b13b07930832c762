#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace chaoswpt {

// splitmix64 finalizer; used for seed derivation only.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive hash of a list of words. Stable across platforms and runs,
/// so sub-seeds depend only on the coordinates they are derived from.
constexpr std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t w : words) {
    h = mix64(h ^ mix64(w));
  }
  return h;
}

inline std::uint64_t bits_of(double v) noexcept { return std::bit_cast<std::uint64_t>(v); }

/// Thin wrapper over mt19937_64 producing doubles from the raw 64-bit stream.
/// The conversions are done here rather than through <random> distributions so
/// that sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }

  /// Equiprobable +1 / -1.
  int sign_bit() { return (engine_() >> 63) != 0 ? 1 : -1; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chaoswpt
