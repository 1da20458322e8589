#pragma once

#include <cstdint>
#include <random>

namespace ipdmem {

/// SplitMix64 finalizer. Bijective 64-bit mixing.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

/// Seed of child stream `k` derived from `parent`.
///
///   split_seed(parent, k) = mix64(parent + 0x9E3779B97F4A7C15 * (k + 1))
///
/// Nested splits (split_seed(split_seed(m, a), b)) address multi-level
/// indices such as (strategy, mu, realization).
constexpr std::uint64_t split_seed(std::uint64_t parent, std::uint64_t k) noexcept {
  return mix64(parent + 0x9E3779B97F4A7C15ull * (k + 1));
}

/// The single random stream owned by one realization.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the standard.
/// The standard distributions are implementation-defined, so the conversions
/// below are done by hand to keep replays identical across toolchains. Every
/// helper consumes exactly one engine output.
__extension__ typedef unsigned __int128 uint128_t;

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() {
    ++draws_;
    return engine_();
  }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n > 0. Multiply-high mapping; the bias is
  /// below n / 2^64.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<uint128_t>(next()) * n) >> 64);
  }

  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace ipdmem
