#pragma once

// Counter-based random streams. A stream is keyed by a 64-bit seed and an
// optional 64-bit stream id; draw k is a pure function of (seed, stream, k),
// so values never depend on the order in which they are requested.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace bssk {

/// Philox4x32-10 (Salmon et al., SC'11).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// SplitMix64 finalizer; used to derive child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for child `index` of `master` (one per trial, chunk, ...).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ull));
}

class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  /// 128 random bits for counter k.
  std::array<std::uint32_t, 4> block(std::uint64_t k) const {
    return philox4x32({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                       static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                      key_);
  }

  /// Two uniforms in (0, 1) with 53-bit resolution.
  std::array<double, 2> uniform_pair(std::uint64_t k) const {
    const auto b = block(k);
    return {to_open_unit((std::uint64_t{b[0]} << 32) | b[1]),
            to_open_unit((std::uint64_t{b[2]} << 32) | b[3])};
  }

  double uniform(std::uint64_t k) const { return uniform_pair(k)[0]; }

  /// Standard normal via Box-Muller on the pair for counter k.
  double normal(std::uint64_t k) const {
    const auto [u, v] = uniform_pair(k);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  /// Both Box-Muller outputs for counter k.
  std::array<double, 2> normal_pair(std::uint64_t k) const {
    const auto [u, v] = uniform_pair(k);
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * v;
    return {r * std::cos(a), r * std::sin(a)};
  }

 private:
  static double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
};

}  // namespace bssk
