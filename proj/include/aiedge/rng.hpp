#pragma once

// Portable seeded random number generation.
//
// Core generator is xoshiro256** seeded through splitmix64. Every
// distribution is implemented here, so output is identical across platforms
// and standard libraries.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace aiedge {

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stateless 64-bit mixer (one splitmix64 step from `x`).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  return splitmix64(x);
}

/// FNV-1a over a tag string; used to name sub-streams.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept { reseed(seed); }

  /// Independent sub-stream identified by (seed, tag, index).
  static Rng stream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) noexcept {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s) ^ fnv1a64(tag);
    std::uint64_t b = mix64(a + 0xD1B54A32D192ED03ULL * (index + 1));
    return Rng(b);
  }

  void reseed(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
    has_spare_ = false;
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi]; returns lo exactly when lo == hi.
  double uniform(double lo, double hi) noexcept {
    if (lo == hi) return lo;
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in the closed range [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept {
    if (hi <= lo) return lo;
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return next_u64();  // full 64-bit range
    const auto wide = static_cast<unsigned __int128>(next_u64()) * span;
    return lo + static_cast<std::uint64_t>(wide >> 64);
  }

  /// Standard normal via the Marsaglia polar method.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Exponential with the given rate (events per unit).
  double exponential(double rate) noexcept {
    return -std::log1p(-uniform01()) / rate;
  }

  /// Index drawn with probability proportional to `weights`.
  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("categorical: weights must sum to a positive value");
    const double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    // u landed on the rounding slack past the last bucket
    for (std::size_t i = weights.size(); i-- > 0;)
      if (weights[i] > 0.0) return i;
    return weights.size() - 1;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Zipf(s) sampler over ranks 1..n using an inverted cumulative table.
class ZipfTable {
 public:
  ZipfTable(std::uint64_t n, double s) : cdf_(n) {
    if (n == 0) throw std::invalid_argument("ZipfTable: population must be >= 1");
    if (!(s >= 0.0)) throw std::invalid_argument("ZipfTable: exponent must be >= 0");
    double acc = 0.0;
    for (std::uint64_t r = 1; r <= n; ++r) {
      acc += std::pow(static_cast<double>(r), -s);
      cdf_[r - 1] = acc;
    }
    for (auto& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  std::uint64_t size() const noexcept { return cdf_.size(); }

  /// Rank in [1, n] for a uniform draw u in [0, 1).
  std::uint64_t rank_for(double u) const noexcept {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::uint64_t>(it - cdf_.begin()) + 1;
  }

  std::uint64_t sample(Rng& rng) const noexcept { return rank_for(rng.uniform01()); }

 private:
  std::vector<double> cdf_;
};

}  // namespace aiedge
