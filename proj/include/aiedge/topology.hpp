#pragma once

// Tiered Telco hierarchy: one node per tier, ordered by distance from the user.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aiedge/latency_model.hpp"
#include "aiedge/rng.hpp"

namespace aiedge {

enum class TierKind : std::uint8_t { NearRAN = 0, MEC = 1, RegionalDC = 2, CoreDC = 3, Cloud = 4 };

inline constexpr std::size_t kTierCount = 5;
inline constexpr std::array<TierKind, kTierCount> kAllTiers = {
    TierKind::NearRAN, TierKind::MEC, TierKind::RegionalDC, TierKind::CoreDC, TierKind::Cloud};

constexpr std::size_t tier_index(TierKind k) noexcept { return static_cast<std::size_t>(k); }

inline std::string_view to_string(TierKind k) {
  switch (k) {
    case TierKind::NearRAN: return "near_ran";
    case TierKind::MEC: return "mec";
    case TierKind::RegionalDC: return "regional_dc";
    case TierKind::CoreDC: return "core_dc";
    case TierKind::Cloud: return "cloud";
  }
  throw std::invalid_argument("unknown tier kind");
}

inline std::optional<TierKind> parse_tier_kind(std::string_view s) {
  for (TierKind k : kAllTiers)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct RttRange {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const RttRange&) const = default;
};

struct TierSpec {
  TierKind kind = TierKind::Cloud;
  RttRange rtt_ms;  ///< user <-> tier round trip
  HardwareProfile hardware;
  std::uint64_t vector_cache_capacity = 0;
  std::uint64_t prompt_cache_capacity = 0;
  std::uint32_t max_concurrent = 1;
  double vector_lookup_ms = 5.0;
  double prompt_lookup_ms = 1.0;

  bool operator==(const TierSpec&) const = default;
};

enum class RttMode { Uniform, Midpoint };

/// Uniform draw from the tier's RTT interval, or its midpoint.
inline double sample_rtt_ms(const TierSpec& tier, Rng& rng, RttMode mode = RttMode::Uniform) {
  if (mode == RttMode::Midpoint) return tier.rtt_ms.midpoint();
  return rng.uniform(tier.rtt_ms.lo, tier.rtt_ms.hi);
}

inline constexpr double kMinHopMs = 0.5;

/// Latency between two adjacent tiers: difference of their user RTTs, floored.
inline double hop_latency_ms(double lower_rtt, double upper_rtt) {
  return std::max(upper_rtt - lower_rtt, kMinHopMs);
}

/// One RTT draw per tier for a single request. Absent tiers hold 0.
struct RttSample {
  std::array<double, kTierCount> ms{};
  double operator[](TierKind k) const { return ms[tier_index(k)]; }
};

class Topology {
 public:
  static Topology build(std::vector<TierSpec> tiers) {
    if (tiers.empty()) throw std::invalid_argument("topology: at least one tier required");
    std::sort(tiers.begin(), tiers.end(),
              [](const TierSpec& a, const TierSpec& b) { return a.kind < b.kind; });
    for (std::size_t i = 0; i < tiers.size(); ++i) {
      const auto& t = tiers[i];
      const std::string name(to_string(t.kind));
      if (i > 0 && tiers[i - 1].kind == t.kind)
        throw std::invalid_argument("topology: duplicate tier '" + name + "'");
      if (!(t.rtt_ms.lo >= 0.0))
        throw std::invalid_argument("topology: tier '" + name + "' rtt lower bound must be >= 0");
      if (!(t.rtt_ms.lo <= t.rtt_ms.hi))
        throw std::invalid_argument("topology: tier '" + name + "' has inverted rtt range");
      if (t.max_concurrent == 0)
        throw std::invalid_argument("topology: tier '" + name + "' max_concurrent must be >= 1");
      if (t.vector_lookup_ms < 0.0 || t.prompt_lookup_ms < 0.0)
        throw std::invalid_argument("topology: tier '" + name + "' lookup costs must be >= 0");
      t.hardware.validate();
    }
    Topology topo;
    topo.tiers_ = std::move(tiers);
    topo.slot_.fill(-1);
    for (std::size_t i = 0; i < topo.tiers_.size(); ++i)
      topo.slot_[tier_index(topo.tiers_[i].kind)] = static_cast<int>(i);
    return topo;
  }

  const std::vector<TierSpec>& tiers() const noexcept { return tiers_; }
  bool contains(TierKind k) const noexcept { return slot_[tier_index(k)] >= 0; }

  const TierSpec& tier(TierKind k) const {
    if (!contains(k))
      throw std::out_of_range("topology: tier '" + std::string(to_string(k)) + "' not present");
    return tiers_[static_cast<std::size_t>(slot_[tier_index(k)])];
  }

  /// Next tier upward, or nullopt for the topmost tier.
  std::optional<TierKind> parent(TierKind k) const {
    const int i = slot_[tier_index(tier(k).kind)];
    if (static_cast<std::size_t>(i) + 1 >= tiers_.size()) return std::nullopt;
    return tiers_[static_cast<std::size_t>(i) + 1].kind;
  }

  TierKind top() const noexcept { return tiers_.back().kind; }

  /// Tiers traversed from `from` to `to` along parent links (either direction).
  std::vector<TierKind> path_between(TierKind from, TierKind to) const {
    const int a = slot_[tier_index(tier(from).kind)];
    const int b = slot_[tier_index(tier(to).kind)];
    std::vector<TierKind> path;
    const int step = a <= b ? 1 : -1;
    for (int i = a;; i += step) {
      path.push_back(tiers_[static_cast<std::size_t>(i)].kind);
      if (i == b) break;
    }
    return path;
  }

  RttSample sample_rtts(Rng& rng, RttMode mode = RttMode::Uniform) const {
    RttSample s;
    for (const auto& t : tiers_) s.ms[tier_index(t.kind)] = sample_rtt_ms(t, rng, mode);
    return s;
  }

  /// Sum of hop latencies along path_between(from, to); zero for a self-path.
  double path_latency_ms(TierKind from, TierKind to, const RttSample& rtt) const {
    const auto path = path_between(from, to);
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      const TierKind lo = std::min(path[i - 1], path[i]);
      const TierKind hi = std::max(path[i - 1], path[i]);
      total += hop_latency_ms(rtt[lo], rtt[hi]);
    }
    return total;
  }

  bool operator==(const Topology& o) const { return tiers_ == o.tiers_; }

 private:
  std::vector<TierSpec> tiers_;
  std::array<int, kTierCount> slot_{};
};

/// Default five-tier chain; Cloud uses the 50-150 ms WAN range.
inline std::vector<TierSpec> default_tiers() {
  return {
      {TierKind::NearRAN, {1.0, 5.0}, {"npu", 2e13, 1e11}, 2000, 0, 32, 5.0, 1.0},
      {TierKind::MEC, {1.0, 10.0}, {"edge-gpu", 1.2e14, 3e11}, 5000, 5000, 64, 5.0, 1.0},
      {TierKind::RegionalDC, {10.0, 50.0}, {"a10", 1.25e14, 6e11}, 20000, 20000, 256, 5.0, 1.0},
      {TierKind::CoreDC, {50.0, 200.0}, {"a100", 312e12, 1.6e12}, 50000, 50000, 1024, 5.0, 1.0},
      {TierKind::Cloud, {50.0, 150.0}, {"a100", 312e12, 1.6e12}, 0, 0, 4096, 5.0, 1.0},
  };
}

}  // namespace aiedge
