#pragma once

// Compute- and memory-side latency estimates for transformer inference.
//
// FLOP counts cover self-attention only (2·h·n²·d per layer). Models that need
// to account for MLP blocks or kernel inefficiencies should set
// `base_per_token_ms`, which replaces the roofline estimate outright.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aiedge {

/// Exact FLOP count. 128 bits covers any (n, d, h, L) that fits in 32 bits each.
using FlopCount = unsigned __int128;

inline std::string to_string(FlopCount v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return out;
}

enum class Precision { FP32, FP16, INT8, INT4 };

inline std::string_view to_string(Precision p) {
  switch (p) {
    case Precision::FP32: return "fp32";
    case Precision::FP16: return "fp16";
    case Precision::INT8: return "int8";
    case Precision::INT4: return "int4";
  }
  throw std::invalid_argument("unknown precision");
}

inline std::optional<Precision> parse_precision(std::string_view s) {
  if (s == "fp32") return Precision::FP32;
  if (s == "fp16") return Precision::FP16;
  if (s == "int8") return Precision::INT8;
  if (s == "int4") return Precision::INT4;
  return std::nullopt;
}

inline double bytes_per_param(Precision p) {
  switch (p) {
    case Precision::FP32: return 4.0;
    case Precision::FP16: return 2.0;
    case Precision::INT8: return 1.0;
    case Precision::INT4: return 0.5;
  }
  throw std::invalid_argument("unknown precision");
}

/// Fraction of FP32 latency retained at each precision. Defaults are the
/// midpoints of published reduction ranges: FP16 30-50%, INT8 60-75%,
/// INT4 75-80%.
struct QuantizationTable {
  double fp32 = 1.0;
  double fp16 = 0.6;
  double int8 = 0.325;
  double int4 = 0.225;

  void validate() const {
    for (double m : {fp32, fp16, int8, int4})
      if (!(m > 0.0)) throw std::invalid_argument("quantization multipliers must be > 0");
  }

  bool operator==(const QuantizationTable&) const = default;
};

inline double quantization_multiplier(Precision p, const QuantizationTable& table = {}) {
  switch (p) {
    case Precision::FP32: return table.fp32;
    case Precision::FP16: return table.fp16;
    case Precision::INT8: return table.int8;
    case Precision::INT4: return table.int4;
  }
  throw std::invalid_argument("quantization_multiplier: unknown precision");
}

struct ModelProfile {
  std::string name;
  std::uint32_t heads = 1;
  std::uint32_t embed_dim = 1;
  std::uint32_t layers = 1;
  std::uint64_t param_count = 1;
  Precision precision = Precision::FP32;
  /// Calibrated per-token latency on reference hardware at FP32. When set it
  /// replaces the roofline estimate; the quantization multiplier still applies.
  std::optional<double> base_per_token_ms;

  double bytes_per_param() const { return aiedge::bytes_per_param(precision); }
  double weight_bytes() const { return static_cast<double>(param_count) * bytes_per_param(); }

  void validate() const {
    if (heads == 0) throw std::invalid_argument("model.heads must be >= 1");
    if (embed_dim == 0) throw std::invalid_argument("model.embed_dim must be >= 1");
    if (layers == 0) throw std::invalid_argument("model.layers must be >= 1");
    if (param_count == 0) throw std::invalid_argument("model.param_count must be >= 1");
    if (base_per_token_ms && !(*base_per_token_ms > 0.0))
      throw std::invalid_argument("model.base_per_token_ms must be > 0");
  }

  bool operator==(const ModelProfile&) const = default;
};

struct HardwareProfile {
  std::string name;
  double flops_per_sec = 1.0;
  double mem_bandwidth_bytes_per_sec = 1.0;

  void validate() const {
    if (!(flops_per_sec > 0.0)) throw std::invalid_argument("hardware.flops_per_sec must be > 0");
    if (!(mem_bandwidth_bytes_per_sec > 0.0))
      throw std::invalid_argument("hardware.mem_bandwidth_bytes_per_sec must be > 0");
  }

  bool operator==(const HardwareProfile&) const = default;
};

struct LatencyBreakdown {
  double compute_ms = 0.0;
  double network_ms = 0.0;
  double cache_lookup_ms = 0.0;
  double total_ms = 0.0;

  static LatencyBreakdown make(double compute, double network, double lookup) {
    if (compute < 0.0 || network < 0.0 || lookup < 0.0)
      throw std::invalid_argument("LatencyBreakdown: components must be non-negative");
    return {compute, network, lookup, compute + network + lookup};
  }
};

inline FlopCount attention_flops_per_head(std::uint64_t n, std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("attention_flops_per_head: d must be >= 1");
  const FlopCount nn = static_cast<FlopCount>(n) * n;
  return 2 * nn * d;
}

inline FlopCount multihead_flops(std::uint64_t n, std::uint64_t d, std::uint64_t h) {
  if (h == 0) throw std::invalid_argument("multihead_flops: h must be >= 1");
  return static_cast<FlopCount>(h) * attention_flops_per_head(n, d);
}

inline FlopCount model_forward_flops(const ModelProfile& m, std::uint64_t n) {
  return static_cast<FlopCount>(m.layers) * multihead_flops(n, m.embed_dim, m.heads);
}

inline double compute_bound_per_token_ms(const ModelProfile& m, const HardwareProfile& hw,
                                         std::uint64_t n_ctx) {
  return static_cast<double>(model_forward_flops(m, n_ctx)) / hw.flops_per_sec * 1000.0;
}

/// Time to stream every weight through memory once.
inline double memory_bound_per_token_ms(const ModelProfile& m, const HardwareProfile& hw) {
  return m.weight_bytes() / hw.mem_bandwidth_bytes_per_sec * 1000.0;
}

inline double per_token_latency_ms(const ModelProfile& m, const HardwareProfile& hw,
                                   std::uint64_t n_ctx, const QuantizationTable& q = {}) {
  const double raw = m.base_per_token_ms
                         ? *m.base_per_token_ms
                         : std::max(compute_bound_per_token_ms(m, hw, n_ctx),
                                    memory_bound_per_token_ms(m, hw));
  return raw * quantization_multiplier(m.precision, q);
}

inline double generation_latency_ms(const ModelProfile& m, const HardwareProfile& hw,
                                    std::uint64_t n_out, std::uint64_t n_ctx = 0,
                                    const QuantizationTable& q = {}) {
  if (n_out == 0) return 0.0;
  return static_cast<double>(n_out) * per_token_latency_ms(m, hw, n_ctx, q);
}

/// GPT-3 175B calibrated to 350 ms/token on a single A100 at FP32.
inline ModelProfile gpt3_profile() {
  return {"gpt3-175b", 96, 128, 96, 175'000'000'000ULL, Precision::FP32, 350.0};
}

inline HardwareProfile a100_profile() {
  return {"a100", 312e12, 1.6e12};
}

}  // namespace aiedge
