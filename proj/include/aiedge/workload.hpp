#pragma once

// Synthetic inference workloads: Poisson arrivals, Zipf prompt popularity and
// clustered unit-norm embeddings whose noise level sets the semantic hit regime.

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aiedge/format.hpp"
#include "aiedge/rng.hpp"
#include "aiedge/topology.hpp"

namespace aiedge {

enum class WorkloadClass : std::uint8_t { UltraLow = 0, Moderate = 1, LatencyTolerant = 2 };

inline constexpr std::array<WorkloadClass, 3> kAllClasses = {
    WorkloadClass::UltraLow, WorkloadClass::Moderate, WorkloadClass::LatencyTolerant};

constexpr std::size_t class_index(WorkloadClass c) noexcept { return static_cast<std::size_t>(c); }

inline std::string_view to_string(WorkloadClass c) {
  switch (c) {
    case WorkloadClass::UltraLow: return "ultra_low";
    case WorkloadClass::Moderate: return "moderate";
    case WorkloadClass::LatencyTolerant: return "latency_tolerant";
  }
  throw std::invalid_argument("unknown workload class");
}

inline std::optional<WorkloadClass> parse_workload_class(std::string_view s) {
  for (auto c : kAllClasses)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

struct LatencyTarget {
  double lo_ms;
  double hi_ms;
};

inline LatencyTarget latency_target(WorkloadClass c) {
  switch (c) {
    case WorkloadClass::UltraLow: return {1.0, 10.0};
    case WorkloadClass::Moderate: return {10.0, 100.0};
    case WorkloadClass::LatencyTolerant: return {100.0, std::numeric_limits<double>::infinity()};
  }
  throw std::invalid_argument("unknown workload class");
}

/// Upper latency bound of the class; exceeding it is an SLA violation.
inline double sla_upper_ms(WorkloadClass c) { return latency_target(c).hi_ms; }

/// (0,10] -> UltraLow, (10,100] -> Moderate, (100,inf) -> LatencyTolerant.
inline WorkloadClass class_of(double latency_target_ms) {
  if (!(latency_target_ms > 0.0)) throw std::invalid_argument("class_of: target must be > 0");
  if (latency_target_ms <= 10.0) return WorkloadClass::UltraLow;
  if (latency_target_ms <= 100.0) return WorkloadClass::Moderate;
  return WorkloadClass::LatencyTolerant;
}

enum class WorkloadKind : std::uint8_t {
  Unspecified,
  Conversational,
  SemanticSearch,
  Recommendation,
  BatchEmbedding,
  PromptCaching,
};

inline std::string_view to_string(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::Unspecified: return "unspecified";
    case WorkloadKind::Conversational: return "conversational";
    case WorkloadKind::SemanticSearch: return "semantic_search";
    case WorkloadKind::Recommendation: return "recommendation";
    case WorkloadKind::BatchEmbedding: return "batch_embedding";
    case WorkloadKind::PromptCaching: return "prompt_caching";
  }
  throw std::invalid_argument("unknown workload kind");
}

inline std::optional<WorkloadKind> parse_workload_kind(std::string_view s) {
  for (auto k : {WorkloadKind::Unspecified, WorkloadKind::Conversational,
                 WorkloadKind::SemanticSearch, WorkloadKind::Recommendation,
                 WorkloadKind::BatchEmbedding, WorkloadKind::PromptCaching})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// Preferred placement tier. Where two tiers are listed as suitable, the one
/// that can host a model is chosen (MEC over Near-RAN, Regional over MEC).
inline TierKind default_tier_for(WorkloadClass c, WorkloadKind kind = WorkloadKind::Unspecified) {
  switch (kind) {
    case WorkloadKind::Conversational: return TierKind::MEC;
    case WorkloadKind::SemanticSearch:
    case WorkloadKind::Recommendation: return TierKind::RegionalDC;
    case WorkloadKind::BatchEmbedding: return TierKind::CoreDC;
    case WorkloadKind::PromptCaching: return TierKind::RegionalDC;
    case WorkloadKind::Unspecified: break;
  }
  switch (c) {
    case WorkloadClass::UltraLow: return TierKind::MEC;
    case WorkloadClass::Moderate: return TierKind::RegionalDC;
    case WorkloadClass::LatencyTolerant: return TierKind::CoreDC;
  }
  throw std::invalid_argument("default_tier_for: unknown class");
}

using Embedding = std::vector<double>;

inline double dot(const Embedding& a, const Embedding& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void normalize(Embedding& v) {
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  if (!(n2 > 0.0)) throw std::invalid_argument("normalize: zero vector");
  const double inv = 1.0 / std::sqrt(n2);
  for (double& x : v) x *= inv;
}

struct Request {
  std::uint64_t id = 0;
  double arrival_ms = 0.0;
  WorkloadClass cls = WorkloadClass::UltraLow;
  std::uint32_t prompt_tokens = 1;
  std::uint32_t output_tokens = 0;
  Embedding embedding;
  std::uint64_t prompt_key = 0;
  std::uint64_t population_rank = 1;

  bool operator==(const Request&) const = default;
};

struct TokenRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  bool operator==(const TokenRange&) const = default;
};

struct WorkloadParams {
  double duration_ms = 60'000.0;
  double rate_per_sec = 20.0;
  std::array<double, 3> class_mix{1.0, 0.0, 0.0};
  WorkloadKind kind = WorkloadKind::Unspecified;
  double zipf_s = 1.1;
  std::uint64_t n_prompts = 1000;
  std::uint64_t n_clusters = 100;
  double cluster_noise_sigma = 0.03;
  std::uint32_t embedding_dim = 64;
  TokenRange prompt_tokens{16, 256};
  std::array<TokenRange, 3> output_tokens{{{1, 20}, {20, 100}, {100, 500}}};

  void validate() const {
    if (!(duration_ms >= 0.0)) throw std::invalid_argument("workload.duration_ms must be >= 0");
    if (!(rate_per_sec > 0.0)) throw std::invalid_argument("workload.rate_per_sec must be > 0");
    double total = 0.0;
    for (double w : class_mix) {
      if (!(w >= 0.0)) throw std::invalid_argument("workload.class_mix weights must be >= 0");
      total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("workload.class_mix must have positive total weight");
    if (!(zipf_s >= 0.0)) throw std::invalid_argument("workload.zipf_s must be >= 0");
    if (n_prompts == 0) throw std::invalid_argument("workload.n_prompts must be >= 1");
    if (n_clusters == 0) throw std::invalid_argument("workload.n_clusters must be >= 1");
    if (!(cluster_noise_sigma >= 0.0))
      throw std::invalid_argument("workload.cluster_noise_sigma must be >= 0");
    if (embedding_dim == 0) throw std::invalid_argument("workload.embedding_dim must be >= 1");
    if (prompt_tokens.lo == 0 || prompt_tokens.lo > prompt_tokens.hi)
      throw std::invalid_argument("workload.prompt_tokens must satisfy 1 <= lo <= hi");
    for (const auto& r : output_tokens)
      if (r.lo > r.hi) throw std::invalid_argument("workload.output_tokens must satisfy lo <= hi");
  }

  bool operator==(const WorkloadParams&) const = default;
};

/// Canonical prompt identity for a popularity rank.
inline std::uint64_t prompt_key_for(std::uint64_t rank) noexcept {
  return mix64(rank ^ 0x70726F6D70744B59ULL);
}

/// Unit-norm cluster centres, one per cluster, drawn from the "clusters" stream.
inline std::vector<Embedding> cluster_centers(std::uint64_t seed, std::uint64_t n_clusters,
                                              std::uint32_t dim) {
  Rng rng = Rng::stream(seed, "clusters");
  std::vector<Embedding> centers(n_clusters, Embedding(dim));
  for (auto& c : centers) {
    for (double& x : c) x = rng.normal();
    normalize(c);
  }
  return centers;
}

/// Cluster centre perturbed by isotropic Gaussian noise, renormalised.
inline Embedding noisy_embedding(const Embedding& center, double sigma, Rng& rng) {
  Embedding e(center);
  if (sigma > 0.0)
    for (double& x : e) x += sigma * rng.normal();
  normalize(e);
  return e;
}

inline std::vector<Request> generate_stream(std::uint64_t seed, const WorkloadParams& p) {
  p.validate();
  std::vector<Request> out;
  if (p.duration_ms <= 0.0) return out;

  const auto centers = cluster_centers(seed, p.n_clusters, p.embedding_dim);
  const ZipfTable zipf(p.n_prompts, p.zipf_s);
  const std::vector<double> mix(p.class_mix.begin(), p.class_mix.end());
  const double rate_per_ms = p.rate_per_sec / 1000.0;
  Rng rng = Rng::stream(seed, "workload");

  double t = 0.0;
  for (std::uint64_t id = 0;; ++id) {
    t += rng.exponential(rate_per_ms);
    if (t >= p.duration_ms) break;
    Request r;
    r.id = id;
    r.arrival_ms = t;
    r.cls = static_cast<WorkloadClass>(rng.categorical(mix));
    r.population_rank = zipf.sample(rng);
    r.prompt_key = prompt_key_for(r.population_rank);
    r.prompt_tokens = static_cast<std::uint32_t>(rng.uniform_int(p.prompt_tokens.lo, p.prompt_tokens.hi));
    const auto& outr = p.output_tokens[class_index(r.cls)];
    r.output_tokens = static_cast<std::uint32_t>(rng.uniform_int(outr.lo, outr.hi));
    const auto& center = centers[(r.population_rank - 1) % p.n_clusters];
    r.embedding = noisy_embedding(center, p.cluster_noise_sigma, rng);
    out.push_back(std::move(r));
  }
  return out;
}

// Workload record file: one request per line, comma separated:
//   id,arrival_ms,class,n_in,n_out,rank,prompt_key_hex,e0,e1,...
// Decimals use the shortest exact round-trip representation.

inline void write_workload(std::ostream& os, const std::vector<Request>& requests) {
  for (const auto& r : requests) {
    os << r.id << ',' << format_double(r.arrival_ms) << ',' << to_string(r.cls) << ','
       << r.prompt_tokens << ',' << r.output_tokens << ',' << r.population_rank << ','
       << format_hex64(r.prompt_key);
    for (double x : r.embedding) os << ',' << format_double(x);
    os << '\n';
  }
}

inline std::vector<Request> read_workload(std::istream& is) {
  std::vector<Request> out;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      auto pos = rest.find(',');
      f.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    auto fail = [&](const char* what) {
      return std::invalid_argument("workload record line " + std::to_string(lineno) + ": " + what);
    };
    if (f.size() < 8) throw fail("too few fields");
    Request r;
    auto id = parse_u64(f[0]);
    auto t = parse_double(f[1]);
    auto cls = parse_workload_class(f[2]);
    auto nin = parse_u64(f[3]);
    auto nout = parse_u64(f[4]);
    auto rank = parse_u64(f[5]);
    auto key = parse_u64(f[6], 16);
    if (!id || !t || !cls || !nin || !nout || !rank || !key) throw fail("malformed field");
    r.id = *id;
    r.arrival_ms = *t;
    r.cls = *cls;
    r.prompt_tokens = static_cast<std::uint32_t>(*nin);
    r.output_tokens = static_cast<std::uint32_t>(*nout);
    r.population_rank = *rank;
    r.prompt_key = *key;
    for (std::size_t i = 7; i < f.size(); ++i) {
      auto x = parse_double(f[i]);
      if (!x) throw fail("malformed embedding value");
      r.embedding.push_back(*x);
    }
    if (dim == 0) dim = r.embedding.size();
    if (r.embedding.size() != dim) throw fail("embedding dimension differs from earlier records");
    if (!out.empty() && r.arrival_ms < out.back().arrival_ms) throw fail("arrival times decrease");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace aiedge
