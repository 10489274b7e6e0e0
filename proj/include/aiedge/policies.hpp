#pragma once

// Deployment architectures as routing policies.
//
// Each policy turns a request plus the current topology and cache state into
// an ExecutionPlan: an ordered list of latency-bearing stages and an outcome.
// Policies look caches up immediately (refreshing recency on hits) but never
// insert; the inserts a plan wants are listed in `fills` and applied by the
// engine when the request completes.

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aiedge/latency_model.hpp"
#include "aiedge/semantic_cache.hpp"
#include "aiedge/topology.hpp"
#include "aiedge/vector_index.hpp"
#include "aiedge/workload.hpp"

namespace aiedge {

enum class ArchitectureKind { VectorCacheOnly, SplitInference, FullEdgeInference, RagOverCdn };

inline constexpr std::array<ArchitectureKind, 4> kAllArchitectures = {
    ArchitectureKind::VectorCacheOnly, ArchitectureKind::SplitInference,
    ArchitectureKind::FullEdgeInference, ArchitectureKind::RagOverCdn};

inline std::string_view to_string(ArchitectureKind k) {
  switch (k) {
    case ArchitectureKind::VectorCacheOnly: return "vector_cache_only";
    case ArchitectureKind::SplitInference: return "split_inference";
    case ArchitectureKind::FullEdgeInference: return "full_edge";
    case ArchitectureKind::RagOverCdn: return "rag_over_cdn";
  }
  throw std::invalid_argument("unknown architecture");
}

inline std::optional<ArchitectureKind> parse_architecture(std::string_view s) {
  for (auto k : kAllArchitectures)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

enum class Outcome { CacheHit, EarlyExit, Fallback, FullGeneration, RagGeneration };

inline constexpr std::array<Outcome, 5> kAllOutcomes = {Outcome::CacheHit, Outcome::EarlyExit,
                                                        Outcome::Fallback, Outcome::FullGeneration,
                                                        Outcome::RagGeneration};

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::CacheHit: return "cache_hit";
    case Outcome::EarlyExit: return "early_exit";
    case Outcome::Fallback: return "fallback";
    case Outcome::FullGeneration: return "full_generation";
    case Outcome::RagGeneration: return "rag_generation";
  }
  throw std::invalid_argument("unknown outcome");
}

/// Bytes on the wire per transmitted embedding component or token.
inline constexpr std::uint64_t kBytesPerValue = 4;

struct Stage {
  std::string label;
  TierKind tier = TierKind::Cloud;
  double network_ms = 0.0;  ///< pure delay, no capacity
  double lookup_ms = 0.0;   ///< cache/index lookup, no capacity
  double compute_ms = 0.0;  ///< occupies one of the tier's concurrent slots
  std::uint64_t upstream_bytes = 0;

  double latency_ms() const { return network_ms + lookup_ms + compute_ms; }
  bool operator==(const Stage&) const = default;
};

struct CacheFill {
  TierKind tier;
  bool prompt = false;
  bool semantic = false;
  bool operator==(const CacheFill&) const = default;
};

struct ExecutionPlan {
  std::vector<Stage> stages;
  Outcome outcome = Outcome::FullGeneration;
  std::vector<CacheFill> fills;
  std::vector<std::uint64_t> retrieved_docs;
  bool prompt_lookup = false;
  bool prompt_hit = false;
  bool semantic_lookup = false;
  bool semantic_hit = false;
  bool parent_hit = false;

  double total_ms() const {
    double t = 0.0;
    for (const auto& s : stages) t += s.latency_ms();
    return t;
  }

  std::uint64_t upstream_bytes() const {
    std::uint64_t b = 0;
    for (const auto& s : stages) b += s.upstream_bytes;
    return b;
  }

  LatencyBreakdown breakdown() const {
    double c = 0.0, n = 0.0, l = 0.0;
    for (const auto& s : stages) {
      c += s.compute_ms;
      n += s.network_ms;
      l += s.lookup_ms;
    }
    return LatencyBreakdown::make(c, n, l);
  }

  bool operator==(const ExecutionPlan&) const = default;
};

// ---------------------------------------------------------------------------
// Architecture parameters

enum class MissMode { CloudGenerate, ParentFetch };

inline std::string_view to_string(MissMode m) {
  return m == MissMode::CloudGenerate ? "cloud_generate" : "parent_fetch";
}

inline std::optional<MissMode> parse_miss_mode(std::string_view s) {
  if (s == "cloud_generate") return MissMode::CloudGenerate;
  if (s == "parent_fetch") return MissMode::ParentFetch;
  return std::nullopt;
}

struct VectorCacheOnlyParams {
  TierKind edge_tier = TierKind::NearRAN;
  MissMode miss_mode = MissMode::CloudGenerate;
  TierKind generation_tier = TierKind::Cloud;
  bool operator==(const VectorCacheOnlyParams&) const = default;
};

enum class EncoderMode { Flat, LayerFraction };

inline std::string_view to_string(EncoderMode m) {
  return m == EncoderMode::Flat ? "flat" : "layer_fraction";
}

inline std::optional<EncoderMode> parse_encoder_mode(std::string_view s) {
  if (s == "flat") return EncoderMode::Flat;
  if (s == "layer_fraction") return EncoderMode::LayerFraction;
  return std::nullopt;
}

struct SplitInferenceParams {
  double confidence_threshold = 0.5;
  double edge_encoder_ms = 25.0;
  EncoderMode encoder_mode = EncoderMode::Flat;
  std::uint32_t encoder_layers = 6;
  std::uint32_t decoder_layers = 18;
  TierKind edge_tier = TierKind::MEC;
  TierKind fallback_tier = TierKind::RegionalDC;
  /// 0 gives i.i.d. uniform confidences; larger values make popular prompts more confident.
  double confidence_rank_bias = 0.0;
  /// Check the edge semantic cache before forwarding low-confidence requests.
  bool hybrid_cache = true;
  bool operator==(const SplitInferenceParams&) const = default;
};

/// LLaMA-2-7B class model, calibrated to 50 ms/token at FP32 (11.25 ms at INT4).
inline ModelProfile edge_llm_profile() {
  return {"llama2-7b", 32, 128, 32, 7'000'000'000ULL, Precision::INT4, 50.0};
}

struct FullEdgeParams {
  TierKind edge_tier = TierKind::RegionalDC;
  ModelProfile model = edge_llm_profile();
  HardwareProfile hardware{"l4", 1.21e14, 3e11};
  bool operator==(const FullEdgeParams&) const = default;
};

struct RagParams {
  std::uint32_t k = 10;
  TierKind embed_tier = TierKind::MEC;
  double embed_ms = 3.0;
  TierKind retrieval_tier = TierKind::MEC;
  double retrieval_ms = 8.0;
  TierKind generation_tier = TierKind::CoreDC;
  std::uint32_t per_doc_tokens = 128;
  std::uint64_t n_documents = 5000;
  double doc_noise_sigma = 0.03;
  bool operator==(const RagParams&) const = default;
};

struct ArchitectureConfig {
  ArchitectureKind kind = ArchitectureKind::VectorCacheOnly;
  VectorCacheOnlyParams vector_cache_only;
  SplitInferenceParams split_inference;
  FullEdgeParams full_edge;
  RagParams rag_over_cdn;

  /// Checks parameter ranges and that every tier the active policy uses exists.
  void validate(const Topology& topo) const {
    auto need = [&](TierKind t, const char* key) {
      if (!topo.contains(t))
        throw std::invalid_argument(std::string(key) + ": tier '" + std::string(to_string(t)) +
                                    "' is not defined in the topology");
    };
    switch (kind) {
      case ArchitectureKind::VectorCacheOnly:
        need(vector_cache_only.edge_tier, "architecture.vector_cache_only.edge_tier");
        need(vector_cache_only.generation_tier, "architecture.vector_cache_only.generation_tier");
        break;
      case ArchitectureKind::SplitInference: {
        const auto& p = split_inference;
        if (!(p.confidence_threshold >= 0.0 && p.confidence_threshold <= 1.0))
          throw std::invalid_argument("architecture.split_inference.confidence_threshold must lie in [0, 1]");
        if (!(p.edge_encoder_ms >= 0.0))
          throw std::invalid_argument("architecture.split_inference.edge_encoder_ms must be >= 0");
        if (p.encoder_layers + p.decoder_layers == 0)
          throw std::invalid_argument("architecture.split_inference.encoder_layers + decoder_layers must be >= 1");
        if (!(p.confidence_rank_bias >= 0.0))
          throw std::invalid_argument("architecture.split_inference.confidence_rank_bias must be >= 0");
        need(p.edge_tier, "architecture.split_inference.edge_tier");
        need(p.fallback_tier, "architecture.split_inference.fallback_tier");
        break;
      }
      case ArchitectureKind::FullEdgeInference:
        need(full_edge.edge_tier, "architecture.full_edge.edge_tier");
        try {
          full_edge.model.validate();
          full_edge.hardware.validate();
        } catch (const std::invalid_argument& e) {
          throw std::invalid_argument(std::string("architecture.full_edge.") + e.what());
        }
        break;
      case ArchitectureKind::RagOverCdn: {
        const auto& p = rag_over_cdn;
        if (p.k == 0) throw std::invalid_argument("architecture.rag_over_cdn.k must be >= 1");
        if (p.n_documents == 0)
          throw std::invalid_argument("architecture.rag_over_cdn.n_documents must be >= 1");
        if (!(p.embed_ms >= 0.0) || !(p.retrieval_ms >= 0.0))
          throw std::invalid_argument("architecture.rag_over_cdn latencies must be >= 0");
        if (!(p.doc_noise_sigma >= 0.0))
          throw std::invalid_argument("architecture.rag_over_cdn.doc_noise_sigma must be >= 0");
        need(p.embed_tier, "architecture.rag_over_cdn.embed_tier");
        need(p.retrieval_tier, "architecture.rag_over_cdn.retrieval_tier");
        need(p.generation_tier, "architecture.rag_over_cdn.generation_tier");
        break;
      }
    }
  }

  bool operator==(const ArchitectureConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Planning context

/// Prompt and semantic caches for every tier; null where a tier has none.
class CacheSet {
 public:
  CacheSet() = default;

  CacheSet(const Topology& topo, std::uint32_t dim, const SemanticCacheConfig& base) {
    for (const auto& t : topo.tiers()) {
      const auto i = tier_index(t.kind);
      if (t.prompt_cache_capacity > 0) prompt_[i] = std::make_unique<PromptCache>(t.prompt_cache_capacity);
      if (t.vector_cache_capacity > 0) {
        SemanticCacheConfig cfg = base;
        cfg.capacity = t.vector_cache_capacity;
        semantic_[i] = std::make_unique<SemanticCache>(dim, cfg, static_cast<std::uint64_t>(i) + 1);
      }
    }
  }

  PromptCache* prompt(TierKind k) const { return prompt_[tier_index(k)].get(); }
  SemanticCache* semantic(TierKind k) const { return semantic_[tier_index(k)].get(); }

 private:
  std::array<std::unique_ptr<PromptCache>, kTierCount> prompt_;
  std::array<std::unique_ptr<SemanticCache>, kTierCount> semantic_;
};

struct PlanContext {
  const Topology& topo;
  const CacheSet& caches;
  const ModelProfile& model;  ///< model served at upstream generation tiers
  const QuantizationTable& quant;
  const RttSample& rtt;
  double similarity_threshold = 0.85;
  bool caching_enabled = true;
};

/// Deterministic per-request confidence in [0, 1).
struct ConfidenceSource {
  std::uint64_t seed = 0;
  double rank_bias = 0.0;
  std::uint64_t n_prompts = 1;

  double operator()(const Request& r) const {
    double u = Rng::stream(seed, "confidence", r.id).uniform01();
    if (rank_bias > 0.0) {
      const double rel = static_cast<double>(r.population_rank - 1) / static_cast<double>(n_prompts);
      u = std::pow(u, 1.0 + rank_bias * rel);
    }
    return u;
  }
};

namespace detail {

inline Stage network_stage(std::string label, TierKind tier, double ms, std::uint64_t bytes = 0) {
  Stage s;
  s.label = std::move(label);
  s.tier = tier;
  s.network_ms = ms;
  s.upstream_bytes = bytes;
  return s;
}

inline Stage lookup_stage(std::string label, TierKind tier, double ms) {
  Stage s;
  s.label = std::move(label);
  s.tier = tier;
  s.lookup_ms = ms;
  return s;
}

inline Stage compute_stage(std::string label, TierKind tier, double ms) {
  Stage s;
  s.label = std::move(label);
  s.tier = tier;
  s.compute_ms = ms;
  return s;
}

inline double upstream_generation_ms(const PlanContext& ctx, TierKind tier, const Request& req,
                                     std::uint64_t n_ctx) {
  return generation_latency_ms(ctx.model, ctx.topo.tier(tier).hardware, req.output_tokens, n_ctx, ctx.quant);
}

inline std::uint64_t embedding_bytes(const Request& req) { return req.embedding.size() * kBytesPerValue; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Policies

/// Edge vector cache with no local inference. On a miss the response is
/// produced upstream and cached at the edge on completion. With caching
/// disabled every request goes straight to the generation tier (cloud-only
/// baseline).
inline ExecutionPlan plan_vector_cache_only(const Request& req, const PlanContext& ctx,
                                            const VectorCacheOnlyParams& p) {
  using namespace detail;
  ExecutionPlan plan;
  const TierKind edge = p.edge_tier;
  const TierKind gen = p.generation_tier;

  auto generate_at_origin = [&] {
    plan.stages.push_back(network_stage("origin_rtt", gen, ctx.rtt[gen], req.prompt_tokens * kBytesPerValue));
    plan.stages.push_back(compute_stage("generate", gen, upstream_generation_ms(ctx, gen, req, req.prompt_tokens)));
  };

  if (!ctx.caching_enabled) {
    generate_at_origin();
    plan.outcome = Outcome::FullGeneration;
    return plan;
  }

  plan.stages.push_back(network_stage("edge_rtt", edge, ctx.rtt[edge]));
  const TierSpec& edge_spec = ctx.topo.tier(edge);

  if (PromptCache* pc = ctx.caches.prompt(edge)) {
    plan.prompt_lookup = true;
    plan.stages.push_back(lookup_stage("prompt_lookup", edge, edge_spec.prompt_lookup_ms));
    if (pc->lookup(req.prompt_key, req.arrival_ms)) {
      plan.prompt_hit = true;
      plan.outcome = Outcome::CacheHit;
      return plan;
    }
  }
  if (SemanticCache* sc = ctx.caches.semantic(edge)) {
    plan.semantic_lookup = true;
    plan.stages.push_back(lookup_stage("vector_lookup", edge, edge_spec.vector_lookup_ms));
    if (sc->lookup(req.embedding, ctx.similarity_threshold, req.arrival_ms)) {
      plan.semantic_hit = true;
      plan.outcome = Outcome::CacheHit;
      return plan;
    }
  }

  plan.outcome = Outcome::Fallback;
  const auto parent = ctx.topo.parent(edge);
  SemanticCache* parent_cache = parent && *parent != gen && *parent < gen ? ctx.caches.semantic(*parent) : nullptr;
  if (p.miss_mode == MissMode::ParentFetch && parent_cache) {
    const TierSpec& ps = ctx.topo.tier(*parent);
    Stage s = network_stage("parent_lookup", *parent, ctx.topo.path_latency_ms(edge, *parent, ctx.rtt),
                            embedding_bytes(req));
    s.lookup_ms = ps.vector_lookup_ms;
    plan.stages.push_back(std::move(s));
    plan.fills.push_back({edge, ctx.caches.prompt(edge) != nullptr, ctx.caches.semantic(edge) != nullptr});
    if (parent_cache->lookup(req.embedding, ctx.similarity_threshold, req.arrival_ms)) {
      plan.parent_hit = true;
      plan.outcome = Outcome::CacheHit;
      return plan;
    }
    plan.stages.push_back(network_stage("origin_fetch", gen, ctx.topo.path_latency_ms(*parent, gen, ctx.rtt),
                                        req.prompt_tokens * kBytesPerValue));
    plan.stages.push_back(compute_stage("generate", gen, upstream_generation_ms(ctx, gen, req, req.prompt_tokens)));
    for (TierKind t : ctx.topo.path_between(*parent, gen))
      if (t != gen && (ctx.caches.prompt(t) || ctx.caches.semantic(t)))
        plan.fills.push_back({t, ctx.caches.prompt(t) != nullptr, ctx.caches.semantic(t) != nullptr});
    return plan;
  }

  generate_at_origin();
  plan.fills.push_back({edge, ctx.caches.prompt(edge) != nullptr, ctx.caches.semantic(edge) != nullptr});
  return plan;
}

/// Edge encoder latency for the configured mode.
inline double edge_encoder_latency_ms(const Request& req, const PlanContext& ctx, const SplitInferenceParams& p) {
  if (p.encoder_mode == EncoderMode::Flat) return p.edge_encoder_ms;
  const double fraction =
      static_cast<double>(p.encoder_layers) / static_cast<double>(p.encoder_layers + p.decoder_layers);
  const auto& hw = ctx.topo.tier(p.edge_tier).hardware;
  return fraction * compute_bound_per_token_ms(ctx.model, hw, req.prompt_tokens) *
         quantization_multiplier(ctx.model.precision, ctx.quant);
}

/// Edge encoder with early exit: confident requests answer locally, the rest
/// check the edge cache (hybrid mode) and are then forwarded upstream as
/// embeddings.
inline ExecutionPlan plan_split_inference(const Request& req, const PlanContext& ctx,
                                          const SplitInferenceParams& p, double confidence) {
  using namespace detail;
  ExecutionPlan plan;
  const TierKind edge = p.edge_tier;
  plan.stages.push_back(network_stage("edge_rtt", edge, ctx.rtt[edge]));
  plan.stages.push_back(compute_stage("edge_encoder", edge, edge_encoder_latency_ms(req, ctx, p)));
  if (confidence >= p.confidence_threshold) {
    plan.outcome = Outcome::EarlyExit;
    return plan;
  }
  SemanticCache* sc = ctx.caching_enabled && p.hybrid_cache ? ctx.caches.semantic(edge) : nullptr;
  if (sc) {
    plan.semantic_lookup = true;
    plan.stages.push_back(lookup_stage("vector_lookup", edge, ctx.topo.tier(edge).vector_lookup_ms));
    if (sc->lookup(req.embedding, ctx.similarity_threshold, req.arrival_ms)) {
      plan.semantic_hit = true;
      plan.outcome = Outcome::CacheHit;
      return plan;
    }
    plan.fills.push_back({edge, false, true});
  }
  const TierKind fb = p.fallback_tier;
  plan.stages.push_back(
      network_stage("forward", fb, ctx.topo.path_latency_ms(edge, fb, ctx.rtt), embedding_bytes(req)));
  plan.stages.push_back(compute_stage("generate", fb, upstream_generation_ms(ctx, fb, req, req.prompt_tokens)));
  plan.outcome = Outcome::Fallback;
  return plan;
}

/// Whole model on the edge tier's own accelerator; nothing leaves the edge.
inline ExecutionPlan plan_full_edge(const Request& req, const PlanContext& ctx, const FullEdgeParams& p) {
  using namespace detail;
  ExecutionPlan plan;
  plan.stages.push_back(network_stage("edge_rtt", p.edge_tier, ctx.rtt[p.edge_tier]));
  plan.stages.push_back(compute_stage(
      "generate", p.edge_tier,
      generation_latency_ms(p.model, p.hardware, req.output_tokens, req.prompt_tokens, ctx.quant)));
  plan.outcome = Outcome::FullGeneration;
  return plan;
}

/// Retrieval-augmented generation split across tiers: embed at the edge,
/// retrieve top-k documents at the CDN tier, ship them to the generation tier
/// and generate with the enlarged context.
inline ExecutionPlan plan_rag_over_cdn(const Request& req, const PlanContext& ctx, const RagParams& p,
                                       const VectorIndex& documents) {
  using namespace detail;
  if (documents.empty()) throw std::invalid_argument("plan_rag_over_cdn: document index is empty");
  ExecutionPlan plan;

  Stage embed = network_stage("embed", p.embed_tier, ctx.rtt[p.embed_tier]);
  embed.compute_ms = p.embed_ms;
  plan.stages.push_back(std::move(embed));

  const double to_retriever = ctx.topo.path_latency_ms(p.embed_tier, p.retrieval_tier, ctx.rtt);
  Stage retrieve = network_stage("retrieve", p.retrieval_tier, to_retriever,
                                 p.embed_tier == p.retrieval_tier ? 0 : embedding_bytes(req));
  retrieve.lookup_ms = p.retrieval_ms;
  plan.stages.push_back(std::move(retrieve));
  for (const auto& n : documents.query(req.embedding, p.k)) plan.retrieved_docs.push_back(n.id);

  const std::uint64_t doc_tokens = plan.retrieved_docs.size() * std::uint64_t{p.per_doc_tokens};
  plan.stages.push_back(network_stage("transfer", p.generation_tier,
                                      ctx.topo.path_latency_ms(p.retrieval_tier, p.generation_tier, ctx.rtt),
                                      doc_tokens * kBytesPerValue));
  plan.stages.push_back(compute_stage(
      "generate", p.generation_tier,
      upstream_generation_ms(ctx, p.generation_tier, req, req.prompt_tokens + doc_tokens)));
  plan.outcome = Outcome::RagGeneration;
  return plan;
}

inline ExecutionPlan dispatch(const Request& req, const ArchitectureConfig& arch, const PlanContext& ctx,
                              const ConfidenceSource& confidence, const VectorIndex* documents) {
  switch (arch.kind) {
    case ArchitectureKind::VectorCacheOnly:
      return plan_vector_cache_only(req, ctx, arch.vector_cache_only);
    case ArchitectureKind::SplitInference:
      return plan_split_inference(req, ctx, arch.split_inference, confidence(req));
    case ArchitectureKind::FullEdgeInference:
      return plan_full_edge(req, ctx, arch.full_edge);
    case ArchitectureKind::RagOverCdn:
      if (!documents) throw std::invalid_argument("dispatch: rag_over_cdn requires a document index");
      return plan_rag_over_cdn(req, ctx, arch.rag_over_cdn, *documents);
  }
  throw std::invalid_argument("dispatch: unknown architecture");
}

/// Document corpus for retrieval: embeddings clustered around the workload's
/// cluster centres, one cluster per document in round-robin order.
inline VectorIndex build_document_index(std::uint64_t seed, const WorkloadParams& w, const RagParams& p,
                                        AnnMode mode, const AnnParams& ann) {
  VectorIndex index(w.embedding_dim, mode, ann);
  const auto centers = cluster_centers(seed, w.n_clusters, w.embedding_dim);
  Rng rng = Rng::stream(seed, "documents");
  for (std::uint64_t j = 0; j < p.n_documents; ++j)
    index.add(j, noisy_embedding(centers[j % w.n_clusters], p.doc_noise_sigma, rng));
  return index;
}

}  // namespace aiedge
