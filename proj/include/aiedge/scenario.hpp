#pragma once

// Complete description of one simulation run. Plain data plus range checks;
// reading and writing the YAML form lives in config.hpp.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "aiedge/latency_model.hpp"
#include "aiedge/policies.hpp"
#include "aiedge/semantic_cache.hpp"
#include "aiedge/topology.hpp"
#include "aiedge/workload.hpp"

namespace aiedge {

struct CacheSettings {
  bool enabled = true;
  double similarity_threshold = 0.85;
  AnnMode ann_mode = AnnMode::Exact;
  AnnParams ann;
  double sync_period_ms = 0.0;  ///< 0 disables synchronization
  std::uint64_t sync_top_n = 100;

  SemanticCacheConfig semantic_config(std::uint64_t capacity) const {
    return {similarity_threshold, capacity, ann_mode, ann};
  }

  bool operator==(const CacheSettings&) const = default;
};

struct EngineSettings {
  RttMode rtt_mode = RttMode::Uniform;
  std::uint64_t queue_cap = 0;  ///< per-tier waiting requests; 0 is unbounded
  bool operator==(const EngineSettings&) const = default;
};

struct OutputSettings {
  std::string dir = "out";
  std::string metrics = "metrics.json";
  std::string records = "requests.jsonl";
  std::string summary = "summary.csv";
  std::string cache_dump;  ///< empty disables the dump
  bool operator==(const OutputSettings&) const = default;
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 42;
  std::vector<TierSpec> tiers = default_tiers();
  ModelProfile model = gpt3_profile();
  QuantizationTable quantization;
  WorkloadParams workload;
  ArchitectureConfig architecture;
  CacheSettings cache;
  EngineSettings engine;
  OutputSettings output;

  /// Validates every section and returns the built topology.
  Topology validate() const {
    Topology topo = Topology::build(tiers);
    model.validate();
    quantization.validate();
    workload.validate();
    architecture.validate(topo);
    if (!(cache.similarity_threshold >= -1.0 && cache.similarity_threshold <= 1.0))
      throw std::invalid_argument("cache.similarity_threshold must lie in [-1, 1]");
    if (cache.ann.m < 2) throw std::invalid_argument("cache.ann.m must be >= 2");
    if (cache.ann.ef == 0) throw std::invalid_argument("cache.ann.ef must be >= 1");
    if (cache.ann.ef_construction == 0) throw std::invalid_argument("cache.ann.ef_construction must be >= 1");
    if (!(cache.sync_period_ms >= 0.0)) throw std::invalid_argument("cache.sync_period_ms must be >= 0");
    if (output.metrics.empty() || output.records.empty() || output.summary.empty())
      throw std::invalid_argument("output file names must be non-empty");
    return topo;
  }

  bool operator==(const Scenario&) const = default;
};

}  // namespace aiedge
