#pragma once

// Discrete-event simulation of requests flowing through an architecture.
//
// Each request is planned on arrival, then walks its stages in order. Within
// a stage the network and lookup delays elapse first (no capacity limits);
// the compute part then needs one of the tier's max_concurrent slots and
// waits in a per-tier FIFO queue when all are busy. Events are processed in
// (time, seq) order, so a run is a pure function of the scenario and seed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "aiedge/policies.hpp"
#include "aiedge/scenario.hpp"

namespace aiedge {

/// Nearest-rank percentile of `samples` (need not be sorted), p in [0, 100].
inline double percentile(std::vector<double> samples, double p) {
  if (samples.empty()) throw std::invalid_argument("percentile: empty sample list");
  if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile: p must lie in [0, 100]");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  return samples[rank - 1];
}

/// Sync tick times period, 2*period, ... up to and including `horizon_ms`.
/// A period of 0 disables synchronization.
inline std::vector<double> schedule_sync_ticks(double period_ms, double horizon_ms) {
  std::vector<double> ticks;
  if (!(period_ms > 0.0)) return ticks;
  for (std::uint64_t k = 1;; ++k) {
    const double t = static_cast<double>(k) * period_ms;
    if (t > horizon_ms) break;
    ticks.push_back(t);
  }
  return ticks;
}

struct StageTiming {
  double start_ms = 0.0;
  double ready_ms = 0.0;          ///< network and lookup delays elapsed
  double compute_start_ms = 0.0;  ///< when a slot was granted
  double end_ms = 0.0;
  double queue_ms() const { return compute_start_ms - ready_ms; }
};

struct RequestRecord {
  std::uint64_t id = 0;
  WorkloadClass cls = WorkloadClass::UltraLow;
  double arrival_ms = 0.0;
  double end_ms = 0.0;
  bool rejected = false;
  ExecutionPlan plan;
  std::vector<StageTiming> timing;  ///< one per started stage

  double total_ms() const { return end_ms - arrival_ms; }
  bool sla_violated() const { return !rejected && total_ms() > sla_upper_ms(cls); }
  double queue_ms() const {
    double q = 0.0;
    for (const auto& t : timing) q += t.queue_ms();
    return q;
  }
};

struct LatencySummary {
  double mean = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

/// Counters and latency samples for one group of requests.
struct GroupMetrics {
  std::uint64_t request_count = 0;
  std::uint64_t completed_count = 0;
  std::uint64_t rejected_count = 0;
  std::vector<double> latencies_ms;  ///< completed requests only, in completion order of ids
  std::uint64_t prompt_lookups = 0;
  std::uint64_t prompt_hits = 0;
  std::uint64_t semantic_lookups = 0;
  std::uint64_t semantic_hits = 0;
  std::uint64_t parent_hits = 0;
  std::uint64_t early_exits = 0;
  std::uint64_t sla_violations = 0;
  std::uint64_t upstream_bytes_total = 0;
  double queue_ms_total = 0.0;
  std::array<double, kTierCount> per_tier_compute_ms{};

  void add(const RequestRecord& r) {
    ++request_count;
    const auto& p = r.plan;
    prompt_lookups += p.prompt_lookup;
    prompt_hits += p.prompt_hit;
    semantic_lookups += p.semantic_lookup;
    semantic_hits += p.semantic_hit;
    parent_hits += p.parent_hit;
    queue_ms_total += r.queue_ms();
    for (std::size_t i = 0; i < r.timing.size(); ++i)
      per_tier_compute_ms[tier_index(p.stages[i].tier)] += p.stages[i].compute_ms;
    if (r.rejected) {
      ++rejected_count;
      return;
    }
    ++completed_count;
    latencies_ms.push_back(r.total_ms());
    early_exits += p.outcome == Outcome::EarlyExit;
    sla_violations += r.sla_violated();
    upstream_bytes_total += p.upstream_bytes();
  }

  std::optional<LatencySummary> latency() const {
    if (latencies_ms.empty()) return std::nullopt;
    std::vector<double> s = latencies_ms;
    std::sort(s.begin(), s.end());
    double sum = 0.0;
    for (double x : s) sum += x;
    return LatencySummary{sum / static_cast<double>(s.size()), percentile(s, 50), percentile(s, 90),
                          percentile(s, 99), s.back()};
  }

  static std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  }

  std::optional<double> prompt_hit_ratio() const { return ratio(prompt_hits, prompt_lookups); }
  std::optional<double> semantic_hit_ratio() const { return ratio(semantic_hits, semantic_lookups); }
  std::optional<double> early_exit_fraction() const { return ratio(early_exits, completed_count); }
  std::optional<double> sla_violation_fraction() const { return ratio(sla_violations, completed_count); }
};

struct MetricsReport {
  std::string scenario;
  ArchitectureKind architecture = ArchitectureKind::VectorCacheOnly;
  bool caching_enabled = true;
  std::uint64_t seed = 0;
  GroupMetrics overall;
  std::array<GroupMetrics, 3> by_class;
  std::array<GroupMetrics, kAllOutcomes.size()> by_outcome;
  std::uint64_t sync_ticks = 0;
  std::uint64_t sync_copies = 0;
};

struct RunResult {
  MetricsReport report;
  std::vector<RequestRecord> records;  ///< ordered by request id
  std::vector<double> sync_tick_times;
  CacheSet caches;  ///< final cache state
};

namespace detail {

enum class EventKind : std::uint8_t { Arrival, ComputeReady, StageComplete, SyncTick };

struct Event {
  double time_ms;
  std::uint64_t seq;
  EventKind kind;
  std::size_t target;  ///< request index, or tick index for SyncTick

  bool operator>(const Event& o) const {
    if (time_ms != o.time_ms) return time_ms > o.time_ms;
    return seq > o.seq;
  }
};

inline std::uint64_t fill_origin(std::uint64_t seed, std::uint64_t request_id) {
  return mix64(seed ^ mix64(request_id + 0x9E3779B97F4A7C15ULL)) | 1ULL;
}

class Simulation {
 public:
  Simulation(const Scenario& sc, Topology topo, std::vector<Request> requests)
      : sc_(sc),
        topo_(std::move(topo)),
        requests_(std::move(requests)),
        caches_(topo_, sc.workload.embedding_dim, sc.cache.semantic_config(0)) {
    if (sc_.architecture.kind == ArchitectureKind::RagOverCdn)
      documents_.emplace(build_document_index(sc_.seed, sc_.workload, sc_.architecture.rag_over_cdn,
                                              sc_.cache.ann_mode, sc_.cache.ann));
    for (std::size_t i = 0; i < kTierCount; ++i) busy_[i] = 0;
  }

  RunResult run() {
    records_.resize(requests_.size());
    for (std::size_t i = 0; i < requests_.size(); ++i) push(requests_[i].arrival_ms, EventKind::Arrival, i);
    double horizon = sc_.workload.duration_ms;
    if (!requests_.empty()) horizon = std::max(horizon, requests_.back().arrival_ms);
    ticks_ = sc_.cache.enabled ? schedule_sync_ticks(sc_.cache.sync_period_ms, horizon) : std::vector<double>{};
    for (std::size_t k = 0; k < ticks_.size(); ++k) push(ticks_[k], EventKind::SyncTick, k);

    while (!events_.empty()) {
      const Event ev = events_.top();
      events_.pop();
      now_ = ev.time_ms;
      switch (ev.kind) {
        case EventKind::Arrival: on_arrival(ev.target); break;
        case EventKind::ComputeReady: on_compute_ready(ev.target); break;
        case EventKind::StageComplete: on_stage_complete(ev.target); break;
        case EventKind::SyncTick: on_sync_tick(); break;
      }
    }

    RunResult out;
    auto& rep = out.report;
    rep.scenario = sc_.name;
    rep.architecture = sc_.architecture.kind;
    rep.caching_enabled = sc_.cache.enabled;
    rep.seed = sc_.seed;
    rep.sync_ticks = ticks_.size();
    rep.sync_copies = sync_copies_;
    for (const auto& r : records_) {
      rep.overall.add(r);
      rep.by_class[class_index(r.cls)].add(r);
      rep.by_outcome[static_cast<std::size_t>(r.plan.outcome)].add(r);
    }
    out.records = std::move(records_);
    out.sync_tick_times = std::move(ticks_);
    out.caches = std::move(caches_);
    return out;
  }

 private:
  void push(double t, EventKind kind, std::size_t target) { events_.push(Event{t, seq_++, kind, target}); }

  void on_arrival(std::size_t i) {
    const Request& req = requests_[i];
    Rng rtt_rng = Rng::stream(sc_.seed, "rtt", req.id);
    const RttSample rtt = topo_.sample_rtts(rtt_rng, sc_.engine.rtt_mode);
    const PlanContext ctx{topo_,          caches_, sc_.model, sc_.quantization, rtt,
                          sc_.cache.similarity_threshold, sc_.cache.enabled};
    const ConfidenceSource conf{sc_.seed, sc_.architecture.split_inference.confidence_rank_bias,
                                sc_.workload.n_prompts};
    RequestRecord& rec = records_[i];
    rec.id = req.id;
    rec.cls = req.cls;
    rec.arrival_ms = req.arrival_ms;
    rec.plan = dispatch(req, sc_.architecture, ctx, conf, documents_ ? &*documents_ : nullptr);
    for (const auto& s : rec.plan.stages)
      if (!topo_.contains(s.tier)) throw std::logic_error("plan references a tier outside the topology");
    start_stage(i);
  }

  void start_stage(std::size_t i) {
    RequestRecord& rec = records_[i];
    const std::size_t k = rec.timing.size();
    if (k == rec.plan.stages.size()) {
      finish(i);
      return;
    }
    const Stage& s = rec.plan.stages[k];
    rec.timing.push_back({now_, now_, now_, now_});
    push(now_ + s.network_ms + s.lookup_ms, EventKind::ComputeReady, i);
  }

  void on_compute_ready(std::size_t i) {
    RequestRecord& rec = records_[i];
    const Stage& s = rec.plan.stages[rec.timing.size() - 1];
    rec.timing.back().ready_ms = now_;
    if (s.compute_ms <= 0.0) {
      rec.timing.back().compute_start_ms = now_;
      on_stage_complete(i);
      return;
    }
    const std::size_t t = tier_index(s.tier);
    if (busy_[t] < topo_.tier(s.tier).max_concurrent) {
      grant(i);
      return;
    }
    if (sc_.engine.queue_cap > 0 && waiting_[t].size() >= sc_.engine.queue_cap) {
      rec.rejected = true;
      rec.end_ms = now_;
      rec.timing.pop_back();
      return;
    }
    waiting_[t].push_back(i);
  }

  void grant(std::size_t i) {
    RequestRecord& rec = records_[i];
    const Stage& s = rec.plan.stages[rec.timing.size() - 1];
    ++busy_[tier_index(s.tier)];
    rec.timing.back().compute_start_ms = now_;
    push(now_ + s.compute_ms, EventKind::StageComplete, i);
  }

  void on_stage_complete(std::size_t i) {
    RequestRecord& rec = records_[i];
    const Stage& s = rec.plan.stages[rec.timing.size() - 1];
    rec.timing.back().end_ms = now_;
    if (s.compute_ms > 0.0) {
      const std::size_t t = tier_index(s.tier);
      --busy_[t];
      if (!waiting_[t].empty()) {
        const std::size_t next = waiting_[t].front();
        waiting_[t].pop_front();
        grant(next);
      }
    }
    start_stage(i);
  }

  void finish(std::size_t i) {
    RequestRecord& rec = records_[i];
    rec.end_ms = now_;
    const Request& req = requests_[i];
    const std::uint64_t origin = fill_origin(sc_.seed, req.id);
    for (const CacheFill& f : rec.plan.fills) {
      if (f.prompt)
        if (PromptCache* pc = caches_.prompt(f.tier)) pc->insert(req.prompt_key, req.output_tokens, now_);
      if (f.semantic)
        if (SemanticCache* sc = caches_.semantic(f.tier))
          sc->insert(req.embedding, req.output_tokens, now_, origin);
    }
  }

  void on_sync_tick() {
    const auto& tiers = topo_.tiers();
    for (std::size_t i = tiers.size(); i-- > 1;) {
      const TierKind parent = tiers[i].kind;
      const TierKind child = tiers[i - 1].kind;
      if (SemanticCache* c = caches_.semantic(child))
        if (const SemanticCache* p = caches_.semantic(parent))
          sync_copies_ += sync_from_parent(*c, *p, sc_.cache.sync_top_n, now_);
      if (PromptCache* c = caches_.prompt(child))
        if (const PromptCache* p = caches_.prompt(parent))
          sync_copies_ += sync_from_parent(*c, *p, sc_.cache.sync_top_n, now_);
    }
  }

  const Scenario& sc_;
  Topology topo_;
  std::vector<Request> requests_;
  CacheSet caches_;
  std::optional<VectorIndex> documents_;
  std::vector<RequestRecord> records_;
  std::vector<double> ticks_;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::array<std::uint64_t, kTierCount> busy_{};
  std::array<std::deque<std::size_t>, kTierCount> waiting_;
  std::uint64_t seq_ = 0;
  std::uint64_t sync_copies_ = 0;
  double now_ = 0.0;
};

}  // namespace detail

/// Simulates `requests` (sorted by arrival, embedding_dim wide) under `sc`.
inline RunResult run(const Scenario& sc, std::vector<Request> requests) {
  Topology topo = sc.validate();
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const Request& r = requests[i];
    if (r.embedding.size() != sc.workload.embedding_dim)
      throw std::invalid_argument("request " + std::to_string(r.id) + ": embedding dimension mismatch");
    if (!(r.arrival_ms >= 0.0)) throw std::invalid_argument("request " + std::to_string(r.id) + ": negative arrival");
    if (r.prompt_tokens == 0) throw std::invalid_argument("request " + std::to_string(r.id) + ": prompt_tokens must be >= 1");
    if (i > 0 && r.arrival_ms < requests[i - 1].arrival_ms)
      throw std::invalid_argument("requests must be sorted by arrival time");
  }
  return detail::Simulation(sc, std::move(topo), std::move(requests)).run();
}

/// Generates the scenario's workload from its seed and simulates it.
inline RunResult run(const Scenario& sc) {
  sc.validate();
  return run(sc, generate_stream(sc.seed, sc.workload));
}

}  // namespace aiedge
