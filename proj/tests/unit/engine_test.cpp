#include <gtest/gtest.h>

#include "aiedge/engine.hpp"

using namespace aiedge;

namespace {

TierSpec& tier(Scenario& sc, TierKind k) {
  for (auto& t : sc.tiers)
    if (t.kind == k) return t;
  throw std::out_of_range("tier");
}

Request request(std::uint64_t id, double t, std::uint32_t axis, std::uint32_t n_out, std::uint32_t dim = 64) {
  Request r;
  r.id = id;
  r.arrival_ms = t;
  r.prompt_tokens = 32;
  r.output_tokens = n_out;
  r.population_rank = axis + 1;
  r.prompt_key = prompt_key_for(axis + 1);
  r.embedding.assign(dim, 0.0);
  r.embedding[axis % dim] = 1.0;
  return r;
}

Scenario fixed_rtt_scenario() {
  Scenario sc;
  sc.engine.rtt_mode = RttMode::Midpoint;
  tier(sc, TierKind::NearRAN).rtt_ms = {2, 2};
  return sc;
}

void expect_causal(const RequestRecord& r) {
  if (r.rejected) return;
  ASSERT_EQ(r.timing.size(), r.plan.stages.size());
  double t = r.arrival_ms;
  for (std::size_t k = 0; k < r.timing.size(); ++k) {
    const auto& tm = r.timing[k];
    EXPECT_EQ(tm.start_ms, t);
    EXPECT_NEAR(tm.ready_ms - tm.start_ms, r.plan.stages[k].network_ms + r.plan.stages[k].lookup_ms, 1e-9);
    EXPECT_LE(tm.ready_ms, tm.compute_start_ms);
    EXPECT_LE(tm.compute_start_ms, tm.end_ms);
    if (r.plan.stages[k].latency_ms() > 0) {
      EXPECT_LT(tm.start_ms, tm.end_ms);
    }
    EXPECT_GE(tm.end_ms - tm.start_ms, r.plan.stages[k].latency_ms() - 1e-9);
    t = tm.end_ms;
  }
  EXPECT_EQ(r.end_ms, t);
}

}  // namespace

TEST(Percentile, NearestRank) {
  EXPECT_EQ(percentile({5}, 50), 5.0);
  EXPECT_EQ(percentile({1, 2, 3, 4}, 50), 2.0);
  EXPECT_EQ(percentile({4, 3, 2, 1}, 100), 4.0);
  EXPECT_EQ(percentile({4, 3, 2, 1}, 0), 1.0);
  EXPECT_EQ(percentile({10, 20, 30, 40, 50, 60, 70, 80, 90, 100}, 90), 90.0);
  EXPECT_EQ(percentile({10, 20, 30, 40, 50, 60, 70, 80, 90, 100}, 91), 100.0);
  EXPECT_THROW(percentile({}, 50), std::invalid_argument);
  EXPECT_THROW(percentile({1}, 101), std::invalid_argument);
}

TEST(SyncTicks, Schedule) {
  EXPECT_EQ(schedule_sync_ticks(1000, 3500), (std::vector<double>{1000, 2000, 3000}));
  EXPECT_EQ(schedule_sync_ticks(1000, 3000), (std::vector<double>{1000, 2000, 3000}));
  EXPECT_TRUE(schedule_sync_ticks(0, 3000).empty());
  EXPECT_TRUE(schedule_sync_ticks(5000, 3000).empty());
}

TEST(Engine, EmptyWorkload) {
  Scenario sc;
  const auto res = run(sc, {});
  EXPECT_TRUE(res.records.empty());
  EXPECT_EQ(res.report.overall.request_count, 0u);
  EXPECT_FALSE(res.report.overall.latency());
  EXPECT_FALSE(res.report.overall.semantic_hit_ratio());
}

TEST(Engine, SingleMissMatchesPlan) {
  const auto sc = fixed_rtt_scenario();
  const auto res = run(sc, {request(0, 0, 0, 10)});
  ASSERT_EQ(res.records.size(), 1u);
  const auto& r = res.records[0];
  EXPECT_EQ(r.total_ms(), 2 + 5 + 100 + 3500);
  EXPECT_EQ(r.plan.outcome, Outcome::Fallback);
  expect_causal(r);
}

TEST(Engine, FillAppliedOnCompletion) {
  const auto sc = fixed_rtt_scenario();
  const auto res = run(sc, {request(0, 0, 0, 10), request(1, 1000, 0, 10), request(2, 4000, 0, 10)});
  EXPECT_EQ(res.records[0].plan.outcome, Outcome::Fallback);
  EXPECT_EQ(res.records[1].plan.outcome, Outcome::Fallback);
  EXPECT_EQ(res.records[2].plan.outcome, Outcome::CacheHit);
  EXPECT_EQ(res.records[2].total_ms(), 7.0);
}

TEST(Engine, QueueingAddsServiceTime) {
  auto sc = fixed_rtt_scenario();
  sc.cache.enabled = false;
  sc.model.base_per_token_ms = 10.0;
  tier(sc, TierKind::Cloud).max_concurrent = 1;
  const auto res = run(sc, {request(0, 0, 0, 1), request(1, 0, 1, 1)});
  EXPECT_EQ(res.records[0].total_ms(), 100 + 10.0);
  EXPECT_EQ(res.records[1].total_ms(), 100 + 10.0 + 10.0);
  EXPECT_EQ(res.records[1].queue_ms(), 10.0);
  EXPECT_EQ(res.report.overall.queue_ms_total, 10.0);
  for (const auto& r : res.records) expect_causal(r);
}

TEST(Engine, BoundedQueueRejects) {
  auto sc = fixed_rtt_scenario();
  sc.cache.enabled = false;
  sc.engine.queue_cap = 1;
  tier(sc, TierKind::Cloud).max_concurrent = 1;
  std::vector<Request> reqs;
  for (std::uint64_t i = 0; i < 5; ++i) reqs.push_back(request(i, 0, static_cast<std::uint32_t>(i), 1));
  const auto res = run(sc, reqs);
  const auto& o = res.report.overall;
  EXPECT_EQ(o.completed_count, 2u);
  EXPECT_EQ(o.rejected_count, 3u);
  EXPECT_EQ(o.latencies_ms.size(), 2u);
  for (std::size_t i = 2; i < 5; ++i) {
    EXPECT_TRUE(res.records[i].rejected);
    EXPECT_EQ(res.records[i].end_ms, 100.0);
    EXPECT_EQ(res.records[i].timing.size(), 1u);
  }
}

TEST(Engine, Deterministic) {
  Scenario sc;
  sc.workload.duration_ms = 5000;
  const auto a = run(sc), b = run(sc);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].end_ms, b.records[i].end_ms);
    EXPECT_EQ(a.records[i].plan, b.records[i].plan);
  }
}

TEST(Engine, ConservationAndCausality) {
  for (auto kind : kAllArchitectures) {
    Scenario sc;
    sc.workload.duration_ms = 10000;
    sc.workload.rate_per_sec = 30;
    sc.workload.class_mix = {1, 1, 1};
    sc.engine.queue_cap = 8;
    sc.architecture.kind = kind;
    sc.architecture.rag_over_cdn.n_documents = 500;
    const auto res = run(sc);
    const auto& rep = res.report;
    const auto& o = rep.overall;
    EXPECT_EQ(o.request_count, res.records.size()) << to_string(kind);
    EXPECT_EQ(o.completed_count + o.rejected_count, o.request_count);
    std::uint64_t cls = 0, outc = 0, comp = 0;
    for (const auto& g : rep.by_class) cls += g.request_count;
    for (const auto& g : rep.by_outcome) {
      outc += g.request_count;
      comp += g.completed_count;
    }
    EXPECT_EQ(cls, o.request_count);
    EXPECT_EQ(outc, o.request_count);
    EXPECT_EQ(comp, o.completed_count);
    EXPECT_LE(o.semantic_hits, o.semantic_lookups);
    EXPECT_LE(o.prompt_hits, o.prompt_lookups);
    for (const auto& r : res.records) expect_causal(r);
  }
}

TEST(Engine, QueueingGrowsWithLoad) {
  double prev_queue = -1, prev_mean = -1;
  for (double rate : {2.0, 10.0, 16.0}) {
    Scenario sc;
    sc.workload.duration_ms = 60000;
    sc.workload.rate_per_sec = rate;
    sc.architecture.kind = ArchitectureKind::FullEdgeInference;
    tier(sc, TierKind::RegionalDC).max_concurrent = 2;
    const auto res = run(sc);
    const auto& o = res.report.overall;
    const double q = o.queue_ms_total / static_cast<double>(o.completed_count);
    const double mean = o.latency()->mean;
    EXPECT_GT(q, prev_queue) << rate;
    EXPECT_GT(mean, prev_mean) << rate;
    prev_queue = q;
    prev_mean = mean;
  }
}

TEST(Engine, SyncTicksAndCopies) {
  Scenario sc;
  sc.workload.duration_ms = 35000;
  sc.cache.sync_period_ms = 10000;
  sc.architecture.vector_cache_only.miss_mode = MissMode::ParentFetch;
  sc.architecture.vector_cache_only.generation_tier = TierKind::CoreDC;
  tier(sc, TierKind::NearRAN).vector_cache_capacity = 20;
  const auto res = run(sc);
  EXPECT_EQ(res.sync_tick_times, (std::vector<double>{10000, 20000, 30000}));
  EXPECT_EQ(res.report.sync_ticks, 3u);
  EXPECT_GT(res.report.sync_copies, 0u);
  sc.cache.enabled = false;
  EXPECT_EQ(run(sc).report.sync_ticks, 0u);
}

TEST(Engine, SyncHelpsEdgeHitRatio) {
  Scenario sc;
  sc.workload.duration_ms = 60000;
  sc.workload.cluster_noise_sigma = 0.05;
  sc.architecture.vector_cache_only.miss_mode = MissMode::ParentFetch;
  sc.architecture.vector_cache_only.generation_tier = TierKind::CoreDC;
  tier(sc, TierKind::NearRAN).vector_cache_capacity = 50;
  const double without = *run(sc).report.overall.semantic_hit_ratio();
  sc.cache.sync_period_ms = 1000;
  sc.cache.sync_top_n = 50;
  const double with = *run(sc).report.overall.semantic_hit_ratio();
  EXPECT_GE(with, without);
}

TEST(Engine, RejectsBadInput) {
  Scenario sc;
  EXPECT_THROW(run(sc, {request(0, 0, 0, 1, 8)}), std::invalid_argument);
  EXPECT_THROW(run(sc, {request(0, 5, 0, 1), request(1, 1, 0, 1)}), std::invalid_argument);
  auto r = request(0, 0, 0, 1);
  r.prompt_tokens = 0;
  EXPECT_THROW(run(sc, {r}), std::invalid_argument);
  sc.cache.similarity_threshold = 2;
  EXPECT_THROW(run(sc, {}), std::invalid_argument);
}

TEST(Metrics, RatiosAndSla) {
  GroupMetrics g;
  EXPECT_FALSE(g.early_exit_fraction());
  RequestRecord r;
  r.cls = WorkloadClass::UltraLow;
  r.end_ms = 12;
  r.plan.outcome = Outcome::EarlyExit;
  r.plan.semantic_lookup = true;
  g.add(r);
  r.end_ms = 8;
  r.plan.semantic_hit = true;
  g.add(r);
  EXPECT_EQ(*g.early_exit_fraction(), 1.0);
  EXPECT_EQ(*g.sla_violation_fraction(), 0.5);
  EXPECT_EQ(*g.semantic_hit_ratio(), 0.5);
  EXPECT_FALSE(g.prompt_hit_ratio());
  const auto l = *g.latency();
  EXPECT_EQ(l.mean, 10.0);
  EXPECT_EQ(l.p50, 8.0);
  EXPECT_EQ(l.max, 12.0);
}
