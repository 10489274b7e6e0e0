// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aiedge/aiedge.hpp"

using namespace aiedge;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = AIEDGE_SCENARIO_DIR;

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Embedding random_unit(Rng& rng, std::uint32_t dim) {
  Embedding v(dim);
  for (double& x : v) x = rng.normal();
  normalize(v);
  return v;
}

std::vector<fs::path> bundled_scenarios() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kScenarios))
    if (e.path().extension() == ".yaml") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// 1 -------------------------------------------------------------------------
Verdict flops_identities() {
  Verdict v;
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const auto n = rng.uniform_int(0, 32768), d = rng.uniform_int(1, 512), h = rng.uniform_int(1, 128),
               layers = rng.uniform_int(1, 128);
    const ModelProfile m{"r", static_cast<std::uint32_t>(layers), static_cast<std::uint32_t>(d),
                         static_cast<std::uint32_t>(h), 1, Precision::FP32, std::nullopt};
    const FlopCount per_head = attention_flops_per_head(n, d);
    const FlopCount mh = multihead_flops(n, d, h);
    if (mh != static_cast<FlopCount>(h) * per_head || model_forward_flops(m, n) != static_cast<FlopCount>(layers) * mh) {
      v.check(false, "identity broken at tuple " + std::to_string(i));
      break;
    }
  }
  const FlopCount gpt3 = model_forward_flops(gpt3_profile(), 2048);
  v.check(gpt3 == FlopCount{9'895'604'649'984ULL}, "GPT-3 point = " + to_string(gpt3));
  v.check(gpt3 >= FlopCount{10'000'000'000ULL} * 100 && gpt3 < FlopCount{100'000'000'000'000ULL},
          "GPT-3 point outside trillions range");
  v.detail = v.pass ? "GPT-3 forward = " + to_string(gpt3) : v.detail;
  return v;
}

// 2 -------------------------------------------------------------------------
Verdict memory_bound_anchor() {
  Verdict v;
  auto m = gpt3_profile();
  m.precision = Precision::INT8;  // 175e9 parameters at one byte each
  const double ms = memory_bound_per_token_ms(m, {"hbm", 1e15, 1.6e12});
  v.check(ms == 109.375, "got " + fmt("%.17g", ms));
  v.check(ms >= 100.0 && ms <= 200.0, "outside 100-200 ms/token");
  if (v.pass) v.detail = fmt("%.3f ms/token", ms);
  return v;
}

// 3 -------------------------------------------------------------------------
Verdict semantic_cache_oracle() {
  Verdict v;
  const std::uint32_t dim = 64;
  std::size_t decisions = 0, discrepancies = 0, hits = 0;
  for (std::uint64_t state = 0; state < 100; ++state) {
    Rng rng = Rng::stream(3000 + state, "acceptance");
    const std::uint64_t capacity = rng.uniform_int(1, 10000);
    const std::uint64_t inserts = rng.uniform_int(0, capacity + capacity / 4);
    SemanticCacheConfig cfg;
    cfg.capacity = capacity;
    cfg.similarity_threshold = rng.uniform(0.1, 0.5);
    SemanticCache cache(dim, cfg);
    // Queries near a centre tend to hit; uniform random queries tend to miss.
    std::vector<Embedding> centers;
    for (int c = 0; c < 50; ++c) centers.push_back(random_unit(rng, dim));
    for (std::uint64_t i = 0; i < inserts; ++i)
      cache.insert(noisy_embedding(centers[rng.uniform_int(0, 49)], 0.15, rng), 1, static_cast<double>(i));

    for (int q = 0; q < 100; ++q) {
      const Embedding query =
          rng.uniform01() < 0.5 ? noisy_embedding(centers[rng.uniform_int(0, 49)], 0.15, rng) : random_unit(rng, dim);
      std::vector<Neighbor> truth;
      for (const auto& e : cache.entries()) truth.push_back({e.id, dot(query, cache.embedding(e.id))});
      std::sort(truth.begin(), truth.end(), neighbor_before);
      const std::size_t k = 10;
      std::vector<Neighbor> top(truth.begin(), truth.begin() + static_cast<std::ptrdiff_t>(std::min(k, truth.size())));
      const bool expect_hit = !truth.empty() && truth.front().similarity >= cfg.similarity_threshold;
      if (cache.query(query, k) != top) ++discrepancies;
      const auto hit = cache.lookup(query, 1e9);
      hits += expect_hit;
      if (hit.has_value() != expect_hit || (hit && hit->entry.id != truth.front().id)) ++discrepancies;
      decisions += 2;
    }
  }
  v.check(discrepancies == 0, std::to_string(discrepancies) + " discrepancies");
  if (v.pass)
    v.detail = std::to_string(decisions) + " decisions and rankings (" + std::to_string(hits) + " hits), 0 discrepancies";
  return v;
}

// 4 -------------------------------------------------------------------------
Verdict ann_recall() {
  Verdict v;
  const std::uint32_t dim = 64;
  const std::size_t n = 10000, queries = 100, k = 10;
  Rng rng(404);
  AnnParams params;
  params.m = 16;
  params.ef = 64;
  VectorIndex approx(dim, AnnMode::Approximate, params), exact(dim);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto e = random_unit(rng, dim);
    approx.add(i, e);
    exact.add(i, e);
  }
  double found = 0, seconds = 0;
  for (std::size_t q = 0; q < queries; ++q) {
    const auto query = random_unit(rng, dim);
    std::set<std::uint64_t> truth;
    for (const auto& nb : exact.query(query, k)) truth.insert(nb.id);
    const auto t0 = std::chrono::steady_clock::now();
    const auto got = approx.query(query, k);
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& nb : got) found += static_cast<double>(truth.count(nb.id));
  }
  const double recall = found / static_cast<double>(queries * k);
  const double ms_per_query = 1000.0 * seconds / static_cast<double>(queries);
  v.check(recall >= 0.95, "recall@10 " + fmt("%.3f", recall) + " < 0.95");
  v.check(ms_per_query < 5.0, fmt("%.3f ms/query", ms_per_query));
  v.detail = "recall@10 " + fmt("%.3f", recall) + ", " + fmt("%.3f", ms_per_query) + " ms/query" +
             (v.pass ? "" : " (" + v.detail + ")");
  return v;
}

// 5 -------------------------------------------------------------------------
Verdict lru_oracle() {
  Verdict v;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = Rng::stream(seed, "lru");
    const std::size_t cap = rng.uniform_int(1, 256);
    LruMap<std::uint64_t, std::uint64_t> lru(cap);
    std::list<std::uint64_t> ref;  // MRU at the front
    std::vector<std::uint64_t> got, want;
    for (int op = 0; op < 10000; ++op) {
      const std::uint64_t key = rng.uniform_int(0, 2 * cap);
      const auto it = std::find(ref.begin(), ref.end(), key);
      if (rng.uniform01() < 0.3) {
        lru.touch(key);
        if (it != ref.end()) ref.splice(ref.begin(), ref, it);
        continue;
      }
      if (auto ev = lru.put(key, op)) got.push_back(ev->first);
      if (it != ref.end()) {
        ref.splice(ref.begin(), ref, it);
      } else {
        if (ref.size() == cap) {
          want.push_back(ref.back());
          ref.pop_back();
        }
        ref.push_front(key);
      }
    }
    if (got != want) v.check(false, "eviction order differs for seed " + std::to_string(seed));
  }
  if (v.pass) v.detail = "10 sequences of 10000 operations";
  return v;
}

// 6 -------------------------------------------------------------------------
Verdict hit_ratio_band() {
  Verdict v;
  const auto zipf = run(parse_scenario(kScenarios / "zipf_semantic.yaml"));
  const double hit = zipf.report.overall.semantic_hit_ratio().value_or(-1);
  v.check(hit >= 0.60 && hit <= 0.90, "semantic hit ratio " + fmt("%.3f", hit));

  auto sc = parse_scenario(kScenarios / "prompt_cache.yaml");
  const double cached = run(sc).report.overall.latency()->mean;
  sc.cache.enabled = false;
  const double uncached = run(sc).report.overall.latency()->mean;
  const double reduction = 1.0 - cached / uncached;
  v.check(reduction >= 0.80, "mean-latency reduction " + fmt("%.3f", reduction));
  if (v.pass) v.detail = "semantic hit ratio " + fmt("%.3f", hit) + ", prompt-cache reduction " + fmt("%.3f", reduction);
  return v;
}

// 7 -------------------------------------------------------------------------
Verdict architecture_ordering() {
  Verdict v;
  auto sc = parse_scenario(kScenarios / "ultralow.yaml");
  sc.architecture.kind = ArchitectureKind::VectorCacheOnly;
  sc.architecture.vector_cache_only.edge_tier = TierKind::NearRAN;
  const auto vco = run(sc);
  auto split_sc = sc;
  split_sc.architecture.kind = ArchitectureKind::SplitInference;
  split_sc.architecture.split_inference.confidence_threshold = 0.5;
  const auto split = run(split_sc);
  auto cloud_sc = sc;
  cloud_sc.cache.enabled = false;
  const auto cloud = run(cloud_sc);

  const double a = vco.report.overall.latency()->p50, b = split.report.overall.latency()->p50,
               c = cloud.report.overall.latency()->p50;
  v.check(a < b && b < c, "p50 order " + fmt("%.2f", a) + " / " + fmt("%.2f", b) + " / " + fmt("%.2f", c));
  const auto& hits = vco.report.by_outcome[static_cast<std::size_t>(Outcome::CacheHit)];
  const double hit_share = static_cast<double>(hits.completed_count) /
                           static_cast<double>(std::max<std::uint64_t>(vco.report.overall.completed_count, 1));
  v.check(hit_share > 0.5, "vector-cache run not hit-dominant (" + fmt("%.3f", hit_share) + ")");
  const double hit_p99 = hits.latency() ? hits.latency()->p99 : INFINITY;
  v.check(hit_p99 <= 10.0, "hit-path p99 " + fmt("%.2f", hit_p99));
  if (v.pass)
    v.detail = "p50 " + fmt("%.2f", a) + " < " + fmt("%.2f", b) + " < " + fmt("%.2f", c) + " ms; hit p99 " +
               fmt("%.2f", hit_p99) + " ms";
  return v;
}

// 8 -------------------------------------------------------------------------
Verdict split_monotonicity() {
  Verdict v;
  const auto spec = parse_sweep(kScenarios / "sweeps" / "confidence.yaml");
  std::vector<double> thetas, fractions, means;
  for (const auto& p : spec.points) {
    const auto res = run(p.scenario);
    thetas.push_back(p.scenario.architecture.split_inference.confidence_threshold);
    fractions.push_back(res.report.overall.early_exit_fraction().value_or(-1));
    means.push_back(res.report.overall.latency()->mean);
  }
  v.check(thetas == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0}, "sweep does not cover 0..1 in steps of 0.25");
  for (std::size_t i = 1; i < fractions.size(); ++i) {
    v.check(fractions[i] <= fractions[i - 1], "early-exit fraction rises at theta " + fmt("%.2f", thetas[i]));
    v.check(means[i] >= means[i - 1], "mean latency falls at theta " + fmt("%.2f", thetas[i]));
  }
  if (!fractions.empty()) {
    v.check(fractions.front() == 1.0, "theta=0 fraction " + fmt("%.3f", fractions.front()));
    v.check(fractions.back() == 0.0, "theta=1 fraction " + fmt("%.3f", fractions.back()));
  }
  if (v.pass) {
    v.detail = "early-exit";
    for (double f : fractions) v.detail += " " + fmt("%.3f", f);
  }
  return v;
}

// 9 -------------------------------------------------------------------------
Verdict threshold_monotonicity() {
  Verdict v;
  const auto spec = parse_sweep(kScenarios / "sweeps" / "threshold.yaml");
  std::vector<double> taus, ratios;
  for (const auto& p : spec.points) {
    taus.push_back(p.scenario.cache.similarity_threshold);
    ratios.push_back(run(p.scenario).report.overall.semantic_hit_ratio().value_or(-1));
  }
  v.check(taus == std::vector<double>{0.7, 0.8, 0.9}, "sweep does not cover 0.7, 0.8, 0.9");
  for (std::size_t i = 1; i < ratios.size(); ++i)
    v.check(ratios[i] <= ratios[i - 1], "hit ratio rises at tau " + fmt("%.2f", taus[i]));
  if (v.pass) {
    v.detail = "hit ratio";
    for (double r : ratios) v.detail += " " + fmt("%.3f", r);
  }
  return v;
}

// 10 ------------------------------------------------------------------------
Verdict determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "aiedge_acceptance_determinism";
  fs::remove_all(root);
  std::size_t checked = 0;
  for (const auto& path : bundled_scenarios()) {
    const auto sc = parse_scenario(path);
    std::string bytes[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path dir = root / (path.stem().string() + "_" + std::to_string(i));
      const auto a = write_artifacts(run(sc), sc.output, dir);
      bytes[i] = detail::read_file(a.metrics) + '\0' + detail::read_file(a.records);
    }
    v.check(fnv1a(bytes[0]) == fnv1a(bytes[1]) && bytes[0] == bytes[1], path.filename().string() + " differs");
    ++checked;
  }
  fs::remove_all(root);
  if (v.pass) v.detail = std::to_string(checked) + " scenarios byte-identical";
  return v;
}

// 11 ------------------------------------------------------------------------
void check_group(Verdict& v, const std::string& where, const GroupMetrics& g) {
  v.check(g.request_count == g.completed_count + g.rejected_count, where + ": counts do not add up");
  for (const auto& r : {g.prompt_hit_ratio(), g.semantic_hit_ratio(), g.early_exit_fraction(), g.sla_violation_fraction()})
    if (r) v.check(*r >= 0.0 && *r <= 1.0, where + ": ratio outside [0, 1]");
  if (const auto l = g.latency()) v.check(l->p50 <= l->p90 && l->p90 <= l->p99, where + ": percentiles out of order");
}

Verdict conservation() {
  Verdict v;
  std::size_t checked = 0;
  for (const auto& path : bundled_scenarios()) {
    const auto res = run(parse_scenario(path));
    const auto& rep = res.report;
    const std::string name = path.stem().string();
    check_group(v, name + " overall", rep.overall);
    std::uint64_t total = 0;
    for (auto c : kAllClasses) {
      check_group(v, name + " " + std::string(to_string(c)), rep.by_class[class_index(c)]);
      total += rep.by_class[class_index(c)].request_count;
    }
    for (auto o : kAllOutcomes) check_group(v, name + " " + std::string(to_string(o)), rep.by_outcome[static_cast<std::size_t>(o)]);
    v.check(total == rep.overall.request_count, name + ": class counts do not sum to the total");
    v.check(rep.overall.request_count == res.records.size(), name + ": record count mismatch");
    ++checked;
  }
  if (v.pass) v.detail = std::to_string(checked) + " scenarios";
  return v;
}

// 12 ------------------------------------------------------------------------
Verdict rag_structure() {
  Verdict v;
  const auto res = run(parse_scenario(kScenarios / "rag_cdn.yaml"));
  const std::vector<std::string> expected{"embed", "retrieve", "transfer", "generate"};
  double worst_retrieval = 0;
  for (const auto& r : res.records) {
    std::vector<std::string> labels;
    for (const auto& s : r.plan.stages) labels.push_back(s.label);
    if (labels != expected) {
      v.check(false, "request " + std::to_string(r.id) + " has a different stage list");
      break;
    }
    worst_retrieval = std::max(worst_retrieval, r.plan.stages[1].latency_ms());
  }
  v.check(!res.records.empty(), "no requests");
  v.check(worst_retrieval <= 10.0, "retrieval stage " + fmt("%.2f", worst_retrieval) + " ms");

  Scenario def;
  def.architecture.kind = ArchitectureKind::RagOverCdn;
  def.workload.duration_ms = 2000;
  const auto d = run(def);
  for (const auto& r : d.records) v.check(r.plan.stages.size() == 4 && r.plan.stages[1].latency_ms() <= 10.0, "default retrieval");
  if (v.pass)
    v.detail = std::to_string(res.records.size()) + " plans, max retrieval " + fmt("%.2f", worst_retrieval) + " ms";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"flops identities", flops_identities},
      {"memory-bound anchor", memory_bound_anchor},
      {"semantic cache oracle equivalence", semantic_cache_oracle},
      {"ANN recall", ann_recall},
      {"LRU oracle", lru_oracle},
      {"hit-ratio band", hit_ratio_band},
      {"architecture latency ordering", architecture_ordering},
      {"split-inference monotonicity", split_monotonicity},
      {"threshold monotonicity", threshold_monotonicity},
      {"determinism", determinism},
      {"conservation and report sanity", conservation},
      {"RAG flow structure", rag_structure},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += !v.pass;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
