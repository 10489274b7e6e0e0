#pragma once

// Serialized forms of a run: the metrics document (JSON), one JSON line per
// request, a flat CSV for plotting and a fixed-width table for terminals.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiedge/engine.hpp"
#include "aiedge/format.hpp"

namespace aiedge {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline std::string opt_csv(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace detail

inline Json to_json(const GroupMetrics& g) {
  Json j;
  j["request_count"] = g.request_count;
  j["completed_count"] = g.completed_count;
  j["rejected_count"] = g.rejected_count;
  if (auto l = g.latency()) {
    j["latency_ms"] = {{"mean", l->mean}, {"p50", l->p50}, {"p90", l->p90}, {"p99", l->p99}, {"max", l->max}};
  } else {
    j["latency_ms"] = {{"mean", nullptr}, {"p50", nullptr}, {"p90", nullptr}, {"p99", nullptr}, {"max", nullptr}};
  }
  j["prompt_lookups"] = g.prompt_lookups;
  j["prompt_hit_ratio"] = detail::opt_json(g.prompt_hit_ratio());
  j["semantic_lookups"] = g.semantic_lookups;
  j["semantic_hit_ratio"] = detail::opt_json(g.semantic_hit_ratio());
  j["parent_hits"] = g.parent_hits;
  j["early_exit_fraction"] = detail::opt_json(g.early_exit_fraction());
  j["sla_violation_fraction"] = detail::opt_json(g.sla_violation_fraction());
  j["upstream_bytes_total"] = g.upstream_bytes_total;
  j["queue_ms_total"] = g.queue_ms_total;
  Json tiers = Json::object();
  for (auto t : kAllTiers) tiers[std::string(to_string(t))] = g.per_tier_compute_ms[tier_index(t)];
  j["per_tier_compute_ms"] = std::move(tiers);
  return j;
}

inline Json to_json(const MetricsReport& r) {
  Json j;
  j["scenario"] = r.scenario;
  j["architecture"] = to_string(r.architecture);
  j["caching_enabled"] = r.caching_enabled;
  j["seed"] = r.seed;
  j["overall"] = to_json(r.overall);
  Json by_class = Json::object();
  for (auto c : kAllClasses) by_class[std::string(to_string(c))] = to_json(r.by_class[class_index(c)]);
  j["by_class"] = std::move(by_class);
  Json by_outcome = Json::object();
  for (auto o : kAllOutcomes) by_outcome[std::string(to_string(o))] = to_json(r.by_outcome[static_cast<std::size_t>(o)]);
  j["by_outcome"] = std::move(by_outcome);
  j["sync"] = {{"ticks", r.sync_ticks}, {"copies", r.sync_copies}};
  return j;
}

inline Json to_json(const RequestRecord& r, ArchitectureKind arch) {
  Json j;
  j["id"] = r.id;
  j["class"] = to_string(r.cls);
  j["architecture"] = to_string(arch);
  j["outcome"] = r.rejected ? "rejected" : to_string(r.plan.outcome);
  j["arrival_ms"] = r.arrival_ms;
  j["end_ms"] = r.end_ms;
  j["total_ms"] = r.total_ms();
  j["sla_violated"] = r.sla_violated();
  j["upstream_bytes"] = r.plan.upstream_bytes();
  Json stages = Json::array();
  for (std::size_t i = 0; i < r.timing.size(); ++i) {
    const Stage& s = r.plan.stages[i];
    const StageTiming& t = r.timing[i];
    stages.push_back({{"label", s.label},
                      {"tier", to_string(s.tier)},
                      {"start_ms", t.start_ms},
                      {"end_ms", t.end_ms},
                      {"network_ms", s.network_ms},
                      {"lookup_ms", s.lookup_ms},
                      {"compute_ms", s.compute_ms},
                      {"queue_ms", t.queue_ms()},
                      {"upstream_bytes", s.upstream_bytes}});
  }
  j["stages"] = std::move(stages);
  if (!r.plan.retrieved_docs.empty()) j["retrieved_docs"] = r.plan.retrieved_docs;
  return j;
}

inline void write_metrics(std::ostream& os, const MetricsReport& r) { os << to_json(r).dump(2) << '\n'; }

inline void write_records(std::ostream& os, const std::vector<RequestRecord>& records, ArchitectureKind arch) {
  for (const auto& r : records) os << to_json(r, arch).dump() << '\n';
}

inline const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "request_count",      "completed_count",        "rejected_count",      "mean_ms",
      "p50_ms",             "p90_ms",                 "p99_ms",              "prompt_hit_ratio",
      "semantic_hit_ratio", "early_exit_fraction",    "sla_violation_fraction", "upstream_bytes_total"};
  return cols;
}

/// Values matching summary_columns(); empty strings stand for undefined values.
inline std::vector<std::string> summary_values(const GroupMetrics& g) {
  const auto l = g.latency();
  auto lat = [&](double LatencySummary::*f) { return l ? format_double((*l).*f) : std::string(); };
  return {std::to_string(g.request_count),
          std::to_string(g.completed_count),
          std::to_string(g.rejected_count),
          lat(&LatencySummary::mean),
          lat(&LatencySummary::p50),
          lat(&LatencySummary::p90),
          lat(&LatencySummary::p99),
          detail::opt_csv(g.prompt_hit_ratio()),
          detail::opt_csv(g.semantic_hit_ratio()),
          detail::opt_csv(g.early_exit_fraction()),
          detail::opt_csv(g.sla_violation_fraction()),
          std::to_string(g.upstream_bytes_total)};
}

/// One row for the whole run and one per workload class.
inline void write_summary_csv(std::ostream& os, const MetricsReport& r) {
  os << "architecture,group";
  for (const auto& c : summary_columns()) os << ',' << c;
  os << '\n';
  auto row = [&](std::string_view group, const GroupMetrics& g) {
    os << to_string(r.architecture) << ',' << group;
    for (const auto& v : summary_values(g)) os << ',' << v;
    os << '\n';
  };
  row("overall", r.overall);
  for (auto c : kAllClasses) row(to_string(c), r.by_class[class_index(c)]);
}

/// Human-readable per-class table.
inline void print_summary_table(std::ostream& os, const MetricsReport& r) {
  char buf[256];
  os << "scenario " << r.scenario << " | architecture " << to_string(r.architecture)
     << (r.caching_enabled ? "" : " (caching disabled)") << " | seed " << r.seed << '\n';
  std::snprintf(buf, sizeof buf, "%-17s %7s %10s %10s %10s %10s %8s %8s %8s\n", "class", "count", "mean_ms",
                "p50_ms", "p90_ms", "p99_ms", "prompt%", "sem%", "sla_viol%");
  os << buf;
  auto pct = [](const std::optional<double>& v) { return v ? *v * 100.0 : -1.0; };
  auto row = [&](std::string_view name, const GroupMetrics& g) {
    const auto l = g.latency();
    std::string cells[4];
    const double vals[4] = {l ? l->mean : 0, l ? l->p50 : 0, l ? l->p90 : 0, l ? l->p99 : 0};
    for (int i = 0; i < 4; ++i) {
      char c[32];
      if (l) std::snprintf(c, sizeof c, "%.2f", vals[i]);
      else std::snprintf(c, sizeof c, "-");
      cells[i] = c;
    }
    auto ratio = [&](const std::optional<double>& v) {
      char c[32];
      if (v) std::snprintf(c, sizeof c, "%.1f", pct(v));
      else std::snprintf(c, sizeof c, "-");
      return std::string(c);
    };
    std::snprintf(buf, sizeof buf, "%-17.*s %7llu %10s %10s %10s %10s %8s %8s %8s\n", static_cast<int>(name.size()),
                  name.data(), static_cast<unsigned long long>(g.request_count), cells[0].c_str(), cells[1].c_str(),
                  cells[2].c_str(), cells[3].c_str(), ratio(g.prompt_hit_ratio()).c_str(),
                  ratio(g.semantic_hit_ratio()).c_str(), ratio(g.sla_violation_fraction()).c_str());
    os << buf;
  };
  for (auto c : kAllClasses)
    if (r.by_class[class_index(c)].request_count > 0) row(to_string(c), r.by_class[class_index(c)]);
  row("overall", r.overall);
}

/// Final cache contents, one line per entry, for every tier and cache type.
inline void write_cache_dump(std::ostream& os, const CacheSet& caches) {
  os << "tier,kind,entry_id,origin,hit_count,inserted_at_ms\n";
  for (auto t : kAllTiers) {
    if (const PromptCache* p = caches.prompt(t)) dump_entries(os, to_string(t), "prompt", p->entries());
    if (const SemanticCache* s = caches.semantic(t)) dump_entries(os, to_string(t), "semantic", s->entries());
  }
}

}  // namespace aiedge
