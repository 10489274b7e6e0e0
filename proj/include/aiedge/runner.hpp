#pragma once

// Runs scenarios and sweeps and writes their artifacts to disk.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aiedge/config.hpp"
#include "aiedge/engine.hpp"
#include "aiedge/report.hpp"

namespace aiedge {

/// Output problems (unwritable paths); distinct from configuration errors.
class RuntimeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError("cannot write '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw RuntimeError("failed writing '" + path.string() + "'");
}

template <class F>
std::string render(F&& f) {
  std::ostringstream ss;
  f(ss);
  return ss.str();
}

}  // namespace detail

struct RunArtifacts {
  std::filesystem::path metrics;
  std::filesystem::path records;
  std::filesystem::path summary;
  std::filesystem::path cache_dump;  ///< empty when not requested
};

/// Writes metrics, per-request records, the summary CSV and (optionally) the
/// cache dump of `result` under `dir`.
inline RunArtifacts write_artifacts(const RunResult& result, const OutputSettings& out,
                                    const std::filesystem::path& dir) {
  RunArtifacts a{dir / out.metrics, dir / out.records, dir / out.summary, {}};
  const auto& rep = result.report;
  detail::write_file(a.metrics, detail::render([&](std::ostream& os) { write_metrics(os, rep); }));
  detail::write_file(a.records,
                     detail::render([&](std::ostream& os) { write_records(os, result.records, rep.architecture); }));
  detail::write_file(a.summary, detail::render([&](std::ostream& os) { write_summary_csv(os, rep); }));
  if (!out.cache_dump.empty()) {
    a.cache_dump = dir / out.cache_dump;
    detail::write_file(a.cache_dump, detail::render([&](std::ostream& os) { write_cache_dump(os, result.caches); }));
  }
  return a;
}

/// Simulates `sc`, writes its artifacts to `dir` (the scenario's own output
/// directory when empty) and prints the summary table to `table`.
inline RunResult run_scenario(const Scenario& sc, const std::filesystem::path& dir = {},
                              std::ostream* table = nullptr) {
  RunResult r = run(sc);
  write_artifacts(r, sc.output, dir.empty() ? std::filesystem::path(sc.output.dir) : dir);
  if (table) print_summary_table(*table, r.report);
  return r;
}

struct SweepResult {
  std::vector<std::string> labels;
  std::vector<MetricsReport> reports;
};

inline Json sweep_comparison(const SweepSpec& spec, const SweepResult& res) {
  Json j;
  j["sweep"] = spec.name;
  j["parameter"] = spec.parameter;
  Json rows = Json::array();
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    Json row;
    row["point"] = i;
    row["value"] = spec.points[i].value;
    row["architecture"] = to_string(res.reports[i].architecture);
    row["overall"] = to_json(res.reports[i].overall);
    rows.push_back(std::move(row));
  }
  j["points"] = std::move(rows);
  return j;
}

inline void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const SweepResult& res) {
  os << "point,parameter,value,architecture";
  for (const auto& c : summary_columns()) os << ',' << c;
  os << '\n';
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    std::string value = spec.points[i].value;
    if (value.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char ch : value) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      value = q + "\"";
    }
    os << i << ',' << spec.parameter << ',' << value << ',' << to_string(res.reports[i].architecture);
    for (const auto& v : summary_values(res.reports[i].overall)) os << ',' << v;
    os << '\n';
  }
}

/// Runs every point of the sweep with its own engine, writing each point's
/// artifacts to `dir/point_NNN` and the comparison files to `dir`.
inline SweepResult run_sweep(const SweepSpec& spec, const std::filesystem::path& dir,
                             std::ostream* table = nullptr) {
  SweepResult res;
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    const auto& p = spec.points[i];
    char name[32];
    std::snprintf(name, sizeof name, "point_%03zu", i);
    RunResult r;
    try {
      r = run(p.scenario);
      write_artifacts(r, p.scenario.output, dir / name);
    } catch (const std::exception& e) {
      throw RuntimeError("sweep point " + std::to_string(i) + " (" + p.label + "): " + e.what());
    }
    if (table) {
      *table << "[" << i << "] " << p.label << '\n';
      print_summary_table(*table, r.report);
    }
    res.labels.push_back(p.label);
    res.reports.push_back(std::move(r.report));
  }
  detail::write_file(dir / "comparison.json", sweep_comparison(spec, res).dump(2) + "\n");
  detail::write_file(dir / "sweep.csv", detail::render([&](std::ostream& os) { write_sweep_csv(os, spec, res); }));
  return res;
}

}  // namespace aiedge
