#pragma once

// YAML scenario and sweep files.
//
// Parsing is strict: unknown keys, wrong types and out-of-range values are
// errors that name the dotted key and its line. Omitted keys take the
// defaults of the Scenario struct; tier entries inherit the defaults of the
// default tier of the same kind. Numbers are read and written as shortest
// round-trip decimals, so serialize -> parse reproduces a scenario exactly.

#include <yaml-cpp/yaml.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aiedge/format.hpp"
#include "aiedge/scenario.hpp"

namespace aiedge {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message)
      : std::runtime_error(compose(key, line, message)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  /// 1-based line of the offending key, or 0 when unknown.
  int line() const noexcept { return line_; }

 private:
  static std::string compose(const std::string& key, int line, const std::string& message) {
    std::string s = "config error";
    if (line > 0) s += " at line " + std::to_string(line);
    if (!key.empty()) s += ", key '" + key + "'";
    return s + ": " + message;
  }

  std::string key_;
  int line_;
};

namespace detail {

inline int line_of(const YAML::Node& n) {
  const auto m = n.Mark();
  return m.line >= 0 ? m.line + 1 : 0;
}

inline std::string join_path(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

template <class Enum, std::size_t N>
std::string list_names(const std::array<Enum, N>& all) {
  std::string s;
  for (auto e : all) {
    if (!s.empty()) s += ", ";
    s += to_string(e);
  }
  return s;
}

/// Records the line of every key it reads so later validation errors can
/// point back into the file.
class ConfigReader {
 public:
  std::map<std::string, int> lines;

  [[noreturn]] void fail(const std::string& key, const YAML::Node& n, const std::string& msg) const {
    throw ConfigError(key, line_of(n), msg);
  }

  /// A mapping section; `done()` rejects keys that were never consumed.
  class Section {
   public:
    Section(ConfigReader& r, YAML::Node node, std::string path) : r_(r), node_(node), path_(std::move(path)) {
      if (!node_.IsMap()) r_.fail(path_, node_, "expected a mapping");
      r_.lines[path_] = line_of(node_);
    }

    const std::string& path() const { return path_; }
    const YAML::Node& node() const { return node_; }

    std::optional<YAML::Node> get(std::string_view key) {
      used_.insert(std::string(key));
      YAML::Node v = node_[std::string(key)];
      if (!v) return std::nullopt;
      r_.lines[join_path(path_, key)] = line_of(v);
      return v;
    }

    YAML::Node require(std::string_view key) {
      auto v = get(key);
      if (!v) r_.fail(join_path(path_, key), node_, "missing required key");
      return *v;
    }

    std::optional<Section> section(std::string_view key) {
      auto v = get(key);
      if (!v) return std::nullopt;
      return Section(r_, *v, join_path(path_, key));
    }

    std::string scalar(const YAML::Node& v, std::string_view key) {
      if (!v.IsScalar()) r_.fail(join_path(path_, key), v, "expected a scalar value");
      return v.Scalar();
    }

    void opt_double(std::string_view key, double& out) {
      if (auto v = get(key)) out = to_double(*v, join_path(path_, key));
    }

    template <class UInt>
    void opt_uint(std::string_view key, UInt& out) {
      if (auto v = get(key)) out = to_uint<UInt>(*v, join_path(path_, key));
    }

    void opt_bool(std::string_view key, bool& out) {
      if (auto v = get(key)) {
        const std::string s = scalar(*v, key);
        if (s == "true") out = true;
        else if (s == "false") out = false;
        else r_.fail(join_path(path_, key), *v, "expected true or false, got '" + s + "'");
      }
    }

    void opt_string(std::string_view key, std::string& out) {
      if (auto v = get(key)) out = scalar(*v, key);
    }

    template <class Enum, class Parser>
    void opt_enum(std::string_view key, Enum& out, Parser parse, const std::string& valid) {
      if (auto v = get(key)) {
        const std::string s = scalar(*v, key);
        auto e = parse(s);
        if (!e) r_.fail(join_path(path_, key), *v, "unknown value '" + s + "'; valid values: " + valid);
        out = *e;
      }
    }

    double to_double(const YAML::Node& v, const std::string& full) {
      if (!v.IsScalar()) r_.fail(full, v, "expected a number");
      auto d = parse_double(v.Scalar());
      if (!d) r_.fail(full, v, "expected a number, got '" + v.Scalar() + "'");
      return *d;
    }

    template <class UInt>
    UInt to_uint(const YAML::Node& v, const std::string& full) {
      if (!v.IsScalar()) r_.fail(full, v, "expected a non-negative integer");
      const std::string& s = v.Scalar();
      std::optional<std::uint64_t> u;
      if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) u = parse_u64(std::string_view(s).substr(2), 16);
      else u = parse_u64(s);
      if (!u || *u > std::numeric_limits<UInt>::max())
        r_.fail(full, v, "expected a non-negative integer, got '" + s + "'");
      return static_cast<UInt>(*u);
    }

    void done() const {
      for (const auto& kv : node_) {
        const std::string k = kv.first.Scalar();
        if (!used_.count(k)) r_.fail(join_path(path_, k), kv.first, "unknown key");
      }
    }

   private:
    ConfigReader& r_;
    YAML::Node node_;
    std::string path_;
    std::set<std::string> used_;
  };

  void hardware_into(Section s, HardwareProfile& h) {
    s.opt_string("name", h.name);
    s.opt_double("flops_per_sec", h.flops_per_sec);
    s.opt_double("mem_bandwidth_bytes_per_sec", h.mem_bandwidth_bytes_per_sec);
    s.done();
  }

  void model_into(Section s, ModelProfile& m) {
    s.opt_string("name", m.name);
    s.opt_uint("heads", m.heads);
    s.opt_uint("embed_dim", m.embed_dim);
    s.opt_uint("layers", m.layers);
    s.opt_uint("param_count", m.param_count);
    s.opt_enum("precision", m.precision, parse_precision, "fp32, fp16, int8, int4");
    if (auto v = s.get("base_per_token_ms")) {
      if (v->IsNull()) m.base_per_token_ms.reset();
      else m.base_per_token_ms = s.to_double(*v, join_path(s.path(), "base_per_token_ms"));
    }
    s.done();
  }

  void token_range(Section& s, std::string_view key, TokenRange& out) {
    auto v = s.get(key);
    if (!v) return;
    const std::string full = join_path(s.path(), key);
    if (!v->IsSequence() || v->size() != 2) fail(full, *v, "expected [lo, hi]");
    out.lo = s.to_uint<std::uint32_t>((*v)[0], full);
    out.hi = s.to_uint<std::uint32_t>((*v)[1], full);
  }

  TierSpec tier(const YAML::Node& n, const std::string& path) {
    Section s(*this, n, path);
    TierSpec t;
    TierKind kind{};
    const YAML::Node kn = s.require("kind");
    const std::string ks = s.scalar(kn, "kind");
    auto k = parse_tier_kind(ks);
    if (!k) fail(path + ".kind", kn, "unknown tier '" + ks + "'; valid values: " + list_names(kAllTiers));
    kind = *k;
    for (const auto& d : default_tiers())
      if (d.kind == kind) t = d;
    t.kind = kind;
    if (auto v = s.get("rtt_ms")) {
      if (!v->IsSequence() || v->size() != 2) fail(path + ".rtt_ms", *v, "expected [lo, hi]");
      t.rtt_ms.lo = s.to_double((*v)[0], path + ".rtt_ms");
      t.rtt_ms.hi = s.to_double((*v)[1], path + ".rtt_ms");
      if (!(t.rtt_ms.lo >= 0.0 && t.rtt_ms.lo <= t.rtt_ms.hi))
        fail(path + ".rtt_ms", *v, "must satisfy 0 <= lo <= hi");
    }
    if (auto h = s.section("hardware")) {
      hardware_into(*h, t.hardware);
      try {
        t.hardware.validate();
      } catch (const std::invalid_argument& e) {
        fail(path + ".hardware", h->node(), e.what());
      }
    }
    s.opt_uint("vector_cache_capacity", t.vector_cache_capacity);
    s.opt_uint("prompt_cache_capacity", t.prompt_cache_capacity);
    s.opt_uint("max_concurrent", t.max_concurrent);
    s.opt_double("vector_lookup_ms", t.vector_lookup_ms);
    s.opt_double("prompt_lookup_ms", t.prompt_lookup_ms);
    s.done();
    return t;
  }

  Scenario scenario(const YAML::Node& root) {
    Scenario sc;
    Section top(*this, root, "");
    top.opt_string("name", sc.name);
    sc.seed = top.to_uint<std::uint64_t>(top.require("seed"), "seed");

    if (auto s = top.section("topology")) {
      if (auto v = s->get("tiers")) {
        if (!v->IsSequence() || v->size() == 0) fail("topology.tiers", *v, "expected a non-empty list of tiers");
        sc.tiers.clear();
        for (std::size_t i = 0; i < v->size(); ++i)
          sc.tiers.push_back(tier((*v)[i], "topology.tiers[" + std::to_string(i) + "]"));
      }
      s->done();
    }

    if (auto s = top.section("model")) model_into(*s, sc.model);

    if (auto s = top.section("quantization")) {
      s->opt_double("fp32", sc.quantization.fp32);
      s->opt_double("fp16", sc.quantization.fp16);
      s->opt_double("int8", sc.quantization.int8);
      s->opt_double("int4", sc.quantization.int4);
      s->done();
    }

    if (auto s = top.section("workload")) {
      auto& w = sc.workload;
      s->opt_double("duration_ms", w.duration_ms);
      s->opt_double("rate_per_sec", w.rate_per_sec);
      if (auto m = s->section("class_mix")) {
        for (auto c : kAllClasses) m->opt_double(to_string(c), w.class_mix[class_index(c)]);
        m->done();
      }
      s->opt_enum("kind", w.kind, parse_workload_kind,
                  "unspecified, conversational, semantic_search, recommendation, batch_embedding, prompt_caching");
      s->opt_double("zipf_s", w.zipf_s);
      s->opt_uint("n_prompts", w.n_prompts);
      s->opt_uint("n_clusters", w.n_clusters);
      s->opt_double("cluster_noise_sigma", w.cluster_noise_sigma);
      s->opt_uint("embedding_dim", w.embedding_dim);
      token_range(*s, "prompt_tokens", w.prompt_tokens);
      if (auto o = s->section("output_tokens")) {
        for (auto c : kAllClasses) token_range(*o, to_string(c), w.output_tokens[class_index(c)]);
        o->done();
      }
      s->done();
    }

    {
      auto s = top.section("architecture");
      if (!s) fail("architecture", root, "missing required key");
      auto& a = sc.architecture;
      const YAML::Node kn = s->require("kind");
      const std::string ks = s->scalar(kn, "kind");
      auto k = parse_architecture(ks);
      if (!k) fail("architecture.kind", kn, "unknown architecture '" + ks + "'; valid values: " + list_names(kAllArchitectures));
      a.kind = *k;
      const std::string tiers = list_names(kAllTiers);
      if (auto p = s->section("vector_cache_only")) {
        p->opt_enum("edge_tier", a.vector_cache_only.edge_tier, parse_tier_kind, tiers);
        p->opt_enum("miss_mode", a.vector_cache_only.miss_mode, parse_miss_mode, "cloud_generate, parent_fetch");
        p->opt_enum("generation_tier", a.vector_cache_only.generation_tier, parse_tier_kind, tiers);
        p->done();
      }
      if (auto p = s->section("split_inference")) {
        auto& q = a.split_inference;
        p->opt_double("confidence_threshold", q.confidence_threshold);
        p->opt_double("edge_encoder_ms", q.edge_encoder_ms);
        p->opt_enum("encoder_mode", q.encoder_mode, parse_encoder_mode, "flat, layer_fraction");
        p->opt_uint("encoder_layers", q.encoder_layers);
        p->opt_uint("decoder_layers", q.decoder_layers);
        p->opt_enum("edge_tier", q.edge_tier, parse_tier_kind, tiers);
        p->opt_enum("fallback_tier", q.fallback_tier, parse_tier_kind, tiers);
        p->opt_double("confidence_rank_bias", q.confidence_rank_bias);
        p->opt_bool("hybrid_cache", q.hybrid_cache);
        p->done();
      }
      if (auto p = s->section("full_edge")) {
        auto& q = a.full_edge;
        p->opt_enum("edge_tier", q.edge_tier, parse_tier_kind, tiers);
        if (auto m = p->section("model")) model_into(*m, q.model);
        if (auto h = p->section("hardware")) hardware_into(*h, q.hardware);
        p->done();
      }
      if (auto p = s->section("rag_over_cdn")) {
        auto& q = a.rag_over_cdn;
        p->opt_uint("k", q.k);
        p->opt_enum("embed_tier", q.embed_tier, parse_tier_kind, tiers);
        p->opt_double("embed_ms", q.embed_ms);
        p->opt_enum("retrieval_tier", q.retrieval_tier, parse_tier_kind, tiers);
        p->opt_double("retrieval_ms", q.retrieval_ms);
        p->opt_enum("generation_tier", q.generation_tier, parse_tier_kind, tiers);
        p->opt_uint("per_doc_tokens", q.per_doc_tokens);
        p->opt_uint("n_documents", q.n_documents);
        p->opt_double("doc_noise_sigma", q.doc_noise_sigma);
        p->done();
      }
      s->done();
    }

    if (auto s = top.section("cache")) {
      auto& c = sc.cache;
      s->opt_bool("enabled", c.enabled);
      s->opt_double("similarity_threshold", c.similarity_threshold);
      s->opt_enum("ann_mode", c.ann_mode, parse_ann_mode, "exact, approximate");
      if (auto a = s->section("ann")) {
        a->opt_uint("m", c.ann.m);
        a->opt_uint("ef", c.ann.ef);
        a->opt_uint("ef_construction", c.ann.ef_construction);
        a->opt_uint("seed", c.ann.seed);
        a->done();
      }
      s->opt_double("sync_period_ms", c.sync_period_ms);
      s->opt_uint("sync_top_n", c.sync_top_n);
      s->done();
    }

    if (auto s = top.section("engine")) {
      s->opt_enum("rtt_mode", sc.engine.rtt_mode,
                  [](std::string_view v) -> std::optional<RttMode> {
                    if (v == "uniform") return RttMode::Uniform;
                    if (v == "midpoint") return RttMode::Midpoint;
                    return std::nullopt;
                  },
                  "uniform, midpoint");
      s->opt_uint("queue_cap", sc.engine.queue_cap);
      s->done();
    }

    if (auto s = top.section("output")) {
      auto& o = sc.output;
      s->opt_string("dir", o.dir);
      s->opt_string("metrics", o.metrics);
      s->opt_string("records", o.records);
      s->opt_string("summary", o.summary);
      s->opt_string("cache_dump", o.cache_dump);
      s->done();
    }
    top.done();
    return sc;
  }

  /// Line of `key` or of its nearest recorded ancestor.
  int line_for(std::string key) const {
    while (true) {
      if (auto it = lines.find(key); it != lines.end()) return it->second;
      const auto cut = key.find_last_of(".[");
      if (cut == std::string::npos) return 0;
      key.resize(cut);
    }
  }
};

inline YAML::Node load_yaml(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", e.mark.line >= 0 ? e.mark.line + 1 : 0, source + ": " + e.msg);
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Parses and validates a scenario document.
inline Scenario parse_scenario_node(const YAML::Node& root) {
  if (!root || root.IsNull()) throw ConfigError("", 0, "empty scenario document");
  detail::ConfigReader r;
  Scenario sc = r.scenario(root);
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    std::string key = msg.substr(0, msg.find_first_of(" :"));
    if (key.find('.') == std::string::npos && key != "topology") key.clear();
    if (!key.empty()) msg = msg.substr(msg.find_first_not_of(": ", key.size()));
    throw ConfigError(key, key.empty() ? 0 : r.line_for(key), msg);
  }
  return sc;
}

inline Scenario parse_scenario_string(const std::string& text, const std::string& source = "<string>") {
  return parse_scenario_node(detail::load_yaml(text, source));
}

inline Scenario parse_scenario(const std::filesystem::path& path) {
  return parse_scenario_string(detail::read_file(path), path.string());
}

namespace detail {

inline void emit_hardware(YAML::Emitter& y, const HardwareProfile& h) {
  y << YAML::BeginMap;
  y << YAML::Key << "name" << YAML::Value << h.name;
  y << YAML::Key << "flops_per_sec" << YAML::Value << format_double(h.flops_per_sec);
  y << YAML::Key << "mem_bandwidth_bytes_per_sec" << YAML::Value << format_double(h.mem_bandwidth_bytes_per_sec);
  y << YAML::EndMap;
}

inline void emit_model(YAML::Emitter& y, const ModelProfile& m) {
  y << YAML::BeginMap;
  y << YAML::Key << "name" << YAML::Value << m.name;
  y << YAML::Key << "heads" << YAML::Value << m.heads;
  y << YAML::Key << "embed_dim" << YAML::Value << m.embed_dim;
  y << YAML::Key << "layers" << YAML::Value << m.layers;
  y << YAML::Key << "param_count" << YAML::Value << m.param_count;
  y << YAML::Key << "precision" << YAML::Value << std::string(to_string(m.precision));
  y << YAML::Key << "base_per_token_ms" << YAML::Value;
  if (m.base_per_token_ms) y << format_double(*m.base_per_token_ms);
  else y << YAML::Null;
  y << YAML::EndMap;
}

inline void emit_range(YAML::Emitter& y, double lo, double hi) {
  y << YAML::Flow << YAML::BeginSeq << format_double(lo) << format_double(hi) << YAML::EndSeq;
}

inline void emit_range(YAML::Emitter& y, const TokenRange& r) {
  y << YAML::Flow << YAML::BeginSeq << r.lo << r.hi << YAML::EndSeq;
}

}  // namespace detail

/// Complete YAML form of `sc`, every key explicit.
inline std::string serialize_scenario(const Scenario& sc) {
  using detail::emit_range;
  YAML::Emitter y;
  auto kv = [&](const char* k, const auto& v) { y << YAML::Key << k << YAML::Value << v; };
  auto kd = [&](const char* k, double v) { y << YAML::Key << k << YAML::Value << format_double(v); };
  auto ks = [&](const char* k, std::string_view v) { y << YAML::Key << k << YAML::Value << std::string(v); };

  y << YAML::BeginMap;
  ks("name", sc.name);
  kv("seed", sc.seed);

  y << YAML::Key << "topology" << YAML::Value << YAML::BeginMap << YAML::Key << "tiers" << YAML::Value
    << YAML::BeginSeq;
  for (const auto& t : sc.tiers) {
    y << YAML::BeginMap;
    ks("kind", to_string(t.kind));
    y << YAML::Key << "rtt_ms" << YAML::Value;
    emit_range(y, t.rtt_ms.lo, t.rtt_ms.hi);
    y << YAML::Key << "hardware" << YAML::Value;
    detail::emit_hardware(y, t.hardware);
    kv("vector_cache_capacity", t.vector_cache_capacity);
    kv("prompt_cache_capacity", t.prompt_cache_capacity);
    kv("max_concurrent", t.max_concurrent);
    kd("vector_lookup_ms", t.vector_lookup_ms);
    kd("prompt_lookup_ms", t.prompt_lookup_ms);
    y << YAML::EndMap;
  }
  y << YAML::EndSeq << YAML::EndMap;

  y << YAML::Key << "model" << YAML::Value;
  detail::emit_model(y, sc.model);

  y << YAML::Key << "quantization" << YAML::Value << YAML::BeginMap;
  kd("fp32", sc.quantization.fp32);
  kd("fp16", sc.quantization.fp16);
  kd("int8", sc.quantization.int8);
  kd("int4", sc.quantization.int4);
  y << YAML::EndMap;

  const auto& w = sc.workload;
  y << YAML::Key << "workload" << YAML::Value << YAML::BeginMap;
  kd("duration_ms", w.duration_ms);
  kd("rate_per_sec", w.rate_per_sec);
  y << YAML::Key << "class_mix" << YAML::Value << YAML::BeginMap;
  for (auto c : kAllClasses) kd(to_string(c).data(), w.class_mix[class_index(c)]);
  y << YAML::EndMap;
  ks("kind", to_string(w.kind));
  kd("zipf_s", w.zipf_s);
  kv("n_prompts", w.n_prompts);
  kv("n_clusters", w.n_clusters);
  kd("cluster_noise_sigma", w.cluster_noise_sigma);
  kv("embedding_dim", w.embedding_dim);
  y << YAML::Key << "prompt_tokens" << YAML::Value;
  emit_range(y, w.prompt_tokens);
  y << YAML::Key << "output_tokens" << YAML::Value << YAML::BeginMap;
  for (auto c : kAllClasses) {
    y << YAML::Key << std::string(to_string(c)) << YAML::Value;
    emit_range(y, w.output_tokens[class_index(c)]);
  }
  y << YAML::EndMap << YAML::EndMap;

  const auto& a = sc.architecture;
  y << YAML::Key << "architecture" << YAML::Value << YAML::BeginMap;
  ks("kind", to_string(a.kind));
  y << YAML::Key << "vector_cache_only" << YAML::Value << YAML::BeginMap;
  ks("edge_tier", to_string(a.vector_cache_only.edge_tier));
  ks("miss_mode", to_string(a.vector_cache_only.miss_mode));
  ks("generation_tier", to_string(a.vector_cache_only.generation_tier));
  y << YAML::EndMap;
  const auto& si = a.split_inference;
  y << YAML::Key << "split_inference" << YAML::Value << YAML::BeginMap;
  kd("confidence_threshold", si.confidence_threshold);
  kd("edge_encoder_ms", si.edge_encoder_ms);
  ks("encoder_mode", to_string(si.encoder_mode));
  kv("encoder_layers", si.encoder_layers);
  kv("decoder_layers", si.decoder_layers);
  ks("edge_tier", to_string(si.edge_tier));
  ks("fallback_tier", to_string(si.fallback_tier));
  kd("confidence_rank_bias", si.confidence_rank_bias);
  kv("hybrid_cache", si.hybrid_cache);
  y << YAML::EndMap;
  y << YAML::Key << "full_edge" << YAML::Value << YAML::BeginMap;
  ks("edge_tier", to_string(a.full_edge.edge_tier));
  y << YAML::Key << "model" << YAML::Value;
  detail::emit_model(y, a.full_edge.model);
  y << YAML::Key << "hardware" << YAML::Value;
  detail::emit_hardware(y, a.full_edge.hardware);
  y << YAML::EndMap;
  const auto& rg = a.rag_over_cdn;
  y << YAML::Key << "rag_over_cdn" << YAML::Value << YAML::BeginMap;
  kv("k", rg.k);
  ks("embed_tier", to_string(rg.embed_tier));
  kd("embed_ms", rg.embed_ms);
  ks("retrieval_tier", to_string(rg.retrieval_tier));
  kd("retrieval_ms", rg.retrieval_ms);
  ks("generation_tier", to_string(rg.generation_tier));
  kv("per_doc_tokens", rg.per_doc_tokens);
  kv("n_documents", rg.n_documents);
  kd("doc_noise_sigma", rg.doc_noise_sigma);
  y << YAML::EndMap << YAML::EndMap;

  const auto& c = sc.cache;
  y << YAML::Key << "cache" << YAML::Value << YAML::BeginMap;
  kv("enabled", c.enabled);
  kd("similarity_threshold", c.similarity_threshold);
  ks("ann_mode", to_string(c.ann_mode));
  y << YAML::Key << "ann" << YAML::Value << YAML::BeginMap;
  kv("m", c.ann.m);
  kv("ef", c.ann.ef);
  kv("ef_construction", c.ann.ef_construction);
  kv("seed", c.ann.seed);
  y << YAML::EndMap;
  kd("sync_period_ms", c.sync_period_ms);
  kv("sync_top_n", c.sync_top_n);
  y << YAML::EndMap;

  y << YAML::Key << "engine" << YAML::Value << YAML::BeginMap;
  ks("rtt_mode", sc.engine.rtt_mode == RttMode::Uniform ? "uniform" : "midpoint");
  kv("queue_cap", sc.engine.queue_cap);
  y << YAML::EndMap;

  const auto& o = sc.output;
  y << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  ks("dir", o.dir);
  ks("metrics", o.metrics);
  ks("records", o.records);
  ks("summary", o.summary);
  ks("cache_dump", o.cache_dump);
  y << YAML::EndMap;

  y << YAML::EndMap;
  return std::string(y.c_str()) + "\n";
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepPoint {
  std::string label;  ///< "<parameter>=<value>"
  std::string value;
  Scenario scenario;
};

struct SweepSpec {
  std::string name = "sweep";
  std::string parameter;  ///< dotted key path into the scenario document
  std::vector<std::string> values;
  YAML::Node base;  ///< base scenario document
  std::vector<SweepPoint> points;  ///< one validated scenario per value
};

namespace detail {

/// Sets `path` (dotted; numeric segments index lists) in `doc` to `value`.
inline void set_path(YAML::Node doc, const std::string& path, const YAML::Node& value) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : path) {
    if (ch == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  for (const auto& p : parts)
    if (p.empty()) throw ConfigError("parameter", 0, "malformed parameter path '" + path + "'");

  std::vector<YAML::Node> chain{doc};
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node parent = chain.back();
    YAML::Node next;
    if (parent.IsSequence()) {
      auto idx = parse_u64(parts[i]);
      if (!idx || *idx >= parent.size())
        throw ConfigError("parameter", 0, "no list element '" + parts[i] + "' in '" + path + "'");
      next = parent[static_cast<std::size_t>(*idx)];
    } else {
      if (!parent[parts[i]]) parent[parts[i]] = YAML::Node(YAML::NodeType::Map);
      next = parent[parts[i]];
    }
    chain.push_back(next);
  }
  YAML::Node last = chain.back();
  if (last.IsSequence()) {
    auto idx = parse_u64(parts.back());
    if (!idx || *idx >= last.size())
      throw ConfigError("parameter", 0, "no list element '" + parts.back() + "' in '" + path + "'");
    last[static_cast<std::size_t>(*idx)] = value;
  } else {
    last[parts.back()] = value;
  }
}

}  // namespace detail

/// Expands `spec.base` once per value into validated scenarios.
inline void expand_sweep(SweepSpec& spec) {
  spec.points.clear();
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    YAML::Node doc = YAML::Clone(spec.base);
    detail::set_path(doc, spec.parameter, YAML::Load(spec.values[i]));
    const std::string label = spec.parameter + "=" + spec.values[i];
    try {
      spec.points.push_back({label, spec.values[i], parse_scenario_node(doc)});
    } catch (const ConfigError& e) {
      throw ConfigError(e.key(), e.line(), "sweep point " + std::to_string(i) + " (" + label + "): " + e.what());
    }
  }
}

/// Sweep file: `base` (path relative to the sweep file, or an inline
/// scenario mapping), `parameter` and a non-empty list of `values`.
inline SweepSpec parse_sweep_string(const std::string& text, const std::filesystem::path& base_dir,
                                    const std::string& source = "<string>") {
  const YAML::Node root = detail::load_yaml(text, source);
  if (!root || !root.IsMap()) throw ConfigError("", 0, source + ": expected a mapping");
  detail::ConfigReader r;
  detail::ConfigReader::Section top(r, root, "");
  SweepSpec spec;
  top.opt_string("name", spec.name);
  const YAML::Node base = top.require("base");
  if (base.IsScalar()) {
    const std::filesystem::path p = base_dir / base.Scalar();
    spec.base = detail::load_yaml(detail::read_file(p), p.string());
  } else if (base.IsMap()) {
    spec.base = YAML::Clone(base);
  } else {
    r.fail("base", base, "expected a file path or a scenario mapping");
  }
  const YAML::Node param = top.require("parameter");
  spec.parameter = top.scalar(param, "parameter");
  const YAML::Node values = top.require("values");
  if (!values.IsSequence() || values.size() == 0) r.fail("values", values, "expected a non-empty list");
  for (const auto& v : values) {
    if (!v.IsScalar()) r.fail("values", v, "sweep values must be scalars");
    spec.values.push_back(v.Scalar());
  }
  top.done();
  expand_sweep(spec);
  return spec;
}

inline SweepSpec parse_sweep(const std::filesystem::path& path) {
  return parse_sweep_string(detail::read_file(path), path.parent_path(), path.string());
}

}  // namespace aiedge
