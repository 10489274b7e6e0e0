#pragma once

// Per-tier inference caches.
//
// PromptCache matches prompts exactly by hash. SemanticCache matches by cosine
// similarity of the query embedding against stored embeddings and reports a
// hit when the nearest one reaches the similarity threshold. Both evict the
// least recently used entry. Entries carry only the response size in tokens;
// no response text is stored.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "aiedge/format.hpp"
#include "aiedge/lru.hpp"
#include "aiedge/vector_index.hpp"

namespace aiedge {

struct CacheEntry {
  std::uint64_t id = 0;      ///< local entry id, unique within one cache
  std::uint64_t origin = 0;  ///< content identity shared by copies across tiers
  std::uint32_t payload_tokens = 0;
  double inserted_at_ms = 0.0;
  double last_access_ms = 0.0;
  std::uint64_t hit_count = 0;

  bool operator==(const CacheEntry&) const = default;
};

struct SemanticCacheConfig {
  double similarity_threshold = 0.85;
  std::uint64_t capacity = 1000;
  AnnMode ann_mode = AnnMode::Exact;
  AnnParams ann;

  void validate() const {
    if (!(similarity_threshold >= -1.0 && similarity_threshold <= 1.0))
      throw std::invalid_argument("cache.similarity_threshold must lie in [-1, 1]");
  }

  bool operator==(const SemanticCacheConfig&) const = default;
};

class PromptCache {
 public:
  explicit PromptCache(std::uint64_t capacity) : lru_(capacity) {}

  std::size_t size() const noexcept { return lru_.size(); }
  std::size_t capacity() const noexcept { return lru_.capacity(); }
  bool contains(std::uint64_t prompt_key) const { return lru_.contains(prompt_key); }

  /// Hit iff the key is present; a hit refreshes recency and bumps hit_count.
  std::optional<CacheEntry> lookup(std::uint64_t prompt_key, double now_ms) {
    CacheEntry* e = lru_.touch(prompt_key);
    if (!e) return std::nullopt;
    e->last_access_ms = std::max(now_ms, e->inserted_at_ms);
    ++e->hit_count;
    return *e;
  }

  /// Stores (or refreshes) the entry for `prompt_key`; returns the evicted entry.
  std::optional<CacheEntry> insert(std::uint64_t prompt_key, std::uint32_t payload_tokens, double now_ms) {
    if (CacheEntry* e = lru_.touch(prompt_key)) {
      e->payload_tokens = payload_tokens;
      e->last_access_ms = std::max(now_ms, e->inserted_at_ms);
      return std::nullopt;
    }
    CacheEntry e{prompt_key, prompt_key, payload_tokens, now_ms, now_ms, 0};
    auto evicted = lru_.put(prompt_key, e);
    if (evicted) return evicted->second;
    return std::nullopt;
  }

  /// Entries from most to least recently used.
  std::vector<CacheEntry> entries() const {
    std::vector<CacheEntry> out;
    out.reserve(lru_.size());
    for (const auto& [k, e] : lru_) out.push_back(e);
    return out;
  }

 private:
  LruMap<std::uint64_t, CacheEntry> lru_;
};

struct SemanticHit {
  CacheEntry entry;
  double similarity;
};

class SemanticCache {
 public:
  SemanticCache(std::uint32_t dim, SemanticCacheConfig cfg, std::uint64_t origin_salt = 0)
      : cfg_(cfg), index_(dim, cfg.ann_mode, cfg.ann), lru_(cfg.capacity), salt_(origin_salt) {
    cfg_.validate();
  }

  const SemanticCacheConfig& config() const noexcept { return cfg_; }
  std::size_t size() const noexcept { return lru_.size(); }
  std::size_t capacity() const noexcept { return lru_.capacity(); }
  std::uint32_t dim() const noexcept { return index_.dim(); }
  const VectorIndex& index() const noexcept { return index_; }
  bool holds_origin(std::uint64_t origin) const { return by_origin_.count(origin) != 0; }

  const Embedding& embedding(std::uint64_t id) const { return index_.vector(id); }

  std::optional<SemanticHit> lookup(const Embedding& query, double now_ms) {
    return lookup(query, cfg_.similarity_threshold, now_ms);
  }

  /// Nearest stored entry if its similarity reaches `threshold`. Misses leave
  /// the cache untouched.
  std::optional<SemanticHit> lookup(const Embedding& query, double threshold, double now_ms) {
    if (query.size() != index_.dim())
      throw std::invalid_argument("semantic lookup: dimension mismatch");
    if (lru_.empty()) return std::nullopt;
    const auto best = index_.query(query, 1);
    if (best.empty() || best.front().similarity < threshold) return std::nullopt;
    CacheEntry* e = lru_.touch(best.front().id);
    e->last_access_ms = std::max(now_ms, e->inserted_at_ms);
    ++e->hit_count;
    return SemanticHit{*e, best.front().similarity};
  }

  /// Top-k entries by similarity without touching recency.
  std::vector<Neighbor> query(const Embedding& q, std::size_t k) const { return index_.query(q, k); }

  /// Stores a new entry. `origin` of 0 assigns a fresh content identity;
  /// re-inserting an origin already held only refreshes that entry.
  std::optional<CacheEntry> insert(Embedding v, std::uint32_t payload_tokens, double now_ms,
                                   std::uint64_t origin = 0) {
    if (v.size() != index_.dim()) throw std::invalid_argument("semantic insert: dimension mismatch");
    if (origin != 0) {
      if (auto it = by_origin_.find(origin); it != by_origin_.end()) {
        CacheEntry* e = lru_.touch(it->second);
        e->last_access_ms = std::max(now_ms, e->inserted_at_ms);
        return std::nullopt;
      }
    }
    const std::uint64_t id = next_id_++;
    if (origin == 0) origin = mix64(salt_ ^ id) | 1ULL;
    if (lru_.capacity() == 0) return CacheEntry{id, origin, payload_tokens, now_ms, now_ms, 0};
    CacheEntry e{id, origin, payload_tokens, now_ms, now_ms, 0};
    auto evicted = lru_.put(id, e);
    if (evicted) {
      index_.remove(evicted->first);
      by_origin_.erase(evicted->second.origin);
    }
    index_.add(id, std::move(v));
    by_origin_[origin] = id;
    if (evicted) return evicted->second;
    return std::nullopt;
  }

  std::vector<CacheEntry> entries() const {
    std::vector<CacheEntry> out;
    out.reserve(lru_.size());
    for (const auto& [k, e] : lru_) out.push_back(e);
    return out;
  }

  /// Id of the least recently used entry, if any.
  std::optional<std::uint64_t> lru_id() const {
    if (const auto* k = lru_.lru_key()) return *k;
    return std::nullopt;
  }

 private:
  SemanticCacheConfig cfg_;
  VectorIndex index_;
  LruMap<std::uint64_t, CacheEntry> lru_;
  std::unordered_map<std::uint64_t, std::uint64_t> by_origin_;
  std::uint64_t salt_;
  std::uint64_t next_id_ = 1;
};

namespace detail {

/// Entries ordered by hit_count desc, then most recent access, then id.
inline std::vector<CacheEntry> rank_by_popularity(std::vector<CacheEntry> v, std::size_t top_n) {
  std::sort(v.begin(), v.end(), [](const CacheEntry& a, const CacheEntry& b) {
    if (a.hit_count != b.hit_count) return a.hit_count > b.hit_count;
    if (a.last_access_ms != b.last_access_ms) return a.last_access_ms > b.last_access_ms;
    return a.id < b.id;
  });
  if (v.size() > top_n) v.resize(top_n);
  return v;
}

}  // namespace detail

/// Copies the parent's `top_n` most-hit entries the child does not yet hold.
/// Returns the number of entries copied; entries already present are left alone.
inline std::size_t sync_from_parent(SemanticCache& child, const SemanticCache& parent,
                                    std::size_t top_n, double now_ms) {
  if (child.dim() != parent.dim()) throw std::invalid_argument("sync_from_parent: dimension mismatch");
  std::size_t copied = 0;
  // Insert least popular first so the most popular end up most recently used.
  auto ranked = detail::rank_by_popularity(parent.entries(), top_n);
  for (auto it = ranked.rbegin(); it != ranked.rend(); ++it) {
    if (child.holds_origin(it->origin) || child.capacity() == 0) continue;
    child.insert(parent.embedding(it->id), it->payload_tokens, now_ms, it->origin);
    ++copied;
  }
  return copied;
}

inline std::size_t sync_from_parent(PromptCache& child, const PromptCache& parent, std::size_t top_n,
                                    double now_ms) {
  std::size_t copied = 0;
  auto ranked = detail::rank_by_popularity(parent.entries(), top_n);
  for (auto it = ranked.rbegin(); it != ranked.rend(); ++it) {
    if (child.contains(it->origin) || child.capacity() == 0) continue;
    child.insert(it->origin, it->payload_tokens, now_ms);
    ++copied;
  }
  return copied;
}

/// Line-delimited dump: tier,kind,entry_id,origin,hit_count,inserted_at_ms
inline void dump_entries(std::ostream& os, std::string_view tier, std::string_view kind,
                         const std::vector<CacheEntry>& entries) {
  for (const auto& e : entries)
    os << tier << ',' << kind << ',' << e.id << ',' << format_hex64(e.origin) << ',' << e.hit_count << ','
       << format_double(e.inserted_at_ms) << '\n';
}

}  // namespace aiedge
