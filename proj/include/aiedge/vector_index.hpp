#pragma once

// Cosine-similarity nearest-neighbour index over unit-norm vectors.
//
// Exact mode scans every stored vector. Approximate mode maintains a
// hierarchical navigable small-world graph: greedy descent through sparse
// upper layers, then a beam search of width `ef` on the dense bottom layer.
// Removed vectors stay in the graph as tombstones (still routable, never
// returned) until they outnumber live vectors, at which point the graph is
// rebuilt from the survivors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aiedge/rng.hpp"
#include "aiedge/workload.hpp"

namespace aiedge {

enum class AnnMode { Exact, Approximate };

inline std::string_view to_string(AnnMode m) { return m == AnnMode::Exact ? "exact" : "approximate"; }

inline std::optional<AnnMode> parse_ann_mode(std::string_view s) {
  if (s == "exact") return AnnMode::Exact;
  if (s == "approximate") return AnnMode::Approximate;
  return std::nullopt;
}

struct AnnParams {
  std::uint32_t m = 16;                ///< neighbour degree on upper layers (2m on layer 0)
  std::uint32_t ef = 64;               ///< search breadth at query time
  std::uint32_t ef_construction = 200;  ///< search breadth while linking new nodes
  std::uint64_t seed = 0x5EEDULL;      ///< level assignment stream

  bool operator==(const AnnParams&) const = default;
};

struct Neighbor {
  std::uint64_t id;
  double similarity;
  bool operator==(const Neighbor&) const = default;
};

/// Orders by similarity descending, then id ascending.
inline bool neighbor_before(const Neighbor& a, const Neighbor& b) noexcept {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.id < b.id;
}

namespace detail {

class HnswGraph {
 public:
  explicit HnswGraph(const AnnParams& p)
      : m_(std::max<std::uint32_t>(p.m, 2)),
        m0_(2 * m_),
        ef_construction_(std::max(p.ef_construction, m_)),
        level_mult_(1.0 / std::log(static_cast<double>(m_))),
        rng_(p.seed) {}

  /// Links `node` (== current node count) into the graph.
  template <class SimFn>
  void insert(std::uint32_t node, SimFn&& sim_nodes) {
    const int level = static_cast<int>(std::floor(-std::log1p(-rng_.uniform01()) * level_mult_));
    links_.emplace_back(static_cast<std::size_t>(level) + 1);
    if (entry_ == kNone) {
      entry_ = node;
      max_level_ = level;
      return;
    }
    auto dist_to = [&](std::uint32_t other) { return 1.0 - sim_nodes(node, other); };

    std::uint32_t ep = entry_;
    double ep_dist = dist_to(ep);
    for (int l = max_level_; l > level; --l) ep = greedy(ep, ep_dist, l, dist_to);

    std::vector<Cand> eps{{ep_dist, ep}};
    for (int l = std::min(level, max_level_); l >= 0; --l) {
      auto found = search_layer(eps, ef_construction_, l, dist_to, [](std::uint32_t) { return false; });
      auto chosen = select_neighbors(found, m_, sim_nodes);
      auto& mine = links_[node][static_cast<std::size_t>(l)];
      for (const auto& c : chosen) mine.push_back(c.node);
      const std::size_t cap = l == 0 ? m0_ : m_;
      for (const auto& c : chosen) {
        auto& theirs = links_[c.node][static_cast<std::size_t>(l)];
        theirs.push_back(node);
        if (theirs.size() > cap) shrink(c.node, theirs, cap, sim_nodes);
      }
      eps = std::move(found);
    }
    if (level > max_level_) {
      max_level_ = level;
      entry_ = node;
    }
  }

  /// Up to `ef` nearest non-deleted nodes, ascending distance.
  template <class DistFn, class DeletedFn>
  std::vector<std::pair<double, std::uint32_t>> search(DistFn&& dist_to, std::size_t ef,
                                                       DeletedFn&& deleted) {
    if (entry_ == kNone) return {};
    std::uint32_t ep = entry_;
    double ep_dist = dist_to(ep);
    for (int l = max_level_; l > 0; --l) ep = greedy(ep, ep_dist, l, dist_to);
    std::vector<Cand> eps{{ep_dist, ep}};
    auto found = search_layer(eps, ef, 0, dist_to, deleted);
    std::vector<std::pair<double, std::uint32_t>> out;
    out.reserve(found.size());
    for (const auto& c : found) out.emplace_back(c.dist, c.node);
    return out;
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Cand {
    double dist;
    std::uint32_t node;
    bool operator<(const Cand& o) const { return dist < o.dist || (dist == o.dist && node < o.node); }
    bool operator>(const Cand& o) const { return o < *this; }
  };

  template <class DistFn>
  std::uint32_t greedy(std::uint32_t ep, double& ep_dist, int level, DistFn& dist_to) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t nb : links_[ep][static_cast<std::size_t>(level)]) {
        const double d = dist_to(nb);
        if (d < ep_dist) {
          ep_dist = d;
          ep = nb;
          changed = true;
        }
      }
    }
    return ep;
  }

  // Beam search on one layer. Nodes for which `deleted` holds are traversed
  // but kept out of the result set.
  template <class DistFn, class DeletedFn>
  std::vector<Cand> search_layer(const std::vector<Cand>& eps, std::size_t ef, int level,
                                 DistFn& dist_to, DeletedFn&& deleted) {
    ++epoch_;
    if (visited_.size() < links_.size()) visited_.resize(links_.size(), 0);
    std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> frontier;
    std::priority_queue<Cand> best;  // max-heap by distance
    auto admit = [&](const Cand& c) {
      if (deleted(c.node)) return;
      best.push(c);
      if (best.size() > ef) best.pop();
    };
    for (const auto& c : eps) {
      if (visited_[c.node] == epoch_) continue;
      visited_[c.node] = epoch_;
      frontier.push(c);
      admit(c);
    }
    while (!frontier.empty()) {
      const Cand cur = frontier.top();
      if (best.size() >= ef && cur.dist > best.top().dist) break;
      frontier.pop();
      for (std::uint32_t nb : links_[cur.node][static_cast<std::size_t>(level)]) {
        if (visited_[nb] == epoch_) continue;
        visited_[nb] = epoch_;
        const Cand c{dist_to(nb), nb};
        if (best.size() < ef || c.dist < best.top().dist) {
          frontier.push(c);
          admit(c);
        }
      }
    }
    std::vector<Cand> out;
    out.reserve(best.size());
    while (!best.empty()) {
      out.push_back(best.top());
      best.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  // Diversity heuristic: keep a candidate only if it is closer to the base
  // node than to every neighbour already kept; top up with the rest.
  template <class SimFn>
  std::vector<Cand> select_neighbors(const std::vector<Cand>& sorted, std::size_t limit,
                                     SimFn& sim_nodes) const {
    std::vector<Cand> kept;
    std::vector<Cand> pruned;
    for (const auto& c : sorted) {
      if (kept.size() >= limit) break;
      bool good = true;
      for (const auto& k : kept) {
        if (1.0 - sim_nodes(c.node, k.node) < c.dist) {
          good = false;
          break;
        }
      }
      (good ? kept : pruned).push_back(c);
    }
    for (const auto& c : pruned) {
      if (kept.size() >= limit) break;
      kept.push_back(c);
    }
    return kept;
  }

  template <class SimFn>
  void shrink(std::uint32_t base, std::vector<std::uint32_t>& list, std::size_t cap,
              SimFn& sim_nodes) const {
    std::vector<Cand> cands;
    cands.reserve(list.size());
    for (std::uint32_t nb : list) cands.push_back({1.0 - sim_nodes(base, nb), nb});
    std::sort(cands.begin(), cands.end());
    auto kept = select_neighbors(cands, cap, sim_nodes);
    list.clear();
    for (const auto& c : kept) list.push_back(c.node);
  }

  std::uint32_t m_;
  std::uint32_t m0_;
  std::uint32_t ef_construction_;
  double level_mult_;
  Rng rng_;
  std::vector<std::vector<std::vector<std::uint32_t>>> links_;  // node -> level -> neighbours
  std::uint32_t entry_ = kNone;
  int max_level_ = -1;
  std::vector<std::uint32_t> visited_;
  std::uint32_t epoch_ = 0;
};

}  // namespace detail

class VectorIndex {
 public:
  VectorIndex(std::uint32_t dim, AnnMode mode = AnnMode::Exact, AnnParams params = {})
      : dim_(dim), mode_(mode), params_(params) {
    if (dim == 0) throw std::invalid_argument("VectorIndex: dim must be >= 1");
    if (mode_ == AnnMode::Approximate) graph_.emplace(params_);
  }

  std::uint32_t dim() const noexcept { return dim_; }
  AnnMode mode() const noexcept { return mode_; }
  const AnnParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return slot_of_.size(); }
  bool empty() const noexcept { return slot_of_.empty(); }
  bool contains(std::uint64_t id) const { return slot_of_.count(id) != 0; }

  const Embedding& vector(std::uint64_t id) const {
    auto it = slot_of_.find(id);
    if (it == slot_of_.end()) throw std::out_of_range("VectorIndex: unknown id " + std::to_string(id));
    return vectors_[it->second];
  }

  void add(std::uint64_t id, Embedding v) {
    check_dim(v.size());
    if (contains(id)) throw std::invalid_argument("VectorIndex: duplicate id " + std::to_string(id));
    const auto slot = static_cast<std::uint32_t>(vectors_.size());
    vectors_.push_back(std::move(v));
    ids_.push_back(id);
    live_.push_back(1);
    slot_of_.emplace(id, slot);
    if (graph_)
      graph_->insert(slot, [this](std::uint32_t a, std::uint32_t b) { return dot(vectors_[a], vectors_[b]); });
  }

  bool remove(std::uint64_t id) {
    auto it = slot_of_.find(id);
    if (it == slot_of_.end()) return false;
    const std::uint32_t slot = it->second;
    slot_of_.erase(it);
    if (!graph_) {
      // swap-remove keeps the flat scan dense
      const auto last = static_cast<std::uint32_t>(vectors_.size() - 1);
      if (slot != last) {
        vectors_[slot] = std::move(vectors_[last]);
        ids_[slot] = ids_[last];
        slot_of_[ids_[slot]] = slot;
      }
      vectors_.pop_back();
      ids_.pop_back();
      live_.pop_back();
      return true;
    }
    live_[slot] = 0;
    ++tombstones_;
    if (tombstones_ > std::max<std::size_t>(slot_of_.size(), 64)) rebuild();
    return true;
  }

  /// Top-k stored vectors by cosine similarity, most similar first.
  std::vector<Neighbor> query(const Embedding& q, std::size_t k) const {
    check_dim(q.size());
    if (k == 0) throw std::invalid_argument("VectorIndex::query: k must be >= 1");
    if (slot_of_.empty()) return {};
    std::vector<Neighbor> out;
    if (!graph_) {
      out.reserve(vectors_.size());
      for (std::size_t s = 0; s < vectors_.size(); ++s) out.push_back({ids_[s], dot(q, vectors_[s])});
    } else {
      const std::size_t ef = std::max<std::size_t>(params_.ef, k);
      auto dist_to = [&](std::uint32_t s) { return 1.0 - dot(q, vectors_[s]); };
      auto deleted = [&](std::uint32_t s) { return live_[s] == 0; };
      for (const auto& [d, s] : graph_->search(dist_to, ef, deleted))
        out.push_back({ids_[s], dot(q, vectors_[s])});
    }
    const std::size_t take = std::min(k, out.size());
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(take), out.end(), neighbor_before);
    out.resize(take);
    return out;
  }

  /// Ids of all stored vectors in insertion-slot order.
  std::vector<std::uint64_t> ids() const {
    std::vector<std::uint64_t> out;
    out.reserve(slot_of_.size());
    for (std::size_t s = 0; s < ids_.size(); ++s)
      if (live_[s]) out.push_back(ids_[s]);
    return out;
  }

 private:
  void check_dim(std::size_t d) const {
    if (d != dim_)
      throw std::invalid_argument("VectorIndex: dimension mismatch (expected " + std::to_string(dim_) +
                                  ", got " + std::to_string(d) + ")");
  }

  void rebuild() {
    std::vector<Embedding> vecs;
    std::vector<std::uint64_t> ids;
    for (std::size_t s = 0; s < vectors_.size(); ++s) {
      if (!live_[s]) continue;
      vecs.push_back(std::move(vectors_[s]));
      ids.push_back(ids_[s]);
    }
    vectors_.clear();
    ids_.clear();
    live_.clear();
    slot_of_.clear();
    tombstones_ = 0;
    graph_.emplace(params_);
    for (std::size_t i = 0; i < vecs.size(); ++i) add(ids[i], std::move(vecs[i]));
  }

  std::uint32_t dim_;
  AnnMode mode_;
  AnnParams params_;
  std::vector<Embedding> vectors_;
  std::vector<std::uint64_t> ids_;
  std::vector<std::uint8_t> live_;
  std::unordered_map<std::uint64_t, std::uint32_t> slot_of_;
  std::size_t tombstones_ = 0;
  mutable std::optional<detail::HnswGraph> graph_;  // search scratch state is mutable
};

}  // namespace aiedge
