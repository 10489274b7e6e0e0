#pragma once

#include <cstddef>
#include <functional>
#include <list>
#include <optional>
#include <unordered_map>
#include <utility>

namespace aiedge {

/// Bounded map with least-recently-used eviction.
///
/// Iteration runs from most to least recently used. `find` does not change
/// recency; `touch` and `put` do. A capacity of zero stores nothing: every
/// `put` hands the item straight back as evicted.
template <class Key, class Value, class Hash = std::hash<Key>>
class LruMap {
 public:
  using Item = std::pair<Key, Value>;
  using List = std::list<Item>;
  using const_iterator = typename List::const_iterator;

  explicit LruMap(std::size_t capacity) : capacity_(capacity) {}

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return map_.empty(); }
  bool contains(const Key& k) const { return map_.count(k) != 0; }

  const_iterator begin() const noexcept { return order_.begin(); }
  const_iterator end() const noexcept { return order_.end(); }

  const Value* find(const Key& k) const {
    auto it = map_.find(k);
    return it == map_.end() ? nullptr : &it->second->second;
  }

  Value* find_mut(const Key& k) {
    auto it = map_.find(k);
    return it == map_.end() ? nullptr : &it->second->second;
  }

  /// Marks `k` most recently used; nullptr when absent.
  Value* touch(const Key& k) {
    auto it = map_.find(k);
    if (it == map_.end()) return nullptr;
    order_.splice(order_.begin(), order_, it->second);
    return &it->second->second;
  }

  /// Inserts or replaces `k` as most recently used. Returns the evicted item, if any.
  std::optional<Item> put(Key k, Value v) {
    if (auto it = map_.find(k); it != map_.end()) {
      it->second->second = std::move(v);
      order_.splice(order_.begin(), order_, it->second);
      return std::nullopt;
    }
    if (capacity_ == 0) return Item{std::move(k), std::move(v)};
    std::optional<Item> evicted;
    if (map_.size() >= capacity_) {
      auto& victim = order_.back();
      map_.erase(victim.first);
      evicted.emplace(std::move(victim));
      order_.pop_back();
    }
    order_.emplace_front(k, std::move(v));
    map_.emplace(std::move(k), order_.begin());
    return evicted;
  }

  std::optional<Value> erase(const Key& k) {
    auto it = map_.find(k);
    if (it == map_.end()) return std::nullopt;
    std::optional<Value> v(std::move(it->second->second));
    order_.erase(it->second);
    map_.erase(it);
    return v;
  }

  const Key* lru_key() const { return order_.empty() ? nullptr : &order_.back().first; }

 private:
  std::size_t capacity_;
  List order_;
  std::unordered_map<Key, typename List::iterator, Hash> map_;
};

}  // namespace aiedge
