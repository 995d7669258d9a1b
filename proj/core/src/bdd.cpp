#include "gkat/detail/bdd.hpp"

#include <algorithm>
#include <limits>

namespace gkat::detail {

namespace {
constexpr std::uint32_t kTerminalLevel = std::numeric_limits<std::uint32_t>::max();
}

BddManager::BddManager(std::size_t node_limit) : node_limit_(node_limit) {
  nodes_.push_back({kTerminalLevel, kFalse, kFalse});
  nodes_.push_back({kTerminalLevel, kTrue, kTrue});
}

BddManager::Node BddManager::make(std::uint32_t lv, Node lo, Node hi) {
  if (lo == hi) return lo;
  const Key key{lv, lo, hi};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  if (nodes_.size() >= node_limit_) throw BddLimit();
  const Node n = static_cast<Node>(nodes_.size());
  nodes_.push_back({lv, lo, hi});
  unique_.emplace(key, n);
  return n;
}

BddManager::Node BddManager::var(std::uint32_t lv) { return make(lv, kFalse, kTrue); }

BddManager::Node BddManager::cofactor(Node n, std::uint32_t lv, bool positive) const {
  if (level(n) != lv) return n;
  return positive ? nodes_[n].hi : nodes_[n].lo;
}

BddManager::Node BddManager::ite(Node f, Node g, Node h) {
  if (f == kTrue) return g;
  if (f == kFalse) return h;
  if (g == h) return g;
  if (g == kTrue && h == kFalse) return f;
  const Key key{f, g, h};
  if (auto it = computed_.find(key); it != computed_.end()) return it->second;
  const std::uint32_t top = std::min({level(f), level(g), level(h)});
  const Node hi = ite(cofactor(f, top, true), cofactor(g, top, true), cofactor(h, top, true));
  const Node lo = ite(cofactor(f, top, false), cofactor(g, top, false), cofactor(h, top, false));
  const Node r = make(top, lo, hi);
  computed_.emplace(key, r);
  return r;
}

}  // namespace gkat::detail
