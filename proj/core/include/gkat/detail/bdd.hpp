#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace gkat::detail {

struct BddLimit : std::runtime_error {
  BddLimit() : std::runtime_error("bdd node limit exceeded") {}
};

/// Reduced ordered BDD manager. Node 0 is false, node 1 is true.
/// Variables are levels; a smaller level sits closer to the root.
class BddManager {
 public:
  using Node = std::uint32_t;
  static constexpr Node kFalse = 0;
  static constexpr Node kTrue = 1;

  /// Throws BddLimit when more than `node_limit` nodes would exist.
  explicit BddManager(std::size_t node_limit = std::size_t{1} << 22);

  Node var(std::uint32_t level);
  Node ite(Node f, Node g, Node h);
  Node land(Node f, Node g) { return ite(f, g, kFalse); }
  Node lor(Node f, Node g) { return ite(f, kTrue, g); }
  Node lnot(Node f) { return ite(f, kFalse, kTrue); }

  std::size_t node_count() const { return nodes_.size(); }
  /// Drops the computed table (unique table is kept).
  void clear_cache() { computed_.clear(); }

 private:
  struct NodeData {
    std::uint32_t level;
    Node lo;
    Node hi;
  };
  Node make(std::uint32_t level, Node lo, Node hi);
  std::uint32_t level(Node n) const { return nodes_[n].level; }
  Node cofactor(Node n, std::uint32_t lv, bool positive) const;

  std::size_t node_limit_;
  std::vector<NodeData> nodes_;
  struct Key {
    Node f, g, h;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t x = k.f * 0x9e3779b97f4a7c15ull;
      x ^= (k.g + 0x632be59bd9b4e019ull) + (x << 6) + (x >> 2);
      x ^= (k.h + 0x85ebca6b0f5c4a1dull) + (x << 6) + (x >> 2);
      return static_cast<std::size_t>(x);
    }
  };
  std::unordered_map<Key, Node, KeyHash> unique_;  // (level, lo, hi)
  std::unordered_map<Key, Node, KeyHash> computed_;
};

}  // namespace gkat::detail
