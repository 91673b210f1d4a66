#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ncfield/counting.hpp"
#include "ncfield/error.hpp"

namespace ncfield {

/// Ordered rooted tree where every vertex is a leaf or has exactly three
/// children. Node 0 is the root; children are listed left to right.
class TernaryTree {
 public:
  struct Node {
    bool leaf = true;
    int parent = -1;
    int parent_slot = -1;           // 0..2 among the parent's children
    std::array<int, 3> children{-1, -1, -1};
  };

  TernaryTree() : nodes_{Node{}} {}

  static TernaryTree leaf() { return {}; }

  static TernaryTree join(const TernaryTree& a, const TernaryTree& b, const TernaryTree& c) {
    TernaryTree t;
    t.nodes_[0].leaf = false;
    int slot = 0;
    for (const TernaryTree* sub : {&a, &b, &c}) {
      const int offset = static_cast<int>(t.nodes_.size());
      for (auto n : sub->nodes_) {
        if (n.parent >= 0) n.parent += offset;
        for (auto& ch : n.children) {
          if (ch >= 0) ch += offset;
        }
        t.nodes_.push_back(n);
      }
      t.nodes_[offset].parent = 0;
      t.nodes_[offset].parent_slot = slot;
      t.nodes_[0].children[slot++] = offset;
    }
    return t;
  }

  /// Preorder string, 'I' for internal and 'L' for leaf; identifies the tree.
  static TernaryTree from_code(const std::string& code) {
    std::size_t pos = 0;
    std::function<TernaryTree()> parse = [&]() -> TernaryTree {
      if (pos >= code.size()) throw Error(ErrorCode::InvalidInput, "ternary code ends early");
      char c = code[pos++];
      if (c == 'L') return leaf();
      if (c != 'I') throw Error(ErrorCode::InvalidInput, "ternary code: unexpected character");
      auto a = parse();
      auto b = parse();
      auto d = parse();
      return join(a, b, d);
    };
    auto t = parse();
    if (pos != code.size()) throw Error(ErrorCode::InvalidInput, "ternary code has trailing characters");
    return t;
  }

  std::string code() const {
    std::string s;
    for (int v : preorder()) s += nodes_[v].leaf ? 'L' : 'I';
    return s;
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int v) const { return nodes_.at(v); }
  int size() const { return static_cast<int>(nodes_.size()); }

  int internal_count() const {
    int m = 0;
    for (const auto& n : nodes_) m += !n.leaf;
    return m;
  }

  std::vector<int> preorder() const {
    std::vector<int> out;
    std::function<void(int)> go = [&](int v) {
      out.push_back(v);
      if (!nodes_[v].leaf) {
        for (int c : nodes_[v].children) go(c);
      }
    };
    go(0);
    return out;
  }

  /// Leaves in left-first depth-first order.
  std::vector<int> leaves() const {
    std::vector<int> out;
    for (int v : preorder()) {
      if (nodes_[v].leaf) out.push_back(v);
    }
    return out;
  }

  /// Internal vertices in preorder.
  std::vector<int> internal_vertices() const {
    std::vector<int> out;
    for (int v : preorder()) {
      if (!nodes_[v].leaf) out.push_back(v);
    }
    return out;
  }

  bool operator==(const TernaryTree& o) const { return code() == o.code(); }

 private:
  std::vector<Node> nodes_;
};

/// Edge between two internal vertices, identified by its lower endpoint.
struct InternalEdge {
  int parent = -1;
  int child = -1;
  bool operator==(const InternalEdge&) const = default;
};

/// e < f when e lies on the root path to f, or f branches off further right:
/// this is preorder on the lower endpoints.
inline std::vector<InternalEdge> internal_edge_order(const TernaryTree& t) {
  std::vector<InternalEdge> out;
  for (int v : t.preorder()) {
    const auto& n = t.node(v);
    if (v != 0 && !n.leaf) out.push_back({n.parent, v});
  }
  return out;
}

/// All ordered ternary trees with m internal vertices, ordered by code.
inline std::vector<TernaryTree> enumerate_ternary(int m, std::size_t cap = 2'000'000) {
  if (m < 0) throw Error(ErrorCode::InvalidInput, "enumerate_ternary: m must be >= 0");
  if (BigCount total = count_ternary(m); total > cap) {
    throw Error(ErrorCode::ResourceLimit, "enumerate_ternary: " + total.str() + " trees exceed cap " + std::to_string(cap));
  }
  std::vector<std::vector<std::string>> codes(m + 1);
  codes[0] = {"L"};
  for (int s = 1; s <= m; ++s) {
    for (int a = 0; a <= s - 1; ++a) {
      for (int b = 0; a + b <= s - 1; ++b) {
        int c = s - 1 - a - b;
        for (const auto& x : codes[a])
          for (const auto& y : codes[b])
            for (const auto& z : codes[c]) codes[s].push_back("I" + x + y + z);
      }
    }
  }
  std::sort(codes[m].begin(), codes[m].end());
  std::vector<TernaryTree> out;
  out.reserve(codes[m].size());
  for (const auto& c : codes[m]) out.push_back(TernaryTree::from_code(c));
  return out;
}

}  // namespace ncfield
