#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncfield/counting.hpp"
#include "ncfield/error.hpp"

namespace ncfield {

/// Unordered vertex pair, stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;

  Edge() = default;
  Edge(int u, int v) : a(std::min(u, v)), b(std::max(u, v)) {}

  bool contains(int v) const { return a == v || b == v; }
  int other(int v) const { return v == a ? b : a; }

  auto operator<=>(const Edge&) const = default;
};

/// Chords {a,b}, {c,d} of the circle cross iff their endpoints interleave.
inline bool crosses(const Edge& e, const Edge& f) {
  return (e.a < f.a && f.a < e.b && e.b < f.b) || (f.a < e.a && e.a < f.b && f.b < e.b);
}

/// Tree with n vertices on the unit circle, labelled 1..n counterclockwise
/// (vertex j at exp(2πi(j-1)/n)), edges drawn as chords. Construction only
/// normalizes and sorts the edge list; use validate() to check invariants.
class NcTree {
 public:
  NcTree() = default;
  NcTree(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
  }

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Position of e in the sorted edge list, or -1.
  int edge_index(const Edge& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return -1;
    return static_cast<int>(it - edges_.begin());
  }

  bool operator==(const NcTree&) const = default;

 private:
  int n_ = 1;
  std::vector<Edge> edges_;
};

struct ValidationReport {
  bool ok = true;
  std::string violated;        // empty when ok
  std::vector<Edge> witnesses; // offending edges, if any

  explicit operator bool() const { return ok; }
};

inline ValidationReport validate(const NcTree& t) {
  auto fail = [](std::string what, std::vector<Edge> w = {}) {
    return ValidationReport{false, std::move(what), std::move(w)};
  };
  const int n = t.n();
  const auto& es = t.edges();
  if (n < 1) return fail("vertex count must be >= 1");
  for (const auto& e : es) {
    if (e.a < 1 || e.b > n || e.a == e.b) return fail("edge endpoints must be distinct labels in 1..n", {e});
  }
  for (std::size_t i = 1; i < es.size(); ++i) {
    if (es[i] == es[i - 1]) return fail("duplicate edge", {es[i]});
  }
  if (static_cast<int>(es.size()) != n - 1) return fail("edge count must be n-1");

  std::vector<int> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& e : es) {
    int ra = find(e.a), rb = find(e.b);
    if (ra == rb) return fail("graph contains a cycle", {e});
    parent[ra] = rb;
  }
  // n-1 edges and no cycle implies connected.

  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      if (crosses(es[i], es[j])) return fail("crossing edges", {es[i], es[j]});
    }
  }
  return {};
}

inline void require_valid(const NcTree& t) {
  if (auto r = validate(t); !r) throw Error(ErrorCode::InvalidInput, "invalid noncrossing tree: " + r.violated);
}

/// Vertex degrees, indexed 1..n (index 0 unused).
inline std::vector<int> incidence(const NcTree& t) {
  std::vector<int> deg(t.n() + 1, 0);
  for (const auto& e : t.edges()) {
    ++deg[e.a];
    ++deg[e.b];
  }
  return deg;
}

/// Edges at j, ordered by the anticlockwise offset of the far endpoint from j.
inline std::vector<Edge> edge_order_at(const NcTree& t, int j) {
  const int n = t.n();
  std::vector<Edge> out;
  for (const auto& e : t.edges()) {
    if (e.contains(j)) out.push_back(e);
  }
  auto offset = [&](const Edge& e) { return ((e.other(j) - j) % n + n) % n; };
  std::sort(out.begin(), out.end(), [&](const Edge& x, const Edge& y) { return offset(x) < offset(y); });
  return out;
}

/// One sepal zone: the zone between two consecutive edges at a vertex.
struct SepalDescriptor {
  int index = 0;   // 1..k
  int vertex = 0;  // owning tree vertex
  Edge first;      // e_l
  Edge second;     // e_{l+1}
  int first_edge = -1;   // positions in NcTree::edges()
  int second_edge = -1;

  bool operator==(const SepalDescriptor&) const = default;
};

inline std::vector<SepalDescriptor> sepal_zones(const NcTree& t) {
  std::vector<SepalDescriptor> out;
  for (int j = 1; j <= t.n(); ++j) {
    auto order = edge_order_at(t, j);
    for (std::size_t l = 0; l + 1 < order.size(); ++l) {
      SepalDescriptor d;
      d.index = static_cast<int>(out.size()) + 1;
      d.vertex = j;
      d.first = order[l];
      d.second = order[l + 1];
      d.first_edge = t.edge_index(d.first);
      d.second_edge = t.edge_index(d.second);
      out.push_back(d);
    }
  }
  return out;
}

inline int wrap_label(long long v, int n) {
  long long r = ((v - 1) % n + n) % n;
  return static_cast<int>(r) + 1;
}

inline NcTree rotate(const NcTree& t, long long s) {
  std::vector<Edge> es;
  es.reserve(t.edges().size());
  for (const auto& e : t.edges()) es.emplace_back(wrap_label(e.a + s, t.n()), wrap_label(e.b + s, t.n()));
  return NcTree(t.n(), std::move(es));
}

namespace detail {

// Boundary arc x (1..n) runs from vertex x to x+1; arc n wraps from n to 1.
inline bool arc_inside(const Edge& chord, int x) { return chord.a <= x && x < chord.b; }

inline bool chord_inside(const Edge& chord, const Edge& e) {
  return chord != e && chord.a <= e.a && e.b <= chord.b;
}

// The arc lying in the face adjacent to e on the requested side.
inline int face_arc(const NcTree& t, const Edge& e, bool inside) {
  for (int x = 1; x <= t.n(); ++x) {
    if (arc_inside(e, x) != inside) continue;
    bool same_face = true;
    for (const auto& f : t.edges()) {
      if (f == e) continue;
      if (arc_inside(f, x) != chord_inside(f, e)) {
        same_face = false;
        break;
      }
    }
    if (same_face) return x;
  }
  throw Error(ErrorCode::InvalidInput, "dual: no face found (tree invalid?)");
}

}  // namespace detail

/// Planar dual. Dual vertex j sits in the face containing the boundary arc
/// between primal vertices j-1 and j (a half step clockwise of j); each dual
/// edge crosses exactly the primal edge it was built from.
inline NcTree dual(const NcTree& t) {
  require_valid(t);
  const int n = t.n();
  std::vector<Edge> es;
  for (const auto& e : t.edges()) {
    int in = detail::face_arc(t, e, true);
    int out = detail::face_arc(t, e, false);
    es.emplace_back(wrap_label(in + 1, n), wrap_label(out + 1, n));
  }
  return NcTree(n, std::move(es));
}

struct SymmetryInfo {
  int order = 1;
  std::optional<Edge> fixed_edge;
};

inline SymmetryInfo symmetry_order(const NcTree& t) {
  const int n = t.n();
  if (n % 2 != 0 || rotate(t, n / 2) != t) return {};
  SymmetryInfo info{2, std::nullopt};
  for (const auto& e : t.edges()) {
    if (e.b - e.a == n / 2) {
      info.fixed_edge = e;
      break;
    }
  }
  return info;
}

/// "n;a-b,c-d,..." over the sorted edge list.
inline std::string canonical_code(const NcTree& t) {
  std::string s = std::to_string(t.n()) + ";";
  bool first = true;
  for (const auto& e : t.edges()) {
    if (!first) s += ',';
    first = false;
    s += std::to_string(e.a) + "-" + std::to_string(e.b);
  }
  return s;
}

inline std::string rotation_class_code(const NcTree& t) {
  std::string best = canonical_code(t);
  for (int s = 1; s < t.n(); ++s) best = std::min(best, canonical_code(rotate(t, s)));
  return best;
}

namespace detail {

using Shape = std::vector<std::pair<int, int>>;  // edges on local indices 0..s-1

struct ShapeMemo {
  std::vector<std::vector<Shape>> all;       // all[s]: every tree on s points
  std::vector<std::vector<Shape>> end_edge;  // end_edge[s]: trees containing {0, s-1}

  explicit ShapeMemo(int n) : all(n + 1), end_edge(n + 1) {}

  const std::vector<Shape>& trees(int s) {
    if (!all[s].empty()) return all[s];
    if (s == 1) {
      all[1].push_back({});
      return all[1];
    }
    // Split at the first neighbour j of point 0: points 1..j form a subtree,
    // and {0} ∪ {j..s-1} is a tree containing the chord {0, j}.
    std::vector<Shape> out;
    for (int j = 1; j <= s - 1; ++j) {
      const auto& left = trees(j);
      const auto& right = with_end_edge(s - j + 1);
      for (const auto& l : left) {
        for (const auto& r : right) {
          Shape e;
          for (auto [u, v] : l) e.emplace_back(u + 1, v + 1);
          auto map_right = [&](int i) { return i == s - j ? 0 : j + i; };
          for (auto [u, v] : r) e.emplace_back(map_right(u), map_right(v));
          out.push_back(std::move(e));
        }
      }
    }
    all[s] = std::move(out);
    return all[s];
  }

  const std::vector<Shape>& with_end_edge(int s) {
    if (!end_edge[s].empty()) return end_edge[s];
    // Removing {0, s-1} leaves two subtrees on 0..m and m+1..s-1.
    std::vector<Shape> out;
    for (int m = 0; m <= s - 2; ++m) {
      const auto& left = trees(m + 1);
      const auto& right = trees(s - m - 1);
      for (const auto& l : left) {
        for (const auto& r : right) {
          Shape e{{0, s - 1}};
          e.insert(e.end(), l.begin(), l.end());
          for (auto [u, v] : r) e.emplace_back(u + m + 1, v + m + 1);
          out.push_back(std::move(e));
        }
      }
    }
    end_edge[s] = std::move(out);
    return end_edge[s];
  }
};

}  // namespace detail

/// Every nc tree of order n, ordered by canonical_code. Throws ResourceLimit
/// if more than `cap` trees would be produced.
inline std::vector<NcTree> enumerate(int n, std::size_t cap = 5'000'000) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "enumerate: n must be >= 1");
  if (BigCount total = count_A(n); total > cap) {
    throw Error(ErrorCode::ResourceLimit, "enumerate: " + total.str() + " trees exceed cap " + std::to_string(cap));
  }
  detail::ShapeMemo memo(n);
  const auto& shapes = memo.trees(n);
  std::vector<std::pair<std::string, NcTree>> keyed;
  keyed.reserve(shapes.size());
  for (const auto& sh : shapes) {
    std::vector<Edge> es;
    for (auto [u, v] : sh) es.emplace_back(u + 1, v + 1);
    NcTree t(n, std::move(es));
    keyed.emplace_back(canonical_code(t), std::move(t));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<NcTree> out;
  out.reserve(keyed.size());
  for (auto& [code, t] : keyed) out.push_back(std::move(t));
  return out;
}

inline void for_each_nc_tree(int n, const std::function<void(const NcTree&)>& fn, std::size_t cap = 5'000'000) {
  for (const auto& t : enumerate(n, cap)) fn(t);
}

}  // namespace ncfield
