#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ncfield/error.hpp"
#include "ncfield/nc_tree.hpp"
#include "ncfield/polynomial.hpp"
#include "ncfield/trace.hpp"

namespace ncfield {

/// Combinatorial tree plus eta in the upper half-plane, one entry per sepal zone.
struct InvariantPair {
  NcTree tree;
  std::vector<Complex> eta;
};

struct TreeExtraction {
  NcTree tree;
  std::vector<int> root_of_edge;  // indexed like tree.edges()
  std::vector<int> edge_of_root;
  std::vector<TracedSeparatrix> traces;
};

struct EtaExtraction {
  std::vector<Complex> eta;
  std::vector<bool> flipped;  // orientation reversed to get Im > 0
};

struct ZoneCensus {
  int sepal_count = 0;
  int petal_count = 0;
  bool operator==(const ZoneCensus&) const = default;
};

inline constexpr double kImEtaTolerance = 1e-9;
inline constexpr double kAnalyticTolerance = 1e-9;

/// Repelling marked point 2j-1 is tree vertex j.
inline int vertex_of_repelling(int marked) { return (marked + 1) / 2; }
/// Attracting marked point 2j-2 is dual vertex j.
inline int vertex_of_attracting(int marked) { return marked / 2 + 1; }

namespace detail {

inline void require_generic(const GenericityReport& rep) {
  if (!rep.generic()) {
    std::string kind = rep.verdict == GenericityReport::Verdict::Indeterminate ? "indeterminate: " : "";
    throw Error(ErrorCode::NotGeneric, kind + rep.diagnosis);
  }
}

// Edges from the two separatrices of the requested kind at each root.
inline TreeExtraction graph_from_traces(const AntiPolyField& f, std::vector<TracedSeparatrix> traces, bool incoming) {
  const int roots = static_cast<int>(f.roots().size());
  const int n = f.k() + 2;
  std::vector<std::vector<int>> ends(roots);
  for (const auto& t : traces) {
    if (t.outgoing == incoming) continue;
    if (!t.terminal.is_marked()) throw Error(ErrorCode::NotGeneric, "separatrix does not reach infinity");
    int v = incoming ? vertex_of_repelling(t.terminal.index) : vertex_of_attracting(t.terminal.index);
    ends[t.origin].push_back(v);
  }
  std::vector<Edge> edges;
  for (int r = 0; r < roots; ++r) {
    if (ends[r].size() != 2) throw Error(ErrorCode::InconsistentTrace, "root without two separatrices of one kind");
    if (ends[r][0] == ends[r][1]) {
      throw Error(ErrorCode::InconsistentTrace,
                  "both separatrices of root " + std::to_string(r) + " reach marked vertex " + std::to_string(ends[r][0]));
    }
    edges.emplace_back(ends[r][0], ends[r][1]);
  }
  TreeExtraction out;
  out.tree = NcTree(n, edges);
  if (auto rep = validate(out.tree); !rep) {
    throw Error(ErrorCode::InconsistentTrace, "extracted graph is not a noncrossing tree: " + rep.violated);
  }
  out.root_of_edge.assign(roots, -1);
  out.edge_of_root.assign(roots, -1);
  for (int r = 0; r < roots; ++r) {
    int e = out.tree.edge_index(edges[r]);
    out.root_of_edge[e] = r;
    out.edge_of_root[r] = e;
  }
  out.traces = std::move(traces);
  return out;
}

}  // namespace detail

inline TreeExtraction combinatorial_invariant_from(const AntiPolyField& f, const GenericityReport& rep) {
  detail::require_generic(rep);
  return detail::graph_from_traces(f, rep.traces, true);
}

/// Incoming graph rooted at the first repelling direction.
inline TreeExtraction combinatorial_invariant(const AntiPolyField& f, const TraceConfig& cfg = {}) {
  return combinatorial_invariant_from(f, is_generic(f, cfg));
}

/// Outgoing graph, labelled by attracting marked points (2j-2 -> vertex j).
inline NcTree outgoing_graph(const AntiPolyField& f, const TraceConfig& cfg = {}) {
  auto rep = is_generic(f, cfg);
  detail::require_generic(rep);
  return detail::graph_from_traces(f, rep.traces, false).tree;
}

/// eta_m = Q(z_b) - Q(z_a) over the m-th sepal descriptor (e_l, e_{l+1}),
/// sign chosen so that Im eta_m > 0.
inline EtaExtraction analytic_invariant(const AntiPolyField& f, const NcTree& tree,
                                        const std::vector<int>& root_of_edge) {
  EtaExtraction out;
  for (const auto& d : sepal_zones(tree)) {
    Complex za = f.roots().at(root_of_edge.at(d.first_edge));
    Complex zb = f.roots().at(root_of_edge.at(d.second_edge));
    Complex eta = f.Q(zb) - f.Q(za);
    if (std::abs(eta.imag()) < kImEtaTolerance) {
      throw Error(ErrorCode::ImEtaZero, "sepal zone " + std::to_string(d.index) + " has Im eta ~ 0");
    }
    bool flip = eta.imag() < 0;
    out.eta.push_back(flip ? -eta : eta);
    out.flipped.push_back(flip);
  }
  return out;
}

struct FullExtraction {
  InvariantPair pair;
  TreeExtraction tree;
  EtaExtraction eta;
};

inline FullExtraction extract_full(const AntiPolyField& f, const TraceConfig& cfg = {}) {
  FullExtraction out;
  out.tree = combinatorial_invariant(f, cfg);
  out.eta = analytic_invariant(f, out.tree.tree, out.tree.root_of_edge);
  out.pair = {out.tree.tree, out.eta.eta};
  return out;
}

inline InvariantPair extract_invariants(const AntiPolyField& f, const TraceConfig& cfg = {}) {
  return extract_full(f, cfg).pair;
}

inline ZoneCensus census_of_tree(const NcTree& t) {
  const int k = t.n() - 2;
  auto deg = incidence(t);
  int sepal = 0;
  for (int j = 1; j <= t.n(); ++j) sepal += deg[j] - 1;
  if (sepal != k) throw Error(ErrorCode::InconsistentTrace, "incidence sum disagrees with k");
  return {sepal, 2 * k + 4};
}

inline ZoneCensus zone_census(const AntiPolyField& f, const TraceConfig& cfg = {}) {
  return census_of_tree(combinatorial_invariant(f, cfg).tree);
}

/// Field pushed forward by z -> lambda z, lambda = exp(2 pi i s / (k+2)):
/// conj(lambda) P(w / lambda), again monic and centred.
inline AntiPolyField rotated_field(const AntiPolyField& f, int s) {
  const int k = f.k();
  const Complex lambda = std::polar(1.0, 2 * std::numbers::pi * s / (k + 2));
  std::vector<Complex> c = f.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::pow(lambda, -static_cast<double>(i + 1));
  c.back() = 1;
  c[c.size() - 2] = 0;
  return AntiPolyField::from_coefficients(std::move(c));
}

/// Reindex eta for rotate(tree, s): m -> m + sum_{u=n-s+1..n}(n_u - 1) mod k.
inline std::vector<Complex> rotate_eta(const NcTree& tree, const std::vector<Complex>& eta, int s) {
  const int n = tree.n();
  const int k = n - 2;
  if (k == 0) return eta;
  s = ((s % n) + n) % n;
  auto deg = incidence(tree);
  int shift = 0;
  for (int u = n - s + 1; u <= n; ++u) shift += deg[u] - 1;
  std::vector<Complex> out(eta.size());
  for (int m = 0; m < k; ++m) out[(m + shift) % k] = eta[m];
  return out;
}

/// Same reindexing, computed by matching sepal descriptors of the rotated tree.
inline std::vector<Complex> rotate_eta_by_matching(const NcTree& tree, const std::vector<Complex>& eta, int s) {
  const int n = tree.n();
  auto rotated = rotate(tree, s);
  auto before = sepal_zones(tree);
  auto after = sepal_zones(rotated);
  std::vector<Complex> out(eta.size());
  for (const auto& d : before) {
    int v = wrap_label(d.vertex + s, n);
    Edge e1(wrap_label(d.first.a + s, n), wrap_label(d.first.b + s, n));
    Edge e2(wrap_label(d.second.a + s, n), wrap_label(d.second.b + s, n));
    for (const auto& r : after) {
      if (r.vertex == v && r.first == e1 && r.second == e2) out[r.index - 1] = eta[d.index - 1];
    }
  }
  return out;
}

inline double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct PairClassification {
  bool top_equivalent = false;
  bool analytic_equivalent = false;
  std::optional<int> rotation;          // s with rotate(tree1, s) == tree2
  bool analytic_up_to_rotation = false; // eta also matches after reindexing
  InvariantPair first;
  InvariantPair second;
};

inline PairClassification classify_invariants(const InvariantPair& a, const InvariantPair& b,
                                              double tolerance = kAnalyticTolerance) {
  if (a.tree.n() != b.tree.n()) throw Error(ErrorCode::DegreeMismatch, "fields have different degrees");
  PairClassification c;
  c.first = a;
  c.second = b;
  c.top_equivalent = a.tree == b.tree;
  c.analytic_equivalent = c.top_equivalent && max_abs_diff(a.eta, b.eta) <= tolerance;
  for (int s = 0; s < a.tree.n(); ++s) {
    if (rotate(a.tree, s) != b.tree) continue;
    bool eta_match = max_abs_diff(rotate_eta(a.tree, a.eta, s), b.eta) <= tolerance;
    if (!c.rotation || (eta_match && !c.analytic_up_to_rotation)) {
      c.rotation = s;
      c.analytic_up_to_rotation = eta_match;
    }
  }
  return c;
}

inline PairClassification classify_pair(const AntiPolyField& f1, const AntiPolyField& f2, const TraceConfig& cfg = {}) {
  if (f1.degree() != f2.degree()) throw Error(ErrorCode::DegreeMismatch, "fields have different degrees");
  return classify_invariants(extract_invariants(f1, cfg), extract_invariants(f2, cfg));
}

}  // namespace ncfield
