#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ncfield/counting.hpp"
#include "ncfield/error.hpp"
#include "ncfield/nc_tree.hpp"
#include "ncfield/polynomial.hpp"
#include "ncfield/realization.hpp"
#include "ncfield/ternary_tree.hpp"
#include "ncfield/trace.hpp"

namespace ncfield {

/// Ternary tree with k+1 internal vertices and nu in R_+^k, one entry per
/// internal edge in internal_edge_order.
struct HeteroInvariant {
  TernaryTree tree;
  std::vector<double> nu;
};

struct HeteroExtraction {
  HeteroInvariant invariant;
  std::vector<int> root_of_vertex;  // tree node -> root index, -1 for leaves
  std::vector<int> marked_of_leaf;  // tree node -> marked point, -1 for internal
  std::vector<std::pair<int, int>> connections;  // (source root, target root)
  std::vector<TracedSeparatrix> traces;
};

inline constexpr double kRealTolerance = 1e-9;

/// Ternary tree and nu of a field with k heteroclinic connections. The edge
/// to marked point 0 is collapsed into the root.
inline HeteroExtraction extract_hetero(const AntiPolyField& f, const TraceConfig& cfg = {},
                                       double im_tolerance = kRealTolerance) {
  const int k = f.k();
  const int roots = k + 1;
  HeteroExtraction out;
  out.traces = trace_all(f, cfg);
  const auto& traces = out.traces;
  auto at = [&](int r, int s) -> const TracedSeparatrix& { return traces[4 * r + s]; };

  std::set<std::pair<int, int>> from_out, from_in;
  std::vector<int> marked_hits(2 * k + 4, 0);
  for (const auto& t : traces) {
    if (t.terminal.kind == Terminal::Kind::Unresolved) {
      throw Error(ErrorCode::InconsistentTrace, "separatrix of root " + std::to_string(t.origin) +
                                                    " unresolved: " + t.terminal.reason);
    }
    if (t.terminal.is_landing()) {
      if (t.outgoing) {
        from_out.emplace(t.origin, t.terminal.index);
      } else {
        from_in.emplace(t.terminal.index, t.origin);
      }
    } else {
      ++marked_hits[t.terminal.index];
    }
  }
  if (from_out != from_in) {
    throw Error(ErrorCode::InconsistentTrace, "heteroclinic connections not seen from both ends");
  }
  if (static_cast<int>(from_out.size()) != k) {
    throw Error(ErrorCode::WrongConnectionCount,
                std::to_string(from_out.size()) + " heteroclinic connections, expected " + std::to_string(k));
  }
  for (int j = 0; j < 2 * k + 4; ++j) {
    if (marked_hits[j] != 1) {
      throw Error(ErrorCode::WrongConnectionCount, "marked point " + std::to_string(j) + " reached by " +
                                                       std::to_string(marked_hits[j]) + " separatrices");
    }
  }
  out.connections.assign(from_out.begin(), from_out.end());

  // Slot at `to` through which the connection with `from` arrives.
  auto partner_slot = [&](int from, int to) {
    for (int s = 0; s < 4; ++s) {
      const auto& t = at(to, s);
      if (t.terminal.is_landing() && t.terminal.index == from) return s;
    }
    throw Error(ErrorCode::InconsistentTrace, "connection has no partner separatrix");
  };

  int top = -1, top_slot = -1;
  for (int r = 0; r < roots; ++r) {
    for (int s = 0; s < 4; ++s) {
      const auto& t = at(r, s);
      if (t.terminal.is_marked() && t.terminal.index == 0) top = r, top_slot = s;
    }
  }

  std::string code;
  std::vector<int> root_pre, leaf_pre;  // in preorder
  std::vector<bool> seen(roots, false);
  std::function<void(int, int)> visit = [&](int r, int parent_slot) {
    if (seen[r]) throw Error(ErrorCode::InconsistentTrace, "connection graph has a cycle");
    seen[r] = true;
    code += 'I';
    root_pre.push_back(r);
    leaf_pre.push_back(-1);
    for (int c = 1; c <= 3; ++c) {
      int s = (parent_slot + c) % 4;
      const auto& t = at(r, s);
      if (t.terminal.is_marked()) {
        code += 'L';
        root_pre.push_back(-1);
        leaf_pre.push_back(t.terminal.index);
      } else {
        int next = t.terminal.index;
        visit(next, partner_slot(r, next));
      }
    }
  };
  visit(top, top_slot);
  if (std::count(seen.begin(), seen.end(), true) != roots) {
    throw Error(ErrorCode::InconsistentTrace, "connection graph is not connected");
  }

  out.invariant.tree = TernaryTree::from_code(code);
  const auto pre = out.invariant.tree.preorder();
  out.root_of_vertex.assign(pre.size(), -1);
  out.marked_of_leaf.assign(pre.size(), -1);
  int expected_leaf = 1;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    out.root_of_vertex[pre[i]] = root_pre[i];
    out.marked_of_leaf[pre[i]] = leaf_pre[i];
    if (leaf_pre[i] >= 0 && leaf_pre[i] != expected_leaf++) {
      throw Error(ErrorCode::InconsistentTrace, "leaves are not met in anticlockwise order");
    }
  }

  for (const auto& e : internal_edge_order(out.invariant.tree)) {
    int a = out.root_of_vertex[e.parent], b = out.root_of_vertex[e.child];
    bool forward = from_out.count({a, b}) > 0;
    int src = forward ? a : b, dst = forward ? b : a;
    Complex d = f.Q(f.roots()[dst]) - f.Q(f.roots()[src]);
    if (std::abs(d.imag()) > im_tolerance * std::max(1.0, std::abs(d)) || !(d.real() > 0)) {
      throw Error(ErrorCode::NotRealPositive, "connection integral " + std::to_string(d.real()) + "+" +
                                                  std::to_string(d.imag()) + "i is not real positive");
    }
    out.invariant.nu.push_back(std::abs(d));
  }
  return out;
}

/// Generic stratum adjacent to a heteroclinic class: the nc tree whose
/// sepal zones collapse onto the connections when Im eta -> 0+.
struct HeteroStratum {
  NcTree tree;
  std::vector<int> edge_of_vertex;   // tree node -> edge index in `tree`, -1 for leaves
  std::vector<int> connection_of_zone;  // sepal zone (0-based) -> internal edge position
};

inline HeteroStratum adjacent_stratum(const TernaryTree& t) {
  const int m = t.internal_count();
  if (m < 1) throw Error(ErrorCode::InvalidInput, "ternary tree needs at least one internal vertex");
  const int k = m - 1;
  const int n = k + 2;
  const auto& nodes = t.nodes();

  // Slot 0 of each internal vertex faces its parent (marked point 0 for the
  // root); slots 1..3 are the children. Types alternate around a vertex.
  std::vector<bool> slot0_out(nodes.size(), true);
  for (int v : t.preorder()) {
    if (v == 0 || nodes[v].leaf) continue;
    const auto& nd = nodes[v];
    bool parent_out = slot0_out[nd.parent] ^ ((nd.parent_slot + 1) % 2 == 1);
    slot0_out[v] = !parent_out;
  }
  auto outgoing = [&](int v, int s) { return slot0_out[v] ^ (s % 2 == 1); };

  std::vector<int> leaf_index(nodes.size(), -1);
  int next_leaf = 1;
  for (int v : t.leaves()) leaf_index[v] = next_leaf++;

  // Backward continuation of an incoming slot once its connection breaks:
  // it follows the next incoming separatrix anticlockwise at the far vertex.
  std::function<int(int, int)> follow = [&](int v, int s) -> int {
    if (s == 0) {
      int p = nodes[v].parent;
      if (p < 0) throw Error(ErrorCode::InconsistentTrace, "root slot toward marked point 0 is not incoming");
      return follow(p, (nodes[v].parent_slot + 2) % 4);
    }
    int c = nodes[v].children[s - 1];
    if (nodes[c].leaf) return leaf_index[c];
    return follow(c, 1);
  };

  HeteroStratum out;
  std::vector<Edge> edges;
  std::vector<std::pair<int, Edge>> owner;
  for (int v : t.internal_vertices()) {
    std::vector<int> ends;
    for (int s = 0; s < 4; ++s) {
      if (outgoing(v, s)) continue;
      int j = follow(v, s);
      if (j % 2 == 0) throw Error(ErrorCode::InconsistentTrace, "incoming slot reaches an attracting leaf");
      ends.push_back((j + 1) / 2);
    }
    Edge e(ends.at(0), ends.at(1));
    edges.push_back(e);
    owner.emplace_back(v, e);
  }
  out.tree = NcTree(n, edges);
  if (auto rep = validate(out.tree); !rep) {
    throw Error(ErrorCode::InconsistentTrace, "adjacent stratum is not a noncrossing tree: " + rep.violated);
  }
  out.edge_of_vertex.assign(nodes.size(), -1);
  for (const auto& [v, e] : owner) out.edge_of_vertex[v] = out.tree.edge_index(e);

  const auto zones = sepal_zones(out.tree);
  out.connection_of_zone.assign(zones.size(), -1);
  const auto order = internal_edge_order(t);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& e = order[i];
    bool forward = outgoing(e.parent, nodes[e.child].parent_slot + 1);
    int src = out.edge_of_vertex[forward ? e.parent : e.child];
    int dst = out.edge_of_vertex[forward ? e.child : e.parent];
    bool found = false;
    for (const auto& d : zones) {
      if (d.first_edge == src && d.second_edge == dst) {
        if (out.connection_of_zone[d.index - 1] >= 0) break;
        out.connection_of_zone[d.index - 1] = static_cast<int>(i);
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::InconsistentTrace, "connection has no matching sepal zone");
  }
  return out;
}

struct HeteroRealization {
  AntiPolyField field = AntiPolyField::from_coefficients({0, 1});
  HeteroStratum stratum;
  HeteroExtraction extraction;
  double residual = 0;
};

inline const std::vector<double>& boundary_schedule() {
  static const std::vector<double> s{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  return s;
}

/// Field with invariant (t, nu): realize the adjacent generic stratum with
/// eta = nu + i s, shrink s along the schedule, finish with eta = nu exactly.
inline HeteroRealization realize_hetero(const TernaryTree& t, const std::vector<double>& nu,
                                        RealizationOptions opt = {}) {
  const int m = t.internal_count();
  if (m < 1) throw Error(ErrorCode::InvalidInput, "ternary tree needs at least one internal vertex");
  if (static_cast<int>(nu.size()) != m - 1) {
    throw Error(ErrorCode::InvalidInput, "nu must have " + std::to_string(m - 1) + " components");
  }
  for (double x : nu) {
    if (!(x > 0) || !std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "nu components must be positive");
  }
  HeteroRealization res;
  res.stratum = adjacent_stratum(t);
  if (m == 1) {
    res.extraction = extract_hetero(res.field, opt.trace);
    return res;
  }
  auto target = [&](double s) {
    std::vector<Complex> eta(nu.size());
    for (std::size_t z = 0; z < eta.size(); ++z) eta[z] = {nu[res.stratum.connection_of_zone[z]], s};
    return eta;
  };
  const auto& schedule = boundary_schedule();
  auto prob = RealizationProblem::make(res.stratum.tree, target(schedule.front()), opt);
  RootVector z = realize(prob).roots;
  try {
    for (std::size_t i = 1; i < schedule.size(); ++i) {
      // Below 1e-3 the zones are too thin for tracing to resolve the tree.
      const NcTree* check = schedule[i] >= 1e-3 ? &prob.tree : nullptr;
      z = detail::continue_eta(z, prob.pairing, target(schedule[i - 1]), target(schedule[i]), check, opt).roots;
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::BoundaryApproachStalled, std::string("approach to the boundary failed: ") + e.what());
  }
  auto last = detail::newton(z, prob.pairing, target(0.0), opt.max_newton_iterations, 0.0, opt.max_halvings);
  res.residual = last.residual;
  if (!(last.residual <= opt.residual_tolerance)) {
    throw Error(ErrorCode::BoundaryApproachStalled, "boundary residual " + std::to_string(last.residual));
  }
  res.field = AntiPolyField::from_roots(last.roots);
  try {
    res.extraction = extract_hetero(res.field, opt.trace);
  } catch (const Error& e) {
    throw Error(ErrorCode::VerificationFailed, std::string("boundary field failed extraction: ") + e.what());
  }
  const auto& got = res.extraction.invariant;
  double diff = 0;
  for (std::size_t i = 0; i < nu.size(); ++i) diff = std::max(diff, std::abs(got.nu[i] - nu[i]) / std::max(1.0, nu[i]));
  if (got.tree != t || !(diff <= 1e-8)) {
    throw Error(ErrorCode::VerificationFailed, "extracted " + got.tree.code() + " vs target " + t.code() +
                                                   ", max relative nu error " + std::to_string(diff));
  }
  return res;
}

inline BigCount count_hetero_classes(long k) {
  if (k < 0) throw Error(ErrorCode::InvalidInput, "k must be >= 0");
  return count_A(k + 2);
}

}  // namespace ncfield
