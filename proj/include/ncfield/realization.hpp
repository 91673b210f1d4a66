#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ncfield/error.hpp"
#include "ncfield/invariants.hpp"
#include "ncfield/nc_tree.hpp"
#include "ncfield/polynomial.hpp"
#include "ncfield/trace.hpp"

namespace ncfield {

struct RealizationOptions {
  int max_newton_iterations = 40;
  int corrector_iterations = 8;
  int max_halvings = 20;
  double initial_step = 0.25;
  double min_step = 1e-8;
  double corrector_tolerance = 1e-10;
  double residual_tolerance = 1e-10;
  double eta_tolerance = 1e-9;
  double max_condition = 1e12;
  int seed_budget = 200;
  std::uint64_t rng_seed = 20240601;
  bool verify_each_step = true;
  TraceConfig trace;
};

/// Unknowns are the k+1 roots, indexed like tree.edges(); sepal zone m pairs
/// the roots on edges (a_m, b_m).
struct RealizationProblem {
  NcTree tree;
  std::vector<Complex> eta;
  std::vector<std::pair<int, int>> pairing;
  RealizationOptions options;

  static RealizationProblem make(NcTree tree, std::vector<Complex> eta, RealizationOptions options = {}) {
    require_valid(tree);
    if (tree.n() < 2) throw Error(ErrorCode::InvalidInput, "realization needs a tree with at least 2 vertices");
    RealizationProblem p;
    for (const auto& d : sepal_zones(tree)) p.pairing.emplace_back(d.first_edge, d.second_edge);
    if (eta.size() != p.pairing.size()) {
      throw Error(ErrorCode::InvalidInput, "eta must have " + std::to_string(p.pairing.size()) + " components");
    }
    for (const auto& e : eta) {
      if (!(e.imag() > 0)) throw Error(ErrorCode::InvalidInput, "every eta component needs Im > 0");
    }
    p.tree = std::move(tree);
    p.eta = std::move(eta);
    p.options = std::move(options);
    return p;
  }

  int unknowns() const { return static_cast<int>(tree.edges().size()); }
};

using RootVector = std::vector<Complex>;
using Pairing = std::vector<std::pair<int, int>>;

namespace detail {

inline std::vector<Complex> residual_for(std::span<const Complex> roots, const Pairing& pairing,
                                         std::span<const Complex> target) {
  auto c = poly::from_roots(roots);
  auto q = poly::antiderivative(c);
  std::vector<Complex> r;
  r.reserve(pairing.size() + 1);
  for (std::size_t m = 0; m < pairing.size(); ++m) {
    auto [a, b] = pairing[m];
    r.push_back(poly::eval(q, roots[b]) - poly::eval(q, roots[a]) - target[m]);
  }
  Complex sum = 0;
  for (const auto& z : roots) sum += z;
  r.push_back(sum);
  return r;
}

inline Eigen::MatrixXcd jacobian_for(std::span<const Complex> roots, const Pairing& pairing) {
  const int n = static_cast<int>(roots.size());
  Eigen::MatrixXcd J(n, n);
  const auto p = poly::from_roots(roots);
  for (int i = 0; i < n; ++i) {
    // dQ(w)/dz_i at fixed w is -int_0^w prod_{l != i}(zeta - z_l); the
    // endpoint term P(w) dw/dz_i vanishes because w is itself a root.
    std::vector<Complex> others;
    for (int l = 0; l < n; ++l) {
      if (l != i) others.push_back(roots[l]);
    }
    auto ri = poly::antiderivative(poly::from_roots(others));
    for (std::size_t m = 0; m < pairing.size(); ++m) {
      auto [a, b] = pairing[m];
      Complex v = -(poly::eval(ri, roots[b]) - poly::eval(ri, roots[a]));
      if (i == b) v += poly::eval(p, roots[b]);
      if (i == a) v -= poly::eval(p, roots[a]);
      J(static_cast<int>(m), i) = v;
    }
    J(n - 1, i) = 1.0;
  }
  return J;
}

inline double max_norm(const std::vector<Complex>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double min_gap(std::span<const Complex> z) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) g = std::min(g, std::abs(z[i] - z[j]));
  return g;
}

inline Eigen::VectorXcd to_eigen(const std::vector<Complex>& v) {
  Eigen::VectorXcd e(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
  return e;
}

struct NewtonOutcome {
  RootVector roots;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton: full step, then halve until the residual norm drops.
inline NewtonOutcome newton(RootVector z, const Pairing& pairing, std::span<const Complex> target, int max_iterations,
                            double tolerance, int max_halvings) {
  NewtonOutcome out;
  auto r = residual_for(z, pairing, target);
  double norm = max_norm(r);
  int it = 0;
  for (; it < max_iterations && norm > tolerance; ++it) {
    Eigen::MatrixXcd J = jacobian_for(z, pairing);
    Eigen::VectorXcd dz = J.partialPivLu().solve(-to_eigen(r));
    if (!dz.allFinite()) break;
    double alpha = 1.0;
    bool improved = false;
    for (int h = 0; h <= max_halvings; ++h, alpha *= 0.5) {
      RootVector trial = z;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += alpha * dz(static_cast<Eigen::Index>(i));
      if (!(min_gap(trial) > 1e-8)) continue;
      auto rt = residual_for(trial, pairing, target);
      double nt = max_norm(rt);
      if (nt < norm) {
        z = std::move(trial);
        r = std::move(rt);
        norm = nt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  out.roots = std::move(z);
  out.residual = norm;
  out.iterations = it;
  out.converged = norm <= tolerance;
  return out;
}

}  // namespace detail

inline std::vector<Complex> residual(std::span<const Complex> roots, const RealizationProblem& prob) {
  return detail::residual_for(roots, prob.pairing, prob.eta);
}

inline Eigen::MatrixXcd jacobian(std::span<const Complex> roots, const RealizationProblem& prob) {
  return detail::jacobian_for(roots, prob.pairing);
}

/// Ratio of extreme singular values.
inline double condition_estimate(const Eigen::MatrixXcd& J) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  double lo = s(s.size() - 1);
  return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

/// Jacobian with a conditioning check; throws SingularJacobian above the limit.
inline Eigen::MatrixXcd checked_jacobian(std::span<const Complex> roots, const RealizationProblem& prob) {
  auto J = jacobian(roots, prob);
  double cond = condition_estimate(J);
  if (!(cond <= prob.options.max_condition)) {
    throw Error(ErrorCode::SingularJacobian, "condition estimate " + std::to_string(cond));
  }
  return J;
}

struct SeedResult {
  RootVector roots;  // indexed like tree.edges()
  std::vector<Complex> eta;
  int tries = 0;
  std::vector<std::string> trees_seen;
};

namespace detail {

// Extracted tree equals target and each edge keeps its root.
inline bool same_stratum(const RootVector& roots, const NcTree& target, const TraceConfig& cfg) {
  try {
    auto f = AntiPolyField::from_roots(roots);
    auto ext = combinatorial_invariant(f, cfg);
    if (ext.tree != target) return false;
    Complex mean = 0;
    for (const auto& z : roots) mean += z;
    mean /= static_cast<double>(roots.size());
    double tol = 1e-6 * std::max(1.0, min_gap(roots));
    for (std::size_t e = 0; e < roots.size(); ++e) {
      if (std::abs(f.roots()[ext.root_of_edge[e]] - (roots[e] - mean)) > tol) return false;
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

struct Continuation {
  RootVector roots;
  int accepted = 0;
  int rejected = 0;
};

// Straight-line path in eta-space from `from` to `to`: Euler predictor,
// damped Newton corrector, step halving on failure.
inline Continuation continue_eta(RootVector z, const Pairing& pairing, const std::vector<Complex>& from,
                                 const std::vector<Complex>& to, const NcTree* verify_tree,
                                 const RealizationOptions& opt) {
  Continuation out;
  const std::size_t k = from.size();
  std::vector<Complex> delta(k);
  for (std::size_t m = 0; m < k; ++m) delta[m] = to[m] - from[m];
  auto at = [&](double tau) {
    std::vector<Complex> e(k);
    for (std::size_t m = 0; m < k; ++m) e[m] = tau >= 1.0 ? to[m] : from[m] + tau * delta[m];
    return e;
  };
  double tau = 0, h = opt.initial_step;
  while (tau < 1.0) {
    h = std::min(h, 1.0 - tau);
    if (h < opt.min_step) {
      throw Error(ErrorCode::HomotopyStalled, "step underflow at tau=" + std::to_string(tau));
    }
    double next = (1.0 - tau - h) < 1e-12 ? 1.0 : tau + h;
    auto target = at(next);

    RootVector pred = z;
    {
      Eigen::MatrixXcd J = jacobian_for(z, pairing);
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(z.size()));
      for (std::size_t m = 0; m < k; ++m) rhs(static_cast<Eigen::Index>(m)) = (next - tau) * delta[m];
      Eigen::VectorXcd dz = J.partialPivLu().solve(rhs);
      if (dz.allFinite()) {
        for (std::size_t i = 0; i < z.size(); ++i) pred[i] += dz(static_cast<Eigen::Index>(i));
      }
    }
    auto corr = newton(pred, pairing, target, opt.corrector_iterations, opt.corrector_tolerance, opt.max_halvings);
    bool ok = corr.converged && min_gap(corr.roots) > 1e-6;
    if (ok && verify_tree && opt.verify_each_step) ok = same_stratum(corr.roots, *verify_tree, opt.trace);
    if (ok) {
      z = std::move(corr.roots);
      tau = next;
      ++out.accepted;
      h *= 2;
    } else {
      ++out.rejected;
      h *= 0.5;
    }
  }
  out.roots = std::move(z);
  return out;
}

struct SeedState {
  bool generic = false;
  NcTree tree;
  std::string code;
  RootVector roots_by_edge;
  std::vector<Complex> eta;
  Pairing pairing;
};

inline SeedState examine(const RootVector& roots, const TraceConfig& cfg) {
  SeedState s;
  if (!(min_gap(roots) > 1e-6)) {
    s.code = "error:coincident-roots";
    return s;
  }
  try {
    auto f = AntiPolyField::from_roots(roots);
    auto ext = extract_full(f, cfg);
    s.tree = ext.pair.tree;
    s.code = canonical_code(s.tree);
    s.roots_by_edge.resize(roots.size());
    for (std::size_t e = 0; e < roots.size(); ++e) s.roots_by_edge[e] = f.roots()[ext.tree.root_of_edge[e]];
    s.eta = ext.pair.eta;
    for (const auto& d : sepal_zones(s.tree)) s.pairing.emplace_back(d.first_edge, d.second_edge);
    s.generic = true;
  } catch (const Error& e) {
    s.code = std::string("error:") + std::string(to_string(e.code()));
  }
  return s;
}

inline int shared_edges(const NcTree& a, const NcTree& b) {
  int c = 0;
  for (const auto& e : a.edges()) c += b.edge_index(e) >= 0;
  return c;
}

// Move to a neighbouring stratum by pushing eta_m across the real axis with
// the current pairing; the sign of Re eta_m picks which wall is crossed.
inline SeedState cross_wall(const SeedState& s, std::size_t m, bool flip_real, const RealizationOptions& opt) {
  std::vector<std::vector<Complex>> legs{s.eta};
  Complex w = s.eta[m];
  double x = w.real(), y = w.imag();
  if (std::abs(x) < y) x = (x < 0 ? -y : y);
  if (flip_real) x = -x;
  auto mid = s.eta;
  mid[m] = {x, y};
  legs.push_back(mid);
  auto end = s.eta;
  end[m] = {x, -y};
  legs.push_back(end);
  RootVector z = s.roots_by_edge;
  try {
    for (std::size_t i = 1; i < legs.size(); ++i) {
      z = continue_eta(z, s.pairing, legs[i - 1], legs[i], nullptr, opt).roots;
    }
  } catch (const Error&) {
    return {};
  }
  return examine(z, opt.trace);
}

}  // namespace detail

/// Heuristic placement: the root of edge {a,b} sits at the chord midpoint of
/// the two repelling directions, on a circle of radius ~k, verified by
/// extraction. On a mismatch, walk through neighbouring strata by crossing
/// one heteroclinic wall at a time, greedily gaining target edges; random
/// restarts when the walk stalls. Every examined field counts as one try.
inline SeedResult seed(const RealizationProblem& prob) {
  const auto& tree = prob.tree;
  const auto& opt = prob.options;
  const int n = tree.n();
  const int k = n - 2;
  SeedResult out;
  if (k == 0) {
    out.roots = {Complex(0)};
    out.tries = 1;
    return out;
  }
  const double radius = 1.0 + 0.5 * k;
  auto vertex = [&](int v) { return std::polar(1.0, std::numbers::pi * (2 * v - 1) / n); };
  RootVector base;
  for (const auto& e : tree.edges()) base.push_back(radius * 0.5 * (vertex(e.a) + vertex(e.b)));

  std::mt19937_64 rng(opt.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::set<std::string> seen;
  std::set<std::string> visited;
  auto look = [&](const RootVector& z) {
    ++out.tries;
    auto s = detail::examine(z, opt.trace);
    seen.insert(s.code);
    return s;
  };
  auto finish = [&](detail::SeedState& s) {
    out.roots = std::move(s.roots_by_edge);
    out.eta = std::move(s.eta);
    out.trees_seen.assign(seen.begin(), seen.end());
    return out;
  };

  auto cur = look(base);
  for (double sigma = 0.05; !cur.generic && out.tries < opt.seed_budget; sigma *= 1.2) {
    RootVector trial = base;
    for (auto& z : trial) z += sigma * radius * Complex(gauss(rng), gauss(rng));
    cur = look(trial);
  }
  while (cur.generic && out.tries < opt.seed_budget) {
    if (cur.tree == tree) return finish(cur);
    visited.insert(cur.code);
    const int score = detail::shared_edges(cur.tree, tree);
    std::vector<detail::SeedState> fresh_neighbours;
    int best = -1, best_score = -1;
    for (std::size_t m = 0; m < cur.eta.size() && out.tries < opt.seed_budget; ++m) {
      for (bool flip : {false, true}) {
        if (out.tries >= opt.seed_budget) break;
        ++out.tries;
        auto next = detail::cross_wall(cur, m, flip, opt);
        if (!next.generic) continue;
        seen.insert(next.code);
        if (next.tree == tree) return finish(next);
        if (visited.count(next.code)) continue;
        int sc = detail::shared_edges(next.tree, tree);
        if (sc > best_score) {
          best_score = sc;
          best = static_cast<int>(fresh_neighbours.size());
        }
        fresh_neighbours.push_back(std::move(next));
      }
    }
    if (best >= 0 && best_score >= score) {
      cur = std::move(fresh_neighbours[best]);
      continue;
    }
    if (!fresh_neighbours.empty()) {
      // No improving wall: step to a random unvisited neighbour.
      cur = std::move(fresh_neighbours[rng() % fresh_neighbours.size()]);
      continue;
    }
    // Stalled: restart from a perturbed heuristic placement.
    detail::SeedState fresh;
    for (double sigma = 0.1; !fresh.generic && out.tries < opt.seed_budget; sigma *= 1.2) {
      RootVector trial = base;
      for (auto& z : trial) z += std::min(sigma, 0.5) * radius * Complex(gauss(rng), gauss(rng));
      fresh = look(trial);
    }
    cur = std::move(fresh);
  }
  out.trees_seen.assign(seen.begin(), seen.end());
  std::string list;
  for (const auto& s : out.trees_seen) list += (list.empty() ? "" : " ") + s;
  throw Error(ErrorCode::SeedNotFound, "no seed for " + canonical_code(tree) + " after " + std::to_string(out.tries) +
                                           " tries; trees encountered: " + list);
}

struct RealizationResult {
  AntiPolyField field = AntiPolyField::from_coefficients({0, 1});
  RootVector roots;  // indexed like tree.edges()
  std::vector<Complex> eta;  // extracted from the returned field
  double residual = 0;
  int seed_tries = 0;
  int homotopy_steps = 0;
  int rejected_steps = 0;
};

/// Monic centred generic field with invariants (tree, eta): seed in the
/// stratum, follow the straight eta-path, polish, then verify by extraction.
inline RealizationResult realize(const RealizationProblem& prob) {
  const auto& opt = prob.options;
  RealizationResult res;
  if (prob.tree.n() == 2) {
    res.field = AntiPolyField::from_coefficients({0, 1});
    res.roots = {Complex(0)};
    res.seed_tries = 1;
    return res;
  }
  auto s = seed(prob);
  res.seed_tries = s.tries;
  auto path = detail::continue_eta(s.roots, prob.pairing, s.eta, prob.eta, &prob.tree, opt);
  res.homotopy_steps = path.accepted;
  res.rejected_steps = path.rejected;

  auto polished = detail::newton(path.roots, prob.pairing, prob.eta, opt.max_newton_iterations, 0.0, opt.max_halvings);
  checked_jacobian(polished.roots, prob);
  res.residual = polished.residual;
  if (!(res.residual <= opt.residual_tolerance)) {
    throw Error(ErrorCode::HomotopyStalled, "final residual " + std::to_string(res.residual) + " above tolerance");
  }
  res.roots = polished.roots;
  res.field = AntiPolyField::from_roots(polished.roots);

  FullExtraction ext;
  try {
    ext = extract_full(res.field, opt.trace);
  } catch (const Error& e) {
    throw Error(ErrorCode::VerificationFailed, std::string("realized field failed extraction: ") + e.what());
  }
  double diff = max_abs_diff(ext.pair.eta, prob.eta);
  if (ext.pair.tree != prob.tree || !(diff <= opt.eta_tolerance)) {
    throw Error(ErrorCode::VerificationFailed, "extracted " + canonical_code(ext.pair.tree) + " vs target " +
                                                   canonical_code(prob.tree) + ", max |eta - target| = " +
                                                   std::to_string(diff));
  }
  res.eta = ext.pair.eta;
  return res;
}

}  // namespace ncfield
