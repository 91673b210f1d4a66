#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "ncfield/error.hpp"
#include "ncfield/polynomial.hpp"

namespace ncfield {

/// Integration controls. Unset radii are derived from the field:
///   launch = 1e-4 * min root gap, landing = 10 * launch,
///   escape = max(10, 10 * max |root|).
struct TraceConfig {
  std::optional<double> launch_radius;
  std::optional<double> escape_radius;
  std::optional<double> landing_tolerance;
  double step_tolerance = 1e-10;
  long max_steps = 200000;
  double min_step = 1e-14;
  double degeneracy_tolerance = 1e-6;  // on |P'(z_j)| and on root gaps
};

struct ResolvedTraceConfig {
  double launch_radius;
  double escape_radius;
  double landing_tolerance;
  double step_tolerance;
  long max_steps;
  double min_step;
  double degeneracy_tolerance;
};

inline ResolvedTraceConfig resolve(const TraceConfig& cfg, const AntiPolyField& f) {
  double gap = f.roots().size() > 1 ? f.min_root_gap() : 1.0;
  ResolvedTraceConfig r{};
  r.launch_radius = cfg.launch_radius.value_or(1e-4 * gap);
  r.landing_tolerance = cfg.landing_tolerance.value_or(10 * r.launch_radius);
  r.escape_radius = cfg.escape_radius.value_or(std::max(10.0, 10 * f.max_root_modulus()));
  r.step_tolerance = cfg.step_tolerance;
  r.max_steps = cfg.max_steps;
  r.min_step = cfg.min_step;
  r.degeneracy_tolerance = cfg.degeneracy_tolerance;
  if (!(r.launch_radius > 0) || !(r.escape_radius > 2 * f.max_root_modulus() + 1)) {
    throw Error(ErrorCode::InvalidInput, "trace config: launch radius must be > 0 and escape radius > 2 max|z|+1");
  }
  return r;
}

struct MarkedPoint {
  double angle;
  bool attracting;
};

/// Direction exp(2 i j pi / (2k+4)) at infinity; even j attract, odd j repel.
inline MarkedPoint marked_point_angle(int k, int j) {
  if (k < 0 || j < 0 || j > 2 * k + 3) throw Error(ErrorCode::InvalidInput, "marked point index out of range");
  return {2 * std::numbers::pi * j / (2 * k + 4), j % 2 == 0};
}

struct SeparatrixDirection {
  double angle;   // in [0, 2pi)
  bool outgoing;
};

/// The four invariant rays of the linearization dw/dt = conj(lambda w),
/// lambda = P'(z_j), in anticlockwise order from the smallest nonnegative angle.
inline std::array<SeparatrixDirection, 4> separatrix_directions(const AntiPolyField& f, int root,
                                                                double degeneracy_tolerance = 1e-6) {
  const Complex lambda = f.dP(f.roots().at(root));
  if (std::abs(lambda) < degeneracy_tolerance) {
    throw Error(ErrorCode::DegenerateRoot, "root " + std::to_string(root) + " is not simple");
  }
  const double base = -std::arg(lambda) / 2;  // conj(lambda) e^{-2i theta} > 0 here
  std::array<SeparatrixDirection, 4> dirs;
  for (int m = 0; m < 4; ++m) {
    double th = std::fmod(base + m * std::numbers::pi / 2, 2 * std::numbers::pi);
    if (th < 0) th += 2 * std::numbers::pi;
    dirs[m] = {th, m % 2 == 0};
  }
  std::sort(dirs.begin(), dirs.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });
  return dirs;
}

struct Terminal {
  enum class Kind { MarkedPoint, LandingZero, Unresolved };
  Kind kind = Kind::Unresolved;
  int index = -1;    // marked point index or landing root
  double gap = 0;    // distance to the landing root
  std::string reason;

  bool is_marked() const { return kind == Kind::MarkedPoint; }
  bool is_landing() const { return kind == Kind::LandingZero; }
};

struct TracedSeparatrix {
  int origin = 0;
  int slot = 0;       // position in separatrix_directions
  bool outgoing = false;
  double launch_angle = 0;
  std::vector<Complex> polyline;
  Terminal terminal;
  double asymptotic_angle = 0;  // estimated direction at infinity, if escaped
};

namespace detail {

using State = std::array<double, 2>;

inline double unwrap(double d) {
  while (d > std::numbers::pi) d -= 2 * std::numbers::pi;
  while (d <= -std::numbers::pi) d += 2 * std::numbers::pi;
  return d;
}

// Point where |z| crosses radius r on the segment a -> b (|a| < r <= |b|).
inline Complex radius_crossing(Complex a, Complex b, double r) {
  double lo = 0, hi = 1;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    (std::abs(a + mid * (b - a)) < r ? lo : hi) = mid;
  }
  return a + hi * (b - a);
}

}  // namespace detail

/// Integrate the unit-speed field conj(P)/|P| from z_j + launch * e^{i theta},
/// forwards for outgoing separatrices and backwards for incoming ones, until
/// escape past the escape radius, landing near another root, or the step budget.
inline TracedSeparatrix trace_from(const AntiPolyField& f, int root, const SeparatrixDirection& dir,
                                   const ResolvedTraceConfig& cfg) {
  namespace odeint = boost::numeric::odeint;
  const auto& roots = f.roots();
  const int k = f.k();
  const double sign = dir.outgoing ? 1.0 : -1.0;

  TracedSeparatrix out;
  out.origin = root;
  out.outgoing = dir.outgoing;
  out.launch_angle = dir.angle;

  auto rhs = [&](const detail::State& x, detail::State& dxdt, double) {
    Complex z(x[0], x[1]);
    Complex v = std::conj(f.P(z));
    double m = std::abs(v);
    if (m == 0) {
      dxdt = {0, 0};
      return;
    }
    v *= sign / m;
    dxdt = {v.real(), v.imag()};
  };

  auto stepper = odeint::make_controlled(cfg.step_tolerance, cfg.step_tolerance,
                                         odeint::runge_kutta_dopri5<detail::State>());

  Complex z0 = roots[root] + std::polar(cfg.launch_radius, dir.angle);
  detail::State x{z0.real(), z0.imag()};
  out.polyline.push_back(z0);
  double s = 0, dt = 0.1 * cfg.launch_radius;
  const double R = cfg.escape_radius;
  std::optional<double> half_angle;

  for (long step = 0; step < cfg.max_steps; ++step) {
    Complex z(x[0], x[1]);
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i) nearest = std::min(nearest, std::abs(z - roots[i]));
    // Unit speed: never step past half the distance to a root.
    dt = std::min(dt, std::max(0.5 * nearest, 0.25 * cfg.landing_tolerance));

    Complex prev = z;
    auto res = stepper.try_step(rhs, x, s, dt);
    if (res == odeint::fail) {
      if (dt < cfg.min_step) throw Error(ErrorCode::StepFailure, "step size underflow while tracing");
      continue;
    }
    z = Complex(x[0], x[1]);
    out.polyline.push_back(z);

    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (static_cast<int>(i) == root) continue;
      double d = std::abs(z - roots[i]);
      if (d <= cfg.landing_tolerance) {
        out.terminal.kind = Terminal::Kind::LandingZero;
        out.terminal.index = static_cast<int>(i);
        out.terminal.gap = d;
        return out;
      }
    }
    if (!half_angle && std::abs(z) >= R / 2) half_angle = std::arg(detail::radius_crossing(prev, z, R / 2));
    if (std::abs(z) >= R) {
      double th_r = std::arg(detail::radius_crossing(prev, z, R));
      double th_half = half_angle.value_or(th_r);
      // Angular deviation from the asymptote decays like R^-2.
      double est = th_r + detail::unwrap(th_r - th_half) / 3.0;
      out.asymptotic_angle = est;
      const int count = 2 * k + 4;
      long j = std::lround(est * count / (2 * std::numbers::pi));
      j = ((j % count) + count) % count;
      const bool attracting = (j % 2 == 0);
      if (attracting != dir.outgoing) {
        out.terminal.kind = Terminal::Kind::Unresolved;
        out.terminal.reason = "marked point parity does not match separatrix direction";
        return out;
      }
      out.terminal.kind = Terminal::Kind::MarkedPoint;
      out.terminal.index = static_cast<int>(j);
      return out;
    }
  }
  out.terminal.kind = Terminal::Kind::Unresolved;
  out.terminal.reason = "step budget exhausted";
  return out;
}

inline TracedSeparatrix trace(const AntiPolyField& f, int root, int slot, const TraceConfig& cfg = {}) {
  auto rc = resolve(cfg, f);
  auto dirs = separatrix_directions(f, root, rc.degeneracy_tolerance);
  auto t = trace_from(f, root, dirs.at(slot), rc);
  t.slot = slot;
  return t;
}

/// All 4(k+1) separatrices, root-major, anticlockwise slot order.
inline std::vector<TracedSeparatrix> trace_all(const AntiPolyField& f, const TraceConfig& cfg = {}) {
  auto rc = resolve(cfg, f);
  std::vector<TracedSeparatrix> out;
  for (int r = 0; r < static_cast<int>(f.roots().size()); ++r) {
    auto dirs = separatrix_directions(f, r, rc.degeneracy_tolerance);
    for (int s = 0; s < 4; ++s) {
      auto t = trace_from(f, r, dirs[s], rc);
      t.slot = s;
      out.push_back(std::move(t));
    }
  }
  return out;
}

struct GenericityReport {
  enum class Verdict { Generic, NotGeneric, Indeterminate };
  Verdict verdict = Verdict::Generic;
  std::string diagnosis;
  std::vector<TracedSeparatrix> traces;  // empty when a degenerate root stopped tracing

  bool generic() const { return verdict == Verdict::Generic; }
};

/// Simple roots and no separatrix landing on another zero.
inline GenericityReport is_generic(const AntiPolyField& f, const TraceConfig& cfg = {}) {
  GenericityReport rep;
  const auto& roots = f.roots();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (std::abs(f.dP(roots[i])) < cfg.degeneracy_tolerance) {
      rep.verdict = GenericityReport::Verdict::NotGeneric;
      rep.diagnosis = "multiple root near " + std::to_string(roots[i].real()) + "+" + std::to_string(roots[i].imag()) + "i";
      return rep;
    }
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) < cfg.degeneracy_tolerance) {
        rep.verdict = GenericityReport::Verdict::NotGeneric;
        rep.diagnosis = "roots " + std::to_string(i) + " and " + std::to_string(j) + " coincide";
        return rep;
      }
    }
  }
  rep.traces = trace_all(f, cfg);
  for (const auto& t : rep.traces) {
    if (t.terminal.is_landing()) {
      rep.verdict = GenericityReport::Verdict::NotGeneric;
      rep.diagnosis = "heteroclinic connection from root " + std::to_string(t.origin) + " to root " +
                      std::to_string(t.terminal.index);
      return rep;
    }
  }
  for (const auto& t : rep.traces) {
    if (t.terminal.kind == Terminal::Kind::Unresolved) {
      rep.verdict = GenericityReport::Verdict::Indeterminate;
      rep.diagnosis = "separatrix of root " + std::to_string(t.origin) + " unresolved: " + t.terminal.reason;
      return rep;
    }
  }
  return rep;
}

}  // namespace ncfield
