#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncfield/error.hpp"

namespace ncfield {

using Complex = std::complex<double>;

namespace poly {

/// Coefficients are stored in ascending degree throughout.
inline Complex eval(std::span<const Complex> c, Complex z) {
  Complex acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// Running-error bound for Horner evaluation: sum |c_i| |z|^i.
inline double eval_magnitude(std::span<const Complex> c, Complex z) {
  double acc = 0, r = std::abs(z);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

inline std::vector<Complex> derivative(std::span<const Complex> c) {
  if (c.size() <= 1) return {Complex(0)};
  std::vector<Complex> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

/// Antiderivative with zero constant term.
inline std::vector<Complex> antiderivative(std::span<const Complex> c) {
  std::vector<Complex> q(c.size() + 1, Complex(0));
  for (std::size_t i = 0; i < c.size(); ++i) q[i + 1] = c[i] / static_cast<double>(i + 1);
  return q;
}

/// Monic polynomial with the given roots.
inline std::vector<Complex> from_roots(std::span<const Complex> roots) {
  std::vector<Complex> c{Complex(1)};
  for (const auto& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

struct RootResult {
  std::vector<Complex> roots;
  double residual = 0;  // max |P(z_j)|
  int iterations = 0;
  bool converged = false;
};

/// Aberth-Ehrlich simultaneous iteration followed by a Newton polish. Starts
/// from perturbed roots of z^d = -a_0 unless initial guesses are supplied.
inline RootResult find_roots(std::span<const Complex> c, std::optional<std::span<const Complex>> guess = {},
                             int max_iterations = 500) {
  const int d = static_cast<int>(c.size()) - 1;
  RootResult out;
  if (d < 1) return out;
  const auto dc = derivative(c);
  std::vector<Complex> z(d);
  if (guess && static_cast<int>(guess->size()) == d) {
    std::copy(guess->begin(), guess->end(), z.begin());
  } else {
    double r = std::pow(std::abs(c[0]), 1.0 / d);
    if (r < 1e-3) {
      // z^d = -a_0 degenerates; fall back to the Fujiwara bound.
      r = 0;
      for (int i = 0; i < d; ++i) r = std::max(r, std::pow(std::abs(c[i] / c[d]), 1.0 / (d - i)));
      r = std::max(r, 0.5);
    }
    const double phase = std::arg(-c[0]) / d;
    for (int j = 0; j < d; ++j) {
      double th = phase + 2 * std::numbers::pi * j / d + 0.4;
      z[j] = std::polar(r * (1.0 + 0.01 * j), th);
    }
  }

  int it = 0;
  for (; it < max_iterations; ++it) {
    double max_step = 0, max_mod = 1;
    for (int j = 0; j < d; ++j) {
      Complex p = eval(c, z[j]);
      if (p == Complex(0)) continue;
      Complex ratio = p / eval(dc, z[j]);
      Complex sum = 0;
      for (int i = 0; i < d; ++i) {
        if (i != j) sum += 1.0 / (z[j] - z[i]);
      }
      Complex w = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = ratio;
      z[j] -= w;
      max_step = std::max(max_step, std::abs(w));
      max_mod = std::max(max_mod, std::abs(z[j]));
    }
    if (max_step <= 4 * std::numeric_limits<double>::epsilon() * max_mod) {
      out.converged = true;
      break;
    }
  }
  for (auto& zj : z) {
    for (int k = 0; k < 2; ++k) {
      Complex dp = eval(dc, zj);
      if (std::abs(dp) == 0) break;
      Complex step = eval(c, zj) / dp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      zj -= step;
    }
  }
  out.roots = std::move(z);
  out.iterations = it;
  for (const auto& zj : out.roots) out.residual = std::max(out.residual, std::abs(eval(c, zj)));
  return out;
}

}  // namespace poly

/// The vector field dz/dt = conj(P(z)) for a monic centred polynomial P of
/// degree k+1, with its roots and the antiderivative Q (Q(0) = 0) cached.
class AntiPolyField {
 public:
  static constexpr double kCoefficientTolerance = 1e-12;
  static constexpr double kRootResidual = 1e-12;

  static AntiPolyField from_coefficients(std::vector<Complex> coeffs) {
    if (coeffs.size() < 2) throw Error(ErrorCode::InvalidInput, "degree must be >= 1");
    const std::size_t d = coeffs.size() - 1;
    double scale = 1;
    for (const auto& a : coeffs) scale = std::max(scale, std::abs(a));
    if (std::abs(coeffs[d] - Complex(1)) > kCoefficientTolerance) {
      throw Error(ErrorCode::NotMonic, "leading coefficient must be 1");
    }
    if (std::abs(coeffs[d - 1]) > kCoefficientTolerance * scale) {
      throw Error(ErrorCode::NotCentred, "subleading coefficient must be 0");
    }
    coeffs[d] = 1;
    coeffs[d - 1] = 0;
    return AntiPolyField(std::move(coeffs), std::nullopt);
  }

  /// Field with the given roots; the centre of mass is removed and the
  /// supplied roots seed the root finder.
  static AntiPolyField from_roots(std::vector<Complex> roots) {
    if (roots.empty()) throw Error(ErrorCode::InvalidInput, "need at least one root");
    Complex mean = 0;
    for (const auto& r : roots) mean += r;
    mean /= static_cast<double>(roots.size());
    for (auto& r : roots) r -= mean;
    auto c = poly::from_roots(roots);
    c.back() = 1;
    c[c.size() - 2] = 0;
    return AntiPolyField(std::move(c), roots);
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int k() const { return degree() - 1; }

  const std::vector<Complex>& coefficients() const { return coeffs_; }
  const std::vector<Complex>& roots() const { return roots_; }
  const std::vector<Complex>& antiderivative_coefficients() const { return q_; }
  double root_residual() const { return residual_; }

  Complex P(Complex z) const { return poly::eval(coeffs_, z); }
  Complex dP(Complex z) const { return poly::eval(dp_, z); }
  Complex Q(Complex z) const { return poly::eval(q_, z); }

  /// Velocity conj(P(z)).
  Complex velocity(Complex z) const { return std::conj(P(z)); }

  double min_root_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots_.size(); ++i)
      for (std::size_t j = i + 1; j < roots_.size(); ++j) g = std::min(g, std::abs(roots_[i] - roots_[j]));
    return g;
  }

  double max_root_modulus() const {
    double m = 0;
    for (const auto& r : roots_) m = std::max(m, std::abs(r));
    return m;
  }

 private:
  AntiPolyField(std::vector<Complex> coeffs, std::optional<std::vector<Complex>> guess) : coeffs_(std::move(coeffs)) {
    dp_ = poly::derivative(coeffs_);
    q_ = poly::antiderivative(coeffs_);
    poly::RootResult rr;
    if (guess) {
      rr = poly::find_roots(coeffs_, std::span<const Complex>(*guess));
    } else {
      rr = poly::find_roots(coeffs_);
    }
    double scale = 1;
    for (const auto& a : coeffs_) scale = std::max(scale, std::abs(a));
    // Accept either the nominal residual or what double-precision Horner can
    // resolve at the root's magnitude, whichever is larger.
    double worst = 0;
    for (const auto& z : rr.roots) {
      double bound = std::max(kRootResidual * scale,
                              64 * std::numeric_limits<double>::epsilon() * poly::eval_magnitude(coeffs_, z));
      worst = std::max(worst, std::abs(poly::eval(coeffs_, z)) / bound);
    }
    if (!(worst <= 1.0)) {
      throw Error(ErrorCode::RootFindingDiverged, "root residual " + std::to_string(rr.residual) + " above tolerance");
    }
    roots_ = std::move(rr.roots);
    residual_ = rr.residual;
  }

  std::vector<Complex> coeffs_;
  std::vector<Complex> dp_;
  std::vector<Complex> q_;
  std::vector<Complex> roots_;
  double residual_ = 0;
};

}  // namespace ncfield
