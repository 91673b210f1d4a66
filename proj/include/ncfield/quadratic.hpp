#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncfield/nc_tree.hpp"
#include "ncfield/polynomial.hpp"

namespace ncfield {

// The family dz/dt = conj(z^2 - eps).

enum class QuadraticClass { Generic, Heteroclinic, DoubleSaddle };

enum class Orientation { None, PlusToMinus, MinusToPlus };  // sqrt(eps) -> -sqrt(eps) and back

inline std::string to_string(QuadraticClass c) {
  switch (c) {
    case QuadraticClass::Generic: return "generic";
    case QuadraticClass::Heteroclinic: return "heteroclinic";
    case QuadraticClass::DoubleSaddle: return "double-saddle";
  }
  return "?";
}

inline std::string to_string(Orientation o) {
  switch (o) {
    case Orientation::PlusToMinus: return "sqrt(eps)->-sqrt(eps)";
    case Orientation::MinusToPlus: return "-sqrt(eps)->sqrt(eps)";
    case Orientation::None: return "none";
  }
  return "?";
}

struct BifurcationSample {
  Complex epsilon;
  QuadraticClass cls = QuadraticClass::Generic;
  std::optional<NcTree> stratum;  // Generic only
  Orientation orientation = Orientation::None;
  Complex connection_integral;

  /// CSV-safe label, e.g. "generic:1-3/2-3" or "heteroclinic:sqrt(eps)->-sqrt(eps)".
  std::string label() const {
    std::string s = to_string(cls);
    if (stratum) {
      s += ':';
      bool first = true;
      for (const auto& e : stratum->edges()) {
        if (!first) s += '/';
        first = false;
        s += std::to_string(e.a) + "-" + std::to_string(e.b);
      }
    } else if (cls == QuadraticClass::Heteroclinic) {
      s += ":" + to_string(orientation);
    }
    return s;
  }
};

/// Integral of z^2 - eps from -sqrt(eps) to sqrt(eps), principal branch.
inline Complex connection_integral(Complex eps) { return -4.0 * eps * std::sqrt(eps) / 3.0; }

inline NcTree quadratic_sector_tree(int sector) {
  // sector 0: arg in (0, 2pi/3); 1: (2pi/3, 4pi/3); 2: (-2pi/3, 0).
  // eps -> eps e^{-2 i pi/3} rotates the tree by one vertex.
  static const NcTree base(3, {{1, 2}, {2, 3}});
  static const int shift[3] = {1, 0, 2};
  return rotate(base, shift[sector]);
}

inline BifurcationSample quadratic_classify(Complex eps, double angle_tolerance = 1e-9) {
  BifurcationSample s;
  s.epsilon = eps;
  s.connection_integral = connection_integral(eps);
  if (eps == Complex(0)) {
    s.cls = QuadraticClass::DoubleSaddle;
    return s;
  }
  const double a = std::arg(eps);  // (-pi, pi]
  const double third = 2 * std::numbers::pi / 3;
  for (double ray : {0.0, third, -third}) {
    double d = std::remainder(a - ray, 2 * std::numbers::pi);
    if (std::abs(d) <= angle_tolerance) {
      s.cls = QuadraticClass::Heteroclinic;
      s.orientation = s.connection_integral.real() < 0 ? Orientation::PlusToMinus : Orientation::MinusToPlus;
      return s;
    }
  }
  int sector = a > 0 && a < third ? 0 : (a < 0 && a > -third ? 2 : 1);
  s.stratum = quadratic_sector_tree(sector);
  return s;
}

struct PolarGrid {
  std::vector<double> radii{0.5, 1.0, 1.5};
  int angles = 48;
  bool include_origin = true;
};

inline std::vector<BifurcationSample> sample_polar(const PolarGrid& g, double angle_tolerance = 1e-9) {
  std::vector<BifurcationSample> out;
  if (g.include_origin) out.push_back(quadratic_classify(0, angle_tolerance));
  for (double r : g.radii) {
    for (int j = 0; j < g.angles; ++j) {
      out.push_back(quadratic_classify(std::polar(r, 2 * std::numbers::pi * j / g.angles), angle_tolerance));
    }
  }
  return out;
}

struct RectGrid {
  double re_min = -1.5, re_max = 1.5, im_min = -1.5, im_max = 1.5;
  int nx = 31, ny = 31;
};

inline std::vector<BifurcationSample> sample_rect(const RectGrid& g, double angle_tolerance = 1e-9) {
  std::vector<BifurcationSample> out;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      double x = g.nx > 1 ? g.re_min + (g.re_max - g.re_min) * i / (g.nx - 1) : g.re_min;
      double y = g.ny > 1 ? g.im_min + (g.im_max - g.im_min) * j / (g.ny - 1) : g.im_min;
      out.push_back(quadratic_classify({x, y}, angle_tolerance));
    }
  }
  return out;
}

struct RegionSummary {
  int regions = 0;          // maximal generic angular runs between heteroclinic rays
  bool consistent = true;   // each run carries a single stratum tree on every ring
  std::vector<std::string> labels;
};

/// Generic regions seen around the circle at each sampled radius.
inline RegionSummary count_regions(const std::vector<BifurcationSample>& samples) {
  std::vector<std::pair<double, const BifurcationSample*>> ring;
  RegionSummary best;
  std::vector<double> radii;
  for (const auto& s : samples) {
    double r = std::abs(s.epsilon);
    if (r == 0) continue;
    bool known = false;
    for (double x : radii) known |= std::abs(x - r) < 1e-12;
    if (!known) radii.push_back(r);
  }
  bool first_ring = true;
  for (double r : radii) {
    ring.clear();
    for (const auto& s : samples) {
      if (std::abs(std::abs(s.epsilon) - r) < 1e-12) {
        double a = std::arg(s.epsilon);
        ring.emplace_back(a < 0 ? a + 2 * std::numbers::pi : a, &s);
      }
    }
    std::sort(ring.begin(), ring.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    // Start just after a non-generic sample so that runs do not wrap.
    std::size_t start = 0;
    while (start < ring.size() && ring[start].second->cls == QuadraticClass::Generic) ++start;
    RegionSummary here;
    if (start == ring.size()) {
      here.regions = ring.empty() ? 0 : 1;
    } else {
      std::string current;
      bool in_run = false;
      for (std::size_t i = 1; i <= ring.size(); ++i) {
        const auto* s = ring[(start + i) % ring.size()].second;
        if (s->cls == QuadraticClass::Generic) {
          if (!in_run) {
            ++here.regions;
            current = s->label();
            here.labels.push_back(current);
            in_run = true;
          } else if (s->label() != current) {
            here.consistent = false;
          }
        } else {
          in_run = false;
        }
      }
    }
    if (first_ring) {
      best = here;
      first_ring = false;
    } else if (here.regions != best.regions || here.labels != best.labels) {
      best.consistent = false;
    }
    best.consistent = best.consistent && here.consistent;
  }
  return best;
}

inline std::string bifurcation_csv(const std::vector<BifurcationSample>& samples) {
  std::ostringstream os;
  os.precision(17);
  os << "re_eps,im_eps,class,re_integral,im_integral\n";
  for (const auto& s : samples) {
    os << s.epsilon.real() << ',' << s.epsilon.imag() << ',' << s.label() << ',' << s.connection_integral.real()
       << ',' << s.connection_integral.imag() << '\n';
  }
  return os.str();
}

/// The quadratic field z^2 - eps.
inline AntiPolyField quadratic_field(Complex eps) { return AntiPolyField::from_coefficients({-eps, 0, 1}); }

}  // namespace ncfield
