#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ncfield/polynomial.hpp"
#include "ncfield/quadratic.hpp"
#include "ncfield/trace.hpp"

namespace ncfield {

struct PortraitStyle {
  int size = 480;
  double stroke = 1.4;
};

namespace detail {

struct Frame {
  double centre, scale;
  double x(Complex z) const { return centre + scale * z.real(); }
  double y(Complex z) const { return centre - scale * z.imag(); }
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(5);
  os << v;
  return os.str();
}

}  // namespace detail

/// Separatrix portrait: roots as dots, incoming separatrices solid, outgoing
/// dashed, heteroclinic connections highlighted, marked points on a circle of
/// radius 1.2 max|root|. Degenerate fields render their roots only.
inline std::string portrait_svg(const AntiPolyField& f, const TraceConfig& cfg = {}, const PortraitStyle& st = {}) {
  const int k = f.k();
  const double rc = f.max_root_modulus() > 0 ? 1.2 * f.max_root_modulus() : 1.0;
  const detail::Frame fr{st.size / 2.0, 0.45 * st.size / rc};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << st.size << "\" height=\"" << st.size
     << "\" viewBox=\"0 0 " << st.size << ' ' << st.size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<circle cx=\"" << fr.centre << "\" cy=\"" << fr.centre << "\" r=\"" << detail::fmt(fr.scale * rc)
     << "\" fill=\"none\" stroke=\"#bbb\"/>\n";

  std::vector<TracedSeparatrix> traces;
  std::string note;
  try {
    traces = trace_all(f, cfg);
  } catch (const Error& e) {
    note = e.what();
  }
  for (const auto& t : traces) {
    std::string path;
    bool stopped = false;
    for (const auto& z : t.polyline) {
      if (std::abs(z) > rc) {
        stopped = true;
        break;
      }
      path += (path.empty() ? "M" : " L") + detail::fmt(fr.x(z)) + "," + detail::fmt(fr.y(z));
    }
    if (t.terminal.is_marked() && stopped) {
      Complex end = std::polar(rc, marked_point_angle(k, t.terminal.index).angle);
      path += " L" + detail::fmt(fr.x(end)) + "," + detail::fmt(fr.y(end));
    } else if (t.terminal.is_landing()) {
      Complex end = f.roots()[t.terminal.index];
      path += " L" + detail::fmt(fr.x(end)) + "," + detail::fmt(fr.y(end));
    }
    os << "<path d=\"" << path << "\" fill=\"none\"";
    if (t.terminal.is_landing()) {
      os << " stroke=\"#d62728\" stroke-width=\"" << 2.5 * st.stroke << "\"";
    } else {
      os << " stroke=\"" << (t.outgoing ? "#1f77b4" : "#222") << "\" stroke-width=\"" << st.stroke << "\"";
    }
    if (t.outgoing) os << " stroke-dasharray=\"6,4\"";
    os << "/>\n";
  }
  for (int j = 0; j < 2 * k + 4; ++j) {
    auto mp = marked_point_angle(k, j);
    Complex p = std::polar(rc, mp.angle);
    Complex lab = std::polar(rc * 1.08, mp.angle);
    os << "<circle cx=\"" << detail::fmt(fr.x(p)) << "\" cy=\"" << detail::fmt(fr.y(p)) << "\" r=\"4\" "
       << (mp.attracting ? "fill=\"#222\"" : "fill=\"white\" stroke=\"#222\"") << "/>\n";
    os << "<text x=\"" << detail::fmt(fr.x(lab)) << "\" y=\"" << detail::fmt(fr.y(lab) + 4)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << j << "</text>\n";
  }
  for (const auto& z : f.roots()) {
    os << "<circle cx=\"" << detail::fmt(fr.x(z)) << "\" cy=\"" << detail::fmt(fr.y(z))
       << "\" r=\"4\" fill=\"#d62728\"/>\n";
  }
  if (!note.empty()) os << "<text x=\"8\" y=\"16\" font-size=\"12\">" << note << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

/// eps-plane diagram for z^2 - eps: the three heteroclinic rays, the double
/// saddle at the origin, sample dots by class, then one portrait per entry
/// of `portraits` in a row underneath.
inline std::string bifurcation_svg(const std::vector<BifurcationSample>& samples, const std::vector<Complex>& portraits,
                                   const TraceConfig& cfg = {}) {
  const int main = 480, thumb = 200;
  const int cols = std::max<int>(1, static_cast<int>(portraits.size()));
  const int width = std::max(main, cols * thumb);
  const int height = main + (portraits.empty() ? 0 : thumb + 24);
  double rmax = 1.0;
  for (const auto& s : samples) rmax = std::max(rmax, std::abs(s.epsilon));
  for (const auto& e : portraits) rmax = std::max(rmax, std::abs(e));
  const detail::Frame fr{main / 2.0, 0.45 * main / rmax};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int n = 0; n < 3; ++n) {
    Complex end = std::polar(1.05 * rmax, 2 * std::numbers::pi * n / 3);
    os << "<line x1=\"" << fr.centre << "\" y1=\"" << fr.centre << "\" x2=\"" << detail::fmt(fr.x(end)) << "\" y2=\""
       << detail::fmt(fr.y(end)) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  }
  for (const auto& s : samples) {
    const char* colour = "#999";
    if (s.stratum) {
      static const char* palette[] = {"#1f77b4", "#2ca02c", "#9467bd"};
      int idx = 0;
      for (int q = 0; q < 3; ++q) {
        if (*s.stratum == quadratic_sector_tree(q)) idx = q;
      }
      colour = palette[idx];
    } else if (s.cls == QuadraticClass::Heteroclinic) {
      colour = "#d62728";
    }
    os << "<circle cx=\"" << detail::fmt(fr.x(s.epsilon)) << "\" cy=\"" << detail::fmt(fr.y(s.epsilon))
       << "\" r=\"3\" fill=\"" << colour << "\"><title>" << s.label() << "</title></circle>\n";
  }
  os << "<circle cx=\"" << fr.centre << "\" cy=\"" << fr.centre << "\" r=\"5\" fill=\"black\"/>\n";
  for (std::size_t i = 0; i < portraits.size(); ++i) {
    const Complex e = portraits[i];
    os << "<circle cx=\"" << detail::fmt(fr.x(e)) << "\" cy=\"" << detail::fmt(fr.y(e))
       << "\" r=\"6\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<g transform=\"translate(" << i * thumb << ',' << main << ")\">\n";
    os << "<text x=\"" << thumb / 2 << "\" y=\"14\" font-size=\"11\" text-anchor=\"middle\">eps = "
       << detail::fmt(e.real()) << (e.imag() < 0 ? " - " : " + ") << detail::fmt(std::abs(e.imag())) << "i</text>\n";
    os << "<svg x=\"0\" y=\"20\" width=\"" << thumb << "\" height=\"" << thumb << "\" viewBox=\"0 0 480 480\">\n";
    std::string inner;
    try {
      inner = portrait_svg(quadratic_field(e), cfg);
    } catch (const Error& err) {
      inner = std::string("<text x=\"10\" y=\"20\">") + err.what() + "</text>";
    }
    os << inner << "</svg>\n</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ncfield
