#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncfield/error.hpp"
#include "ncfield/heteroclinic.hpp"
#include "ncfield/invariants.hpp"
#include "ncfield/nc_tree.hpp"
#include "ncfield/polynomial.hpp"
#include "ncfield/ternary_tree.hpp"
#include "ncfield/trace.hpp"

namespace ncfield::io {

using Json = nlohmann::json;

template <class F>
auto guarded(F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, "complex must be [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline Json complex_list_to_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(complex_to_json(z));
  return a;
}

inline std::vector<Complex> complex_list_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "expected an array of [re, im]");
    std::vector<Complex> out;
    for (const auto& x : j) out.push_back(complex_from_json(x));
    return out;
  });
}

inline Json to_json(const NcTree& t) {
  Json edges = Json::array();
  for (const auto& e : t.edges()) edges.push_back({e.a, e.b});
  return {{"n", t.n()}, {"edges", edges}};
}

inline NcTree tree_from_json(const Json& j) {
  return guarded([&] {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::InvalidInput, "edge must be [a, b]");
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    NcTree t(j.at("n").get<int>(), std::move(edges));
    require_valid(t);
    return t;
  });
}

inline Json to_json(const AntiPolyField& f) { return {{"coeffs", complex_list_to_json(f.coefficients())}}; }

inline AntiPolyField field_from_json(const Json& j) {
  return guarded([&] { return AntiPolyField::from_coefficients(complex_list_from_json(j.at("coeffs"))); });
}

/// Accepts {"eta": [...]} or a bare array.
inline std::vector<Complex> eta_from_json(const Json& j) {
  return guarded([&] { return complex_list_from_json(j.is_object() ? j.at("eta") : j); });
}

inline Json to_json(const InvariantPair& p) { return {{"tree", to_json(p.tree)}, {"eta", complex_list_to_json(p.eta)}}; }

inline InvariantPair invariant_from_json(const Json& j) {
  return guarded([&] { return InvariantPair{tree_from_json(j.at("tree")), complex_list_from_json(j.at("eta"))}; });
}

/// Leaf = 0, internal vertex = [c1, c2, c3].
inline Json to_json(const TernaryTree& t) {
  std::function<Json(int)> go = [&](int v) -> Json {
    const auto& n = t.node(v);
    if (n.leaf) return 0;
    return Json::array({go(n.children[0]), go(n.children[1]), go(n.children[2])});
  };
  return go(0);
}

inline TernaryTree ternary_from_json(const Json& j) {
  std::string code;
  std::function<void(const Json&)> go = [&](const Json& x) {
    if (x.is_number_integer() && x.get<int>() == 0) {
      code += 'L';
    } else if (x.is_array() && x.size() == 3) {
      code += 'I';
      for (const auto& c : x) go(c);
    } else {
      throw Error(ErrorCode::InvalidInput, "ternary tree nodes must be 0 or [c1, c2, c3]");
    }
  };
  go(j);
  return TernaryTree::from_code(code);
}

inline Json to_json(const HeteroInvariant& h) { return {{"tree", to_json(h.tree)}, {"nu", h.nu}}; }

inline HeteroInvariant hetero_from_json(const Json& j) {
  return guarded([&] {
    HeteroInvariant h{ternary_from_json(j.at("tree")), j.at("nu").get<std::vector<double>>()};
    return h;
  });
}

inline std::string polyline_csv(const TracedSeparatrix& t) {
  std::ostringstream os;
  os.precision(17);
  os << "re,im\n";
  for (const auto& z : t.polyline) os << z.real() << ',' << z.imag() << '\n';
  return os.str();
}

inline std::vector<Complex> polyline_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  if (line != "re,im") throw Error(ErrorCode::InvalidInput, "polyline CSV must start with re,im");
  std::vector<Complex> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::InvalidInput, "bad polyline row: " + line);
    out.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline Json read_json(const std::filesystem::path& p) {
  auto text = read_file(p);
  return guarded([&] { return Json::parse(text); });
}

/// Write to a sibling temporary, then rename over the target.
inline void write_atomic(const std::filesystem::path& p, const std::string& content) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename onto " + p.string());
  }
}

}  // namespace ncfield::io
