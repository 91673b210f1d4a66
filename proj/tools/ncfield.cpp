// ncfield: command-line front end for the anti-polynomial field library.

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncfield/ncfield.hpp"

using namespace ncfield;
using io::Json;

namespace {

enum Exit { kOk = 0, kInput = 2, kNumeric = 3, kVerification = 4 };

struct Globals {
  std::optional<double> tolerance;
  std::uint64_t seed = 20240601;
  std::string out;
};

TraceConfig trace_config(const Globals& g) {
  TraceConfig cfg;
  if (g.tolerance) cfg.step_tolerance = *g.tolerance;
  return cfg;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    io::write_atomic(g.out, text);
  }
}

void emit(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

int fail(ErrorCode code, const std::string& message) {
  Json d{{"error", std::string(to_string(code))}, {"message", message}};
  std::cerr << d.dump() << "\n";
  if (code == ErrorCode::VerificationFailed) return kVerification;
  return is_input_error(code) ? kInput : kNumeric;
}

Json classification_json(const PairClassification& c) {
  Json j{{"top_equivalent", c.top_equivalent},
         {"analytic_equivalent", c.analytic_equivalent},
         {"first", io::to_json(c.first)},
         {"second", io::to_json(c.second)}};
  if (c.rotation) {
    j["rotation"] = *c.rotation;
    j["analytic_up_to_rotation"] = c.analytic_up_to_rotation;
  } else {
    j["rotation"] = nullptr;
  }
  return j;
}

Complex parse_complex(const std::string& s) {
  // "re,im" or "re"
  std::istringstream is(s);
  double re = 0, im = 0;
  char comma = 0;
  if (!(is >> re)) throw Error(ErrorCode::InvalidInput, "cannot parse complex '" + s + "'");
  if (is >> comma) {
    if (comma != ',' || !(is >> im)) throw Error(ErrorCode::InvalidInput, "cannot parse complex '" + s + "'");
  }
  return {re, im};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anti-polynomial vector fields: noncrossing trees, invariants, realization"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tolerance", g.tolerance, "integrator step tolerance (default 1e-10)")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for randomized retries");
  app.add_option("-o,--output", g.out, "output path (stdout if omitted)");

  long count_n = 0;
  std::string kind;
  auto* count = app.add_subcommand("count", "exact counts A, A1, Ar, T (ternary) and strata");
  count->add_option("n,--n", count_n, "argument of the count")->required()->check(CLI::NonNegativeNumber);
  count->add_option("--kind", kind, "print one decimal value instead of the JSON summary")
      ->check(CLI::IsMember({"A", "A1", "Ar", "T", "strata"}));

  int enum_n = 0;
  bool classes = false;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "list every noncrossing tree on n vertices");
  enumerate_cmd->add_option("n", enum_n, "number of vertices")->required()->check(CLI::PositiveNumber);
  enumerate_cmd->add_flag("--rotation-classes", classes, "one representative per rotation class");

  std::string poly_path;
  auto* invariants = app.add_subcommand("invariants", "extract (tree, eta) from a polynomial");
  invariants->add_option("--poly", poly_path, "polynomial JSON")->required();

  std::vector<std::string> pair_paths;
  auto* classify = app.add_subcommand("classify", "compare the invariants of two polynomials");
  classify->add_option("--poly", pair_paths, "two polynomial JSON files")->required()->expected(2);

  std::string tree_path, eta_path;
  int seed_budget = 200;
  auto* realize_cmd = app.add_subcommand("realize", "polynomial with a given (tree, eta)");
  realize_cmd->add_option("--tree", tree_path, "tree JSON")->required();
  realize_cmd->add_option("--eta", eta_path, "eta JSON")->required();
  realize_cmd->add_option("--seed-budget", seed_budget, "seed retries")->check(CLI::PositiveNumber);

  auto* hextract = app.add_subcommand("hetero-extract", "ternary tree and nu of a maximally degenerate field");
  hextract->add_option("--poly", poly_path, "polynomial JSON")->required();

  std::string hetero_path;
  auto* hrealize = app.add_subcommand("hetero-realize", "polynomial with a given (ternary tree, nu)");
  hrealize->add_option("--invariant", hetero_path, "JSON {\"tree\": nested, \"nu\": [...]}")->required();

  std::vector<double> radii{0.5, 1.0, 1.5};
  int angles = 48;
  std::string csv_path, svg_path;
  std::vector<std::string> portrait_eps;
  auto* bifurcate = app.add_subcommand("bifurcate", "bifurcation diagram of z^2 - eps on a polar grid");
  bifurcate->add_option("--radii", radii, "grid radii")->check(CLI::PositiveNumber);
  bifurcate->add_option("--angles", angles, "angles per radius")->check(CLI::PositiveNumber);
  bifurcate->add_option("--csv", csv_path, "CSV output path");
  bifurcate->add_option("--svg", svg_path, "SVG output path");
  bifurcate->add_option("--portrait", portrait_eps, "eps values 're,im' to draw portraits for");

  auto* portrait = app.add_subcommand("portrait", "SVG separatrix portrait of a polynomial");
  portrait->add_option("--poly", poly_path, "polynomial JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fail(ErrorCode::InvalidInput, e.what());
  }

  try {
    const auto cfg = trace_config(g);
    if (*count && !kind.empty()) {
      BigCount v = kind == "A"    ? count_A(count_n)
                   : kind == "A1" ? count_A1(count_n)
                   : kind == "Ar" ? count_Ar(count_n)
                   : kind == "T"  ? count_ternary(count_n)
                                  : strata_count(count_n);
      emit(g, v.str());
    } else if (*count) {
      Json j{{"n", count_n}, {"A", count_A(count_n).str()}, {"A_rec", count_A_rec(count_n).str()},
             {"A1", count_A1(count_n).str()}, {"ternary", count_ternary(count_n).str()}};
      if (count_n >= 1) j["Ar"] = count_Ar(count_n).str();
      if (count_n >= 2) j["strata_k"] = count_n - 2;
      emit(g, j);
    } else if (*enumerate_cmd) {
      Json arr = Json::array();
      std::map<std::string, int> seen;
      for (const auto& t : enumerate(enum_n)) {
        if (classes && seen[rotation_class_code(t)]++ > 0) continue;
        arr.push_back(io::to_json(t));
      }
      emit(g, Json{{"n", enum_n}, {"count", arr.size()}, {"trees", arr}});
    } else if (*invariants) {
      auto f = io::field_from_json(io::read_json(poly_path));
      auto ext = extract_full(f, cfg);
      auto census = census_of_tree(ext.pair.tree);
      Json j = io::to_json(ext.pair);
      j["census"] = {{"sepal", census.sepal_count}, {"petal", census.petal_count}};
      emit(g, j);
    } else if (*classify) {
      auto f1 = io::field_from_json(io::read_json(pair_paths.at(0)));
      auto f2 = io::field_from_json(io::read_json(pair_paths.at(1)));
      emit(g, classification_json(classify_pair(f1, f2, cfg)));
    } else if (*realize_cmd) {
      RealizationOptions opt;
      opt.trace = cfg;
      opt.rng_seed = g.seed;
      opt.seed_budget = seed_budget;
      auto tree = io::tree_from_json(io::read_json(tree_path));
      auto eta = io::eta_from_json(io::read_json(eta_path));
      auto res = realize(RealizationProblem::make(tree, eta, opt));
      Json j = io::to_json(res.field);
      j["residual"] = res.residual;
      j["seed_tries"] = res.seed_tries;
      j["homotopy_steps"] = res.homotopy_steps;
      emit(g, j);
    } else if (*hextract) {
      auto f = io::field_from_json(io::read_json(poly_path));
      emit(g, io::to_json(extract_hetero(f, cfg).invariant));
    } else if (*hrealize) {
      RealizationOptions opt;
      opt.trace = cfg;
      opt.rng_seed = g.seed;
      auto h = io::hetero_from_json(io::read_json(hetero_path));
      auto res = realize_hetero(h.tree, h.nu, opt);
      emit(g, io::to_json(res.field));
    } else if (*bifurcate) {
      PolarGrid grid;
      grid.radii = radii;
      grid.angles = angles;
      auto samples = sample_polar(grid);
      if (!csv_path.empty()) io::write_atomic(csv_path, bifurcation_csv(samples));
      if (!svg_path.empty()) {
        std::vector<Complex> eps;
        for (const auto& s : portrait_eps) eps.push_back(parse_complex(s));
        io::write_atomic(svg_path, bifurcation_svg(samples, eps, cfg));
      }
      auto regions = count_regions(samples);
      emit(g, Json{{"samples", samples.size()}, {"regions", regions.regions}, {"consistent", regions.consistent},
                   {"labels", regions.labels}});
    } else if (*portrait) {
      auto f = io::field_from_json(io::read_json(poly_path));
      emit(g, portrait_svg(f, cfg));
    }
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::InvalidInput, e.what());
  }
  return kOk;
}
