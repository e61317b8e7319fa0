#ifndef ORBISPEC_TOOLS_CLI_APP_HPP
#define ORBISPEC_TOOLS_CLI_APP_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orbispec/orbispec.hpp"

namespace orbispec::cli {

enum ExitCode : int { kOk = 0, kBadInput = 1, kPrecondition = 2 };

struct CliConfig {
  std::string subcommand;
  std::string model;
  std::string input;
  std::string output;
  std::string action;
  double kappa = 0.0;
  std::optional<int> n;
  std::optional<double> volume;
  std::optional<double> lambda_max;
  std::vector<double> r_grid;
  std::optional<double> r;
  std::optional<double> diameter;
  std::optional<double> eps;
  double tolerance = ShootingConfig{}.root_tol;
  std::uint64_t seed = 1;
  int points = 500;
  int grid = 64;
};

/// Truncation used for a catalog model when none is given: l = 100 on S^2
/// quotients, l = 40 on S^3 quotients, |k|^2 <= 400 on flat square tori.
inline double default_truncation(const ModelOrbifold& m) {
  if (m.kind == ModelKind::round_sphere || m.kind == ModelKind::sphere_quotient) {
    const int l = m.dimension == 2 ? 100 : 40;
    return static_cast<double>(l) * (l + m.dimension - 1);
  }
  return 4.0 * kPi * kPi * 400.0;
}

struct CatalogRow {
  std::string id;
  double kappa = 0.0;
  double true_diameter = 0.0;
  double diameter_bound = 0.0;
  int true_isotropy = 1;
  std::int64_t isotropy_cap = 0;
  int true_singular = 0;
  std::int64_t singular_cap = 0;
  BoundReport report;

  bool sound() const {
    return diameter_bound >= true_diameter && isotropy_cap >= true_isotropy && singular_cap >= true_singular;
  }
};

/// Runs the full pipeline on every catalog model's exact spectrum, with the
/// model's own curvature lower bound, and compares against ground truth.
inline std::vector<CatalogRow> verify_catalog(const PipelineOptions& opt = {}) {
  std::vector<CatalogRow> rows;
  for (const auto& m : model_catalog()) {
    const auto spec = model_spectrum(m, default_truncation(m));
    CatalogRow row;
    row.id = m.id;
    row.kappa = m.truth.curvature_lower_bound;
    row.report = main_theorem_2(spec, row.kappa, opt);
    row.true_diameter = m.truth.diameter;
    row.diameter_bound = row.report.diameter;
    row.true_isotropy = m.max_isotropy_order();
    row.isotropy_cap = row.report.isotropy_cap;
    row.true_singular = m.isolated_singular_count();
    row.singular_cap = *row.report.singular_cap;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline json config_json(const CliConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["model"] = c.model.empty() ? json(nullptr) : json(c.model);
  j["input"] = c.input.empty() ? json(nullptr) : json(c.input);
  j["action"] = c.action.empty() ? json(nullptr) : json(c.action);
  j["kappa"] = c.kappa;
  j["n"] = optional_json(c.n);
  j["volume"] = optional_json(c.volume);
  j["lambda_max"] = optional_json(c.lambda_max);
  j["r_grid"] = c.r_grid;
  j["r"] = optional_json(c.r);
  j["diameter"] = optional_json(c.diameter);
  j["eps"] = optional_json(c.eps);
  j["tolerance"] = c.tolerance;
  j["seed"] = c.seed;
  j["points"] = c.points;
  j["grid"] = c.grid;
  return j;
}

inline json envelope(const CliConfig& c, json result) {
  return json{{"tool", "orbispec"}, {"version", ORBISPEC_VERSION}, {"config", config_json(c)}, {"result", std::move(result)}};
}

inline ShootingConfig shooting(const CliConfig& c) {
  ShootingConfig s;
  s.root_tol = c.tolerance;
  return s;
}

inline PipelineOptions pipeline_options(const CliConfig& c) {
  PipelineOptions opt;
  opt.n = c.n;
  opt.v = c.volume;
  if (!c.r_grid.empty()) opt.r_grid = c.r_grid;
  opt.constants_grid = c.grid;
  opt.shooting = shooting(c);
  return opt;
}

template <class T>
const T& need(const std::optional<T>& x, const char* flag) {
  if (!x) throw DomainError(std::string("missing required flag ") + flag);
  return *x;
}

inline const std::string& need(const std::string& x, const char* flag) {
  if (x.empty()) throw DomainError(std::string("missing required flag ") + flag);
  return x;
}

inline std::string fixed(double x, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

inline json cmd_spectrum(const CliConfig& c) {
  const double lambda_max = need(c.lambda_max, "--lambda-max");
  if (!c.action.empty()) {
    const int n = need(c.n, "--n");
    auto action = action_from_json(read_json_file(c.action));
    GroundTruth truth;
    truth.curvature_lower_bound = 1.0;
    const auto model = sphere_quotient_model("custom", n, std::move(action), truth);
    return to_json(model_spectrum(model, lambda_max));
  }
  const auto cat = model_catalog();
  return to_json(model_spectrum(find_model(cat, need(c.model, "--model")), lambda_max));
}

inline json cmd_eig_ball(const CliConfig& c) {
  const SpaceForm sf(need(c.n, "--n"), c.kappa);
  const double r = need(c.r, "--r");
  const double lam = lowest_dirichlet_eigenvalue(sf, r, shooting(c));
  return json{{"n", sf.n}, {"kappa", sf.kappa}, {"r", r}, {"lambda", lam}, {"lambda_5dp", fixed(lam, 5)}};
}

inline Spectrum input_spectrum(const CliConfig& c) { return spectrum_from_json(read_json_file(need(c.input, "--input"))); }

inline json cmd_weyl(const CliConfig& c) {
  const auto spec = input_spectrum(c);
  if (c.n) {
    WeylFit fit = fit_dimension(spec);
    fit.dimension = *c.n;
    fit.volume = estimate_volume(spec, *c.n);
    return to_json(fit);
  }
  return to_json(weyl_fit(spec));
}

inline json cmd_diameter(const CliConfig& c) {
  const auto spec = input_spectrum(c);
  auto rep = main_theorem_1(spec, c.kappa, pipeline_options(c));
  json j = to_json(rep);
  return json{{"diameter_bound", rep.diameter}, {"r_used", rep.r_used}, {"rho", rep.rho}, {"report", std::move(j)}};
}

inline json cmd_isotropy(const CliConfig& c) { return to_json(main_theorem_1(input_spectrum(c), c.kappa, pipeline_options(c))); }

inline json cmd_singular(const CliConfig& c) { return to_json(main_theorem_2(input_spectrum(c), c.kappa, pipeline_options(c))); }

inline json cmd_constants(const CliConfig& c) {
  const int n = need(c.n, "--n");
  const double d = need(c.diameter, "--diameter");
  const double v = need(c.volume, "--volume");
  const auto sc = singular_point_cap(n, c.kappa, d, v, c.grid);
  return json{{"alpha", sc.alpha}, {"ell", sc.ell}, {"r", sc.r}, {"singular_cap", sc.cap}};
}

inline json cmd_net(const CliConfig& c) {
  std::optional<FiniteMetricSpace> space;
  double diameter = 0.0;
  int n = 0;
  double kappa = c.kappa;
  if (!c.input.empty()) {
    space = metric_space_from_json(read_json_file(c.input));
    n = need(c.n, "--n");
    diameter = need(c.diameter, "--diameter");
  } else {
    const auto cat = model_catalog();
    const auto& m = find_model(cat, need(c.model, "--model"));
    if (c.points < 1) throw DomainError("--points must be >= 1");
    space = model_metric_space(m, sample_model_points(m, static_cast<std::size_t>(c.points), c.seed));
    n = c.n.value_or(m.dimension);
    diameter = c.diameter.value_or(m.truth.diameter);
    kappa = m.truth.curvature_lower_bound;
  }
  const double eps = c.eps.value_or(diameter / 4.0);
  const auto net = greedy_minimal_net(*space, eps);
  const auto check = verify_net(*space, eps, net);
  json close = json::array();
  for (const auto& [a, b] : check.close) close.push_back(json::array({a, b}));
  return json{{"eps", eps},
              {"n", n},
              {"kappa", kappa},
              {"diameter", diameter},
              {"net", net},
              {"net_size", net.size()},
              {"packing_bound", packing_bound(n, kappa, diameter, eps)},
              {"verified", check.ok},
              {"uncovered", check.uncovered},
              {"close_pairs", close}};
}

inline json cmd_verify(const CliConfig& c, std::ostream& err, bool& all_sound) {
  const auto rows = verify_catalog(pipeline_options(c));
  json table = json::array();
  all_sound = true;
  err << std::left << std::setw(12) << "model" << std::setw(20) << "diameter true/bound" << std::setw(16)
      << "isotropy t/cap" << "singular t/cap\n";
  for (const auto& row : rows) {
    all_sound = all_sound && row.sound();
    table.push_back({{"model", row.id},
                     {"kappa", row.kappa},
                     {"diameter", {{"true", row.true_diameter}, {"bound", row.diameter_bound}}},
                     {"isotropy", {{"true", row.true_isotropy}, {"bound", row.isotropy_cap}}},
                     {"singular", {{"true", row.true_singular}, {"bound", row.singular_cap}}},
                     {"sound", row.sound()}});
    err << std::setw(12) << row.id << std::setw(20) << (fixed(row.true_diameter, 4) + " / " + fixed(row.diameter_bound, 4))
        << std::setw(16) << (std::to_string(row.true_isotropy) + " / " + std::to_string(row.isotropy_cap))
        << std::to_string(row.true_singular) + " / " + std::to_string(row.singular_cap) << (row.sound() ? "" : "  UNSOUND")
        << "\n";
  }
  return json{{"models", table}, {"all_sound", all_sound}};
}

inline void emit(const CliConfig& c, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw DomainError("cannot write " + c.output);
  f << text;
}

}  // namespace detail

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CliConfig c;
  CLI::App app{"Spectral bounds for Riemannian orbifolds", "orbispec"};
  app.set_version_flag("--version", std::string(ORBISPEC_VERSION));
  app.require_subcommand(1);

  auto common = [&c](CLI::App* sub) {
    sub->add_option("--kappa", c.kappa, "curvature lower bound");
    sub->add_option("--n", c.n, "dimension");
    sub->add_option("--out", c.output, "write the report here instead of stdout");
    sub->add_option("--tolerance", c.tolerance, "root tolerance for the Dirichlet solver")->check(CLI::PositiveNumber);
  };
  auto pipeline = [&c](CLI::App* sub) {
    sub->add_option("--input", c.input, "spectrum JSON file")->required();
    sub->add_option("--volume", c.volume, "volume lower bound (skips the Weyl volume estimate)");
    sub->add_option("--r-grid", c.r_grid, "radii for the diameter bound")->delimiter(',');
    sub->add_option("--grid", c.grid, "grid size for the separation radius");
  };

  auto* spectrum = app.add_subcommand("spectrum", "exact spectrum of a catalog model");
  common(spectrum);
  spectrum->add_option("--model", c.model, "catalog model id");
  spectrum->add_option("--action", c.action, "action JSON for a custom S^n quotient");
  spectrum->add_option("--lambda-max", c.lambda_max, "truncation")->required();

  auto* eig = app.add_subcommand("eig-ball", "lowest Dirichlet eigenvalue of a model ball");
  common(eig);
  eig->add_option("--r", c.r, "ball radius")->required();

  auto* weyl = app.add_subcommand("weyl", "dimension and volume from a spectrum");
  common(weyl);
  weyl->add_option("--input", c.input, "spectrum JSON file")->required();

  auto* diameter = app.add_subcommand("diameter", "spectral diameter bound");
  common(diameter);
  pipeline(diameter);

  auto* isotropy = app.add_subcommand("isotropy", "isotropy order cap");
  common(isotropy);
  pipeline(isotropy);

  auto* singular = app.add_subcommand("singular", "cap on isolated singular points");
  common(singular);
  pipeline(singular);

  auto* constants = app.add_subcommand("constants", "alpha, ell and r for given n, kappa, D, v");
  common(constants);
  constants->add_option("--diameter", c.diameter, "diameter bound D")->required();
  constants->add_option("--volume", c.volume, "volume lower bound v")->required();
  constants->add_option("--grid", c.grid, "grid size for the separation radius");

  auto* net = app.add_subcommand("net", "greedy eps-net and packing bound");
  common(net);
  net->add_option("--input", c.input, "point-cloud JSON file");
  net->add_option("--model", c.model, "sample a catalog model instead");
  net->add_option("--points", c.points, "sample size");
  net->add_option("--seed", c.seed, "sampling seed");
  net->add_option("--eps", c.eps, "net radius (default D/4)");
  net->add_option("--diameter", c.diameter, "diameter used in the packing bound");

  auto* verify = app.add_subcommand("verify", "soundness sweep over the catalog");
  common(verify);
  verify->add_option("--seed", c.seed, "unused by the deterministic sweep; recorded in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << ORBISPEC_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "orbispec: " << e.what() << "\n";
    return kPrecondition;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    json result;
    bool sound = true;
    if (c.subcommand == "spectrum") result = detail::cmd_spectrum(c);
    else if (c.subcommand == "eig-ball") result = detail::cmd_eig_ball(c);
    else if (c.subcommand == "weyl") result = detail::cmd_weyl(c);
    else if (c.subcommand == "diameter") result = detail::cmd_diameter(c);
    else if (c.subcommand == "isotropy") result = detail::cmd_isotropy(c);
    else if (c.subcommand == "singular") result = detail::cmd_singular(c);
    else if (c.subcommand == "constants") result = detail::cmd_constants(c);
    else if (c.subcommand == "net") result = detail::cmd_net(c);
    else if (c.subcommand == "verify") result = detail::cmd_verify(c, err, sound);
    detail::emit(c, detail::envelope(c, std::move(result)), out);
    if (!sound) {
      err << "orbispec: verify: a bound fell below ground truth\n";
      return kPrecondition;
    }
    return kOk;
  } catch (const FormatError& e) {
    err << "orbispec: " << e.what() << "\n";
    return kBadInput;
  } catch (const CertificationError& e) {
    std::string why = e.what();
    if (why.rfind(e.stage() + ": ", 0) == 0) why.erase(0, e.stage().size() + 2);
    err << "orbispec: certification failed at stage '" << e.stage() << "': " << why << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "orbispec: " << e.what() << "\n";
    return kPrecondition;
  }
}

}  // namespace orbispec::cli

#endif  // ORBISPEC_TOOLS_CLI_APP_HPP
