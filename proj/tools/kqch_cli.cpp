// Command-line driver: builds the metric families, runs the verification
// suites over seeded point grids and emits deterministic JSON/CSV reports.

#include "kqch/diffgeo.hpp"
#include "kqch/families.hpp"
#include "kqch/invariants.hpp"
#include "kqch/report_json.hpp"
#include "kqch/rotational.hpp"
#include "kqch/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace kqch;

struct Options {
  std::string family = "flat";
  std::string f = "log1p";
  std::string v = "default";
  std::string profile = "sin";
  std::string e2v;
  std::string e2v2;
  int n = 3;
  int points = 10;
  std::uint64_t seed = 42;
  std::vector<std::string> checks;
  std::vector<std::string> tol_overrides;
  std::string json_path;
  std::string csv_path;
  bool serial = false;
  double meridian_a = 1.0;
  int meridian_samples = 100;

  Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
};

RadialScalar parse_poly(const std::string& spec, const std::string& what) {
  std::vector<double> coeffs;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) coeffs.push_back(std::stod(item));
  if (coeffs.empty()) throw CLI::ValidationError(what, "empty coefficient list");
  return radial_poly(coeffs);
}

RadialScalar potential_registry(const std::string& name) {
  if (name == "quadratic") return radial_flat_potential();
  if (name == "log1p") return radial_log1p();
  if (name.rfind("poly:", 0) == 0) return parse_poly(name.substr(5), "--f");
  throw CLI::ValidationError("--f", "unknown potential '" + name + "'");
}

RadialScalar normal_form_registry(const std::string& name, std::uint64_t seed) {
  if (name == "default") return radial_poly({0.08, 0.05, -0.004});
  if (name == "log1p-half") return radial_scale(radial_log1p(), 0.5);
  if (name.rfind("poly:", 0) == 0) return parse_poly(name.substr(5), "--v");
  if (name == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> c(-0.05, 0.05);
    return radial_poly({c(rng), c(rng), 0.02 * c(rng)});
  }
  throw CLI::ValidationError("--v", "unknown exponent '" + name + "'");
}

RotationalProfile profile_registry(const std::string& name) {
  if (name == "sin") return profile_sin();
  if (name == "ramp") return profile_ramp();
  if (name == "linear") return profile_linear(1.0);
  if (name.rfind("cc:", 0) == 0) return profile_const_curvature(std::stod(name.substr(3)));
  throw CLI::ValidationError("--profile", "unknown profile '" + name + "'");
}

RadialScalar exponent_registry(const std::string& name) {
  // v such that e^{2v} is the named function of rho.
  if (name == "log1p" || name == "one-plus-rsq") return radial_scale(radial_log1p(), 0.5);
  if (name == "one-plus-half-rsq") {
    RadialScalar v;
    v.value = [](double rho) { return 0.5 * std::log1p(0.5 * rho); };
    v.d1 = [](double rho) { return 0.25 / (1.0 + 0.5 * rho); };
    v.d2 = [](double rho) { return -0.125 / ((1.0 + 0.5 * rho) * (1.0 + 0.5 * rho)); };
    return v;
  }
  if (name.rfind("linear:", 0) == 0) {
    const double c = std::stod(name.substr(7));
    return radial_poly({0.0, c});
  }
  throw CLI::ValidationError("--e2v", "unknown exponent '" + name + "'");
}

Tolerances parse_tolerances(const std::vector<std::string>& overrides) {
  Tolerances tol;
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--tol", "expected KEY=VAL, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const double val = std::stod(kv.substr(eq + 1));
    if (key == "b") tol.b_structure = val;
    else if (key == "b0") tol.b0_structure = val;
    else if (key == "qch") tol.qch_residual = val;
    else if (key == "integrability") tol.integrability = val;
    else if (key == "qc") tol.qc_invariance = val;
    else if (key == "scalar") tol.scalar_invariant = val;
    else if (key == "composition") tol.composition = val;
    else if (key == "flatness") tol.flatness = val;
    else throw CLI::ValidationError("--tol", "unknown key '" + key + "'");
  }
  return tol;
}

struct Family {
  MetricField field;
  DistributionField dist;
};

Family build_family(const Options& opt) {
  MetricField field;
  if (opt.family == "flat") {
    field = flat_metric(opt.n);
  } else if (opt.family == "potential") {
    field = potential_metric(potential_registry(opt.f), opt.n);
  } else if (opt.family == "normal-form") {
    field = biconformally_flat_normal_form(normal_form_registry(opt.v, opt.seed), opt.n);
  } else if (opt.family == "rotational") {
    field = rotational_metric(profile_registry(opt.profile), opt.n);
  } else {
    throw CLI::ValidationError("--family", "unknown family '" + opt.family + "'");
  }
  DistributionField dist = radial_distribution(field);
  return {field, dist};
}

Json config_json(const Options& opt, const std::string& command) {
  Json cfg;
  cfg["command"] = command;
  cfg["family"] = opt.family;
  if (opt.family == "potential") cfg["f"] = opt.f;
  if (opt.family == "normal-form") cfg["v"] = opt.v;
  if (opt.family == "rotational") cfg["profile"] = opt.profile;
  if (!opt.e2v.empty()) cfg["e2v"] = opt.e2v;
  if (!opt.e2v2.empty()) cfg["e2v2"] = opt.e2v2;
  cfg["n"] = opt.n;
  cfg["seed"] = opt.seed;
  cfg["points"] = opt.points;
  if (!opt.tol_overrides.empty()) cfg["tol"] = opt.tol_overrides;
  cfg["serial"] = opt.serial;
  return cfg;
}

int emit(const Options& opt, const Json& doc, bool all_pass) {
  const std::string text = doc.dump(2) + "\n";
  if (!opt.json_path.empty()) {
    try {
      write_file(opt.json_path, text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 4;
    }
  } else {
    std::cout << text;
  }
  return all_pass ? 0 : 1;
}

bool requested(const Options& opt, const std::string& name) {
  if (opt.checks.empty()) return true;
  for (const std::string& c : opt.checks)
    if (c == name) return true;
  return false;
}

int cmd_verify(const Options& opt) {
  const Tolerances tol = parse_tolerances(opt.tol_overrides);
  Family fam = build_family(opt);
  const std::vector<Vec> pts =
      sample_points(fam.field.domain, fam.field.dim(), opt.points, opt.seed);

  std::vector<CheckReport> checks;
  if (requested(opt, "symmetry"))
    checks.push_back(check_symmetries(fam.field, fam.dist, pts, 1e-6, opt.exec()));
  if (requested(opt, "qch"))
    checks.push_back(check_qch(fam.field, fam.dist, pts, tol.qch_residual, opt.exec()));
  if (requested(opt, "ricci"))
    checks.push_back(check_ricci_identity(fam.field, fam.dist, pts, 1e-4, opt.exec()));
  if (requested(opt, "b"))
    checks.push_back(check_b_distribution(fam.field, fam.dist, pts, tol, opt.exec()));
  if (requested(opt, "b0"))
    checks.push_back(check_b0_distribution(fam.field, fam.dist, pts, tol, opt.exec()));
  if (requested(opt, "integrability"))
    checks.push_back(check_integrability(fam.field, fam.dist, pts, tol, opt.exec()));
  if (requested(opt, "bianchi"))
    checks.push_back(check_second_bianchi(fam.field, pts, 1e-4, opt.exec()));
  if (opt.family == "rotational" && requested(opt, "coefficients")) {
    // Numeric decomposition vs the closed forms from the profile.
    RotationalProfile prof = profile_registry(opt.profile);
    RadialChart chart(prof);
    CheckReport rep;
    rep.name = "rotational-coefficients";
    rep.statement = "numeric (a, b, c) match the closed forms in t, t', t'', t'''";
    rep.points = pts;
    rep.tolerance = 1e-4;
    for (const Vec& p : pts) {
      const Tensor4 R = riemann(fam.field, fam.dist, p);
      const QchCoefficients q = qch_decompose(R, opt.n);
      const QchCoefficients c = rotational_coefficients(prof, chart.s_of_r(p.norm()));
      const double scale = std::max({1.0, std::fabs(c.a), std::fabs(c.b), std::fabs(c.c)});
      rep.residuals.push_back(std::max({std::fabs(q.a - c.a), std::fabs(q.b - c.b),
                                        std::fabs(q.c - c.c)}) / scale);
      rep.scalars["a"].push_back(q.a);
      rep.scalars["b"].push_back(q.b);
      rep.scalars["c"].push_back(q.c);
    }
    rep.finish();
    checks.push_back(rep);
  }

  const Json doc = make_report(config_json(opt, "verify"), checks);
  bool all = true;
  for (const CheckReport& c : checks) all = all && c.pass;
  return emit(opt, doc, all);
}

int cmd_decompose(const Options& opt) {
  const Tolerances tol = parse_tolerances(opt.tol_overrides);
  Family fam = build_family(opt);
  const std::vector<Vec> pts =
      sample_points(fam.field.domain, fam.field.dim(), opt.points, opt.seed);
  std::vector<CheckReport> checks{
      check_qch(fam.field, fam.dist, pts, tol.qch_residual, opt.exec())};
  if (!opt.csv_path.empty()) {
    std::vector<std::vector<double>> rows;
    const CheckReport& rep = checks[0];
    for (std::size_t i = 0; i < rep.points.size(); ++i)
      rows.push_back({rep.points[i].norm(), rep.scalars.at("a")[i], rep.scalars.at("b")[i],
                      rep.scalars.at("c")[i], rep.residuals[i]});
    try {
      write_file(opt.csv_path, to_csv({"r", "a", "b", "c", "residual"}, rows));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 4;
    }
  }
  return emit(opt, make_report(config_json(opt, "decompose"), checks), checks[0].pass);
}

int cmd_transform(const Options& opt) {
  const Tolerances tol = parse_tolerances(opt.tol_overrides);
  Family fam = build_family(opt);
  if (opt.e2v.empty()) throw CLI::ValidationError("--e2v", "transform requires an exponent");
  const RadialScalar v = exponent_registry(opt.e2v);

  const Domain dom = fam.field.domain;
  const double r0 = dom.r0 + 0.05 * (dom.r1 - dom.r0);
  const double r1 = dom.r1 - 0.25 * (dom.r1 - dom.r0);

  // k and the arc weight of the source structure, sampled on the ray.
  auto k_at = [&](double r) {
    Vec p = Vec::Zero(fam.field.dim());
    p[0] = r;
    return nabla_eta(fam.field, fam.dist, p).k;
  };
  const BiconformalPair pair =
      make_biconformal_pair(v, k_at, r0, r1, radial_arc_weight(fam.field), 1e-9);
  const MetricField image = biconformal_apply(fam.field, fam.dist, pair);

  const std::vector<Vec> pts = sample_points(image.domain, image.dim(), opt.points, opt.seed);
  QcInvarianceReport inv =
      check_qc_invariance(fam.field, image, fam.dist, pair, pts, tol, opt.exec());
  std::vector<CheckReport> checks{inv.qc, inv.scalar, inv.ricci};

  if (!opt.e2v2.empty()) {
    const RadialScalar v2 = exponent_registry(opt.e2v2);
    const BiconformalPair stage2 = second_stage_pair(pair, v2, 1e-9);
    const MetricField image2 =
        biconformal_apply(image, radial_distribution(image), stage2);
    const MetricField composed =
        biconformal_apply(fam.field, fam.dist, composed_pair(pair, stage2));
    CheckReport rep;
    rep.name = "composition";
    rep.statement = "successive transforms equal the transform with added exponents";
    rep.points = pts;
    rep.tolerance = tol.composition;
    for (const Vec& p : pts) {
      const Mat d = image2.value(p) - composed.value(p);
      rep.residuals.push_back(d.cwiseAbs().maxCoeff()
                              / std::max(1.0, composed.value(p).cwiseAbs().maxCoeff()));
    }
    rep.finish();
    checks.push_back(rep);
  }

  const Json doc = make_report(config_json(opt, "transform"), checks);
  bool all = true;
  for (const CheckReport& c : checks) all = all && c.pass;
  return emit(opt, doc, all);
}

int cmd_flatten(const Options& opt) {
  const Tolerances tol = parse_tolerances(opt.tol_overrides);
  Family fam = build_family(opt);
  FlattenResult result = flatten(fam.field, fam.dist, 0.0, 0.0, tol, opt.exec());
  return emit(opt, make_report(config_json(opt, "flatten"), {result.report}),
              result.report.pass);
}

int cmd_meridian(const Options& opt) {
  if (!(opt.meridian_a > 0.0)) {
    std::cerr << "error: meridian requires a > 0\n";
    return 3;
  }
  const auto curve = constant_curvature_meridian(opt.meridian_a, opt.meridian_samples);
  if (!opt.csv_path.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& [x, y] : curve) rows.push_back({x, y});
    try {
      write_file(opt.csv_path, to_csv({"x", "y"}, rows));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 4;
    }
  }
  CheckReport rep;
  rep.name = "meridian-flat-b";
  rep.statement = "the meridian satisfies t'' = 2 t'(t'-1)/t";
  rep.tolerance = 1e-6;
  rep.residuals.push_back(meridian_b_residual(opt.meridian_a, opt.meridian_samples));
  rep.scalars["x_max"].push_back(2.0 / std::sqrt(opt.meridian_a));
  rep.finish();
  return emit(opt, make_report(config_json(opt, "meridian"), {rep}), rep.pass);
}

int dispatch(const Options& opt, const std::string& cmd) {
  if (cmd == "verify" || cmd == "rotational") return cmd_verify(opt);
  if (cmd == "decompose") return cmd_decompose(opt);
  if (cmd == "transform") return cmd_transform(opt);
  if (cmd == "flatten") return cmd_flatten(opt);
  if (cmd == "meridian") return cmd_meridian(opt);
  std::cerr << "error: unknown command\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for Kahler metrics of quasi-constant holomorphic "
               "sectional curvatures"};
  app.require_subcommand(1);

  Options opt;
  std::string cmd;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--family", opt.family, "flat | potential | normal-form | rotational");
    sub->add_option("--f", opt.f, "potential function: quadratic | log1p | poly:c0,c1,...");
    sub->add_option("--v", opt.v,
                    "normal-form exponent: default | log1p-half | random | poly:c0,c1,...");
    sub->add_option("--profile", opt.profile, "rotational profile: sin | ramp | linear | cc:a");
    sub->add_option("--n", opt.n, "complex dimension")->check(CLI::Range(2, 6));
    sub->add_option("--seed", opt.seed, "sampling seed");
    sub->add_option("--points", opt.points, "number of sampled points")
        ->check(CLI::Range(1, 1000));
    sub->add_option("--check", opt.checks, "restrict to the named checks");
    sub->add_option("--tol", opt.tol_overrides, "tolerance override KEY=VAL");
    sub->add_option("--json", opt.json_path, "write the JSON report here");
    sub->add_option("--csv", opt.csv_path, "write CSV output here");
    sub->add_flag("--serial", opt.serial, "disable the parallel point sweep");
  };

  for (const char* name : {"verify", "decompose", "transform", "flatten", "rotational"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    if (std::string(name) == "transform") {
      sub->add_option("--e2v", opt.e2v,
                      "exponent of the transform: one-plus-rsq | one-plus-half-rsq | linear:c");
      sub->add_option("--e2v2", opt.e2v2, "second exponent; enables the composition check");
    }
    sub->callback([&, name] { cmd = name; });
  }
  CLI::App* mer = app.add_subcommand("meridian");
  mer->add_option("-a,--a", opt.meridian_a, "holomorphic sectional curvature");
  mer->add_option("--samples", opt.meridian_samples, "number of curve samples")
      ->check(CLI::Range(2, 100000));
  mer->add_option("--csv", opt.csv_path, "write the curve here");
  mer->add_option("--json", opt.json_path, "write the JSON report here");
  mer->callback([&] { cmd = "meridian"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return dispatch(opt, cmd);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
