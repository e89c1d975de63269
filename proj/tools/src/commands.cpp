#include "solab/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "solab/boundary.hpp"
#include "solab/catalog.hpp"
#include "solab/field_io.hpp"
#include "solab/operator.hpp"
#include "solab/orlicz.hpp"
#include "solab/report.hpp"
#include "solab/solver.hpp"
#include "solab/verify.hpp"

namespace solab::cli {

namespace {

std::vector<double> log_space(double a, double b, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(a * std::pow(b / a, i / (count - 1.0)));
  return out;
}

// Rows function,check,value,bound,pass shared by the two check commands.
class CheckTable {
 public:
  CheckTable() : csv_({"function", "check", "value", "bound", "pass"}) {}

  void add(const std::string& fn, const std::string& check, double value, double bound, bool pass) {
    csv_.row({fn, check, format_real(value), format_real(bound), pass ? "1" : "0"});
    all_ = all_ && pass;
    if (!pass) std::cerr << "FAIL " << fn << " " << check << " value=" << format_real(value) << "\n";
  }

  bool all() const { return all_; }
  std::string str() const { return csv_.str(); }

 private:
  CsvWriter csv_;
  bool all_ = true;
};

std::vector<std::string> structures_of(const ExperimentConfig& cfg) {
  return cfg.structures.empty() ? structure_catalog() : cfg.structures;
}

void write_or_throw(const std::filesystem::path& p, const std::string& s) {
  try {
    write_text(p, s);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

std::string summary_line(const std::string& what, bool pass) {
  return std::string("{\n  \"command\": \"") + what + "\",\n  \"pass\": " + (pass ? "true" : "false") + "\n}\n";
}

void structure_suite(const std::string& label, std::mt19937_64& rng, std::size_t samples, CheckTable& tab) {
  const StructureFunction g = make_structure(label);
  const OrliczTriple triple(g);
  const std::string fn = g.label;

  const std::vector<double> ts = log_space(1e-6, 1e6, 241);
  const ExponentEstimate est = verify_exponents(g, ts);
  tab.add(fn, "delta_est", est.delta_est, g.delta, est.ok);
  tab.add(fn, "g0_est", est.g0_est, g.g0, est.ok);

  const std::vector<double> tsd = log_space(1e-4, 1e4, 161);
  const double c2g = doubling_constant(g, tsd);
  tab.add(fn, "doubling_g", c2g, std::pow(2.0, g.g0) + 1e-6, c2g <= std::pow(2.0, g.g0) + 1e-6);
  const double c2G = doubling_constant([&triple](double t) { return triple.G(t); }, tsd);
  tab.add(fn, "doubling_G", c2G, std::pow(2.0, 1.0 + g.g0) + 1e-6, c2G <= std::pow(2.0, 1.0 + g.g0) + 1e-6);

  std::uniform_real_distribution<double> logu(std::log(1e-3), std::log(1e3));
  std::size_t failures = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = std::exp(logu(rng));
    const double s = std::exp(logu(rng));
    if (!lemma_gG_audit(triple, t, s).all()) ++failures;
  }
  tab.add(fn, "lemma_gG_failures", static_cast<double>(failures), 0.0, failures == 0);

  const YoungFunction psi = young_from_structure(g);
  double worst_gap = 0.0;
  double worst_neg = 0.0;
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double t = g.eval(s);
    worst_gap = std::max(worst_gap, std::abs(young_gap(psi, s, t)) / (1.0 + s * t));
    worst_neg = std::min(worst_neg, young_gap(psi, s, 0.5 * t) / (1.0 + s * t));
    worst_neg = std::min(worst_neg, comp_prop_margin(psi, s) / (1.0 + psi(s)));
  }
  tab.add(fn, "young_equality", worst_gap, 1e-8, worst_gap <= 1e-8);
  tab.add(fn, "young_and_comp_prop_min", worst_neg, -1e-9, worst_neg >= -1e-9);
}

void young_suite(const std::string& label, std::mt19937_64& rng, CheckTable& tab) {
  const YoungFunction psi = make_young(label);
  const std::string fn = psi.label();
  double worst_gap = 0.0;
  for (double s : {0.25, 0.5, 1.0, 2.0}) {
    const double t = psi.integrand(s);
    worst_gap = std::max(worst_gap, std::abs(young_gap(psi, s, t)) / (1.0 + s * t));
  }
  tab.add(fn, "young_equality", worst_gap, 1e-8, worst_gap <= 1e-8);
  if (!psi.is_N_function()) return;

  const YoungFunction star = conjugate_function(psi);
  const YoungFunction star2 = conjugate_function(star);
  double worst_rt = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    const double v = psi(t);
    worst_rt = std::max(worst_rt, std::abs(star2(t) - v) / (1.0 + v));
  }
  tab.add(fn, "biconjugate", worst_rt, 1e-6, worst_rt <= 1e-6);

  double worst_cp = 0.0;
  for (double t : {0.5, 1.0, 2.0}) worst_cp = std::min(worst_cp, comp_prop_margin(psi, t));
  tab.add(fn, "comp_prop_min", worst_cp, -1e-9, worst_cp >= -1e-9);

  if (!psi.is_doubling()) return;
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_real_distribution<double> wt(0.0, 0.25);
  DiscreteMeasureSpace u, v;
  for (int k = 0; k < 8; ++k) {
    const double w = wt(rng);
    u.values.push_back(val(rng));
    v.values.push_back(val(rng));
    u.weights.push_back(w);
    v.weights.push_back(w);
  }
  const double nu = luxemburg_norm(u, psi);
  DiscreteMeasureSpace u3 = u;
  for (double& x : u3.values) x *= -3.0;
  const double homog = std::abs(luxemburg_norm(u3, psi) - 3.0 * nu) / (3.0 * nu);
  tab.add(fn, "luxemburg_homogeneity", homog, 1e-7, homog <= 1e-7);
  DiscreteMeasureSpace sum = u;
  for (std::size_t k = 0; k < sum.values.size(); ++k) sum.values[k] += v.values[k];
  const double tri = nu + luxemburg_norm(v, psi) - luxemburg_norm(sum, psi);
  tab.add(fn, "luxemburg_triangle", tri, -1e-8, tri >= -1e-8);
  const double hm = holder_margin(u, v, psi);
  tab.add(fn, "holder_margin", hm, -1e-9, hm >= -1e-9);
}

Vec random_vector(std::mt19937_64& rng, int dim, double rmin, double rmax) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> logr(std::log(rmin), std::log(rmax));
  Vec z(dim);
  for (int i = 0; i < dim; ++i) z[i] = gauss(rng);
  return z.normalized() * std::exp(logr(rng));
}

void operator_suite(const std::string& label, const ExperimentConfig& cfg, std::mt19937_64& rng, CheckTable& tab,
                    CsvWriter& reg) {
  const OrliczTriple triple(make_structure(label));
  const OperatorSpec op = prototype_operator(triple);
  const std::string fn = triple.structure().label;
  const int m = 2 * cfg.n;

  double lower = std::numeric_limits<double>::infinity(), upper = lower, growth = lower;
  double gap_min = lower, fit_min = lower, ell_min = lower, jac_err = 0.0, asym = 0.0;
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    const Vec z = random_vector(rng, m, 1e-2, 1e2);
    const Vec xi = random_vector(rng, m, 1.0, 1.0);
    const Vec w = random_vector(rng, m, 1e-2, 1e2);
    const double scale = triple.F(z.norm());
    const StructureMargins sm = structure_margins(op, z, xi);
    lower = std::min(lower, sm.lower / scale);
    upper = std::min(upper, sm.upper / scale);
    growth = std::min(growth, sm.growth / (z.norm() * scale));
    const MonotonicityResult mg = monotonicity_gap(op, triple, z, w);
    const Vec dA = op.A(z) - op.A(w);
    gap_min = std::min(gap_min, mg.gap / (dA.norm() * (z - w).norm()));
    if (mg.defined) fit_min = std::min(fit_min, mg.fitted_lower);
    ell_min = std::min(ell_min, ellipticity_margin(op, triple, z) / (1.0 + triple.G(z.norm())));

    const Mat J = op.DA(z);
    asym = std::max(asym, (J - J.transpose()).norm() / J.norm());
    Mat fd(m, m);
    for (int j = 0; j < m; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[j]));
      Vec zp = z, zm = z;
      zp[j] += h;
      zm[j] -= h;
      fd.col(j) = (op.A(zp) - op.A(zm)) / (2.0 * h);
    }
    jac_err = std::max(jac_err, (fd - J).norm() / J.norm());
  }
  tab.add(fn, "lower_margin_min", lower, -1e-9, lower >= -1e-9);
  tab.add(fn, "upper_margin_min", upper, -1e-9, upper >= -1e-9);
  tab.add(fn, "growth_margin_min", growth, -1e-9, growth >= -1e-9);
  tab.add(fn, "monotonicity_gap_min", gap_min, 0.0, gap_min >= 0.0);
  tab.add(fn, "fitted_lower_min", fit_min, 0.0, fit_min > 0.0);
  tab.add(fn, "ellipticity_margin_min", ell_min, -1e-9, ell_min >= -1e-9);
  tab.add(fn, "jacobian_asymmetry_max", asym, 1e-10, asym <= 1e-10);
  tab.add(fn, "jacobian_fd_error_max", jac_err, 1e-5, jac_err <= 1e-5);

  const ParsedLabel pl = parse_label(label);
  if (pl.name == "power") {
    const double p = pl.params.count("p") ? pl.params.at("p") : 2.0;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cfg.samples; ++k) {
      const Vec z = random_vector(rng, m, 1e-2, 1e2);
      const Vec w = random_vector(rng, m, 1e-2, 1e2);
      ratio = std::min(ratio, p_laplace_gap(p, z, w).ratio);
    }
    tab.add(fn, "p_laplace_ratio_min", ratio, 0.0, ratio > 0.0);
  }

  for (double eps : cfg.eps_sweep) {
    const auto [reg_op, params] = regularize(op, triple, eps);
    double diff = 0.0;
    for (double t : log_space(1e-3, 1.0, 61)) {
      Vec z = Vec::Zero(m);
      z[0] = t;
      diff = std::max(diff, (reg_op.A(z) - op.A(z)).norm());
    }
    reg.row({fn, format_real(eps), format_real(params.m1), format_real(params.m2), format_real(params.L_tilde),
             format_real(params.lambda_tilde), format_real(diff)});
    const bool ok = std::isfinite(params.m1) && params.m1 > 0.0 && std::isfinite(params.m2) && params.m2 > 0.0 &&
                    std::isfinite(params.L_tilde) && params.lambda_tilde > 0.0;
    tab.add(fn, "regularization_eps=" + format_real(eps), params.L_tilde, params.lambda_tilde, ok);
  }
}

StudyConfig study_config(const ExperimentConfig& cfg) {
  StudyConfig sc;
  sc.n = cfg.n;
  sc.half_width = cfg.half_width;
  sc.resolutions = cfg.resolutions;
  sc.boundary = make_boundary(cfg.boundary, cfg.n);
  sc.eps = cfg.eps;
  sc.residual_tol = cfg.residual_tol;
  sc.max_iters = cfg.max_iters;
  sc.gammas = cfg.gammas;
  sc.omegas = cfg.omegas;
  sc.r_inner = cfg.r_inner;
  sc.r_outer = cfg.r_outer;
  sc.r = cfg.r;
  sc.sigma = cfg.sigma;
  sc.moser_levels = cfg.moser_levels;
  return sc;
}

std::string single_structure(const ExperimentConfig& cfg) {
  if (cfg.structures.size() > 1) throw ConfigError("this command takes a single structure label");
  return cfg.structures.empty() ? "power:p=2" : cfg.structures.front();
}

std::string moser_csv(const StudyResult& s) {
  CsvWriter w({"nodes", "level", "gamma", "radius", "norm", "ball_nodes", "inner_sup"});
  for (const auto& l : s.levels) {
    for (const auto& r : l.moser.rows) {
      w.row({std::to_string(l.nodes), std::to_string(r.level), format_real(r.gamma), format_real(r.radius),
             format_real(r.norm), std::to_string(r.nodes), format_real(l.moser.inner_sup)});
    }
  }
  return w.str();
}

}  // namespace

int cmd_orlicz_check(const ExperimentConfig& cfg) {
  CheckTable tab;
  std::mt19937_64 rng(cfg.seed);
  for (const auto& label : structures_of(cfg)) structure_suite(label, rng, cfg.samples, tab);
  for (const auto& label : cfg.young.empty() ? young_catalog() : cfg.young) young_suite(label, rng, tab);
  write_or_throw(cfg.out / "orlicz_check.csv", tab.str());
  write_or_throw(cfg.out / "orlicz_check.json", summary_line("orlicz-check", tab.all()));
  return tab.all() ? kPass : kNumericFailure;
}

int cmd_operator_check(const ExperimentConfig& cfg) {
  CheckTable tab;
  CsvWriter reg({"function", "eps", "m1", "m2", "L_tilde", "lambda_tilde", "sup_diff"});
  std::mt19937_64 rng(cfg.seed);
  for (const auto& label : structures_of(cfg)) operator_suite(label, cfg, rng, tab, reg);
  write_or_throw(cfg.out / "operator_check.csv", tab.str());
  write_or_throw(cfg.out / "regularization.csv", reg.str());
  write_or_throw(cfg.out / "operator_check.json", summary_line("operator-check", tab.all()));
  return tab.all() ? kPass : kNumericFailure;
}

int cmd_solve(const ExperimentConfig& cfg) {
  const OrliczTriple triple(make_structure(single_structure(cfg)));
  auto grid = Grid::cube(cfg.n, cfg.half_width, cfg.resolutions.back());
  DirichletProblem prob = make_problem(grid, triple, make_boundary(cfg.boundary, cfg.n), cfg.eps);
  prob.residual_tol = cfg.residual_tol;
  prob.max_iters = cfg.max_iters;
  prob.init = InitPolicy::HarmonicExtension;
  const SolveResult res = solve_dirichlet(prob);
  try {
    std::filesystem::create_directories(cfg.out);
    write_field_binary((cfg.out / "solution.bin").string(), res.u);
    write_field_csv((cfg.out / "solution.csv").string(), res.u);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
  write_or_throw(cfg.out / "solve_report.json", to_json(res.report));
  return res.report.converged ? kPass : kNumericFailure;
}

int cmd_audit(const ExperimentConfig& cfg) {
  if (cfg.resolutions.size() < 2) throw ConfigError("audit needs at least two resolutions");
  const OrliczTriple triple(make_structure(single_structure(cfg)));
  const StudyResult res = run_study(triple, study_config(cfg));
  write_or_throw(cfg.out / "audit.csv", audit_csv(res.audits));
  write_or_throw(cfg.out / "plot_data.csv", plot_data_csv(res));
  write_or_throw(cfg.out / "levels.csv", study_levels_csv(res));
  write_or_throw(cfg.out / "moser.csv", moser_csv(res));
  write_or_throw(cfg.out / "audit.json", to_json(res));
  bool pass = res.all_converged;
  for (const auto& a : res.audits) pass = pass && a.pass;
  return pass ? kPass : kNumericFailure;
}

int cmd_estimate(const ExperimentConfig& cfg) {
  const OrliczTriple triple(make_structure(single_structure(cfg)));
  StudyConfig sc = study_config(cfg);
  sc.audits = false;
  const StudyResult res = run_study(triple, sc);
  write_or_throw(cfg.out / "levels.csv", study_levels_csv(res));
  write_or_throw(cfg.out / "moser.csv", moser_csv(res));
  write_or_throw(cfg.out / "estimate.json", to_json(res));
  bool pass = res.all_converged;
  for (const auto& l : res.levels) pass = pass && std::isfinite(l.lipschitz);
  return pass ? kPass : kNumericFailure;
}

int run(int argc, char** argv) {
  CLI::App app{"solab: Heisenberg-group quasilinear solver and inequality audits"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int refinements = -1;
  app.add_option("--config", config_path, "config file (key=value or JSON)");
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "sampling seed");
  app.add_option("--refinements", refinements, "number of mesh halvings after the first resolution");
  const std::vector<std::pair<std::string, int (*)(const ExperimentConfig&)>> cmds{
      {"orlicz-check", cmd_orlicz_check}, {"operator-check", cmd_operator_check}, {"solve", cmd_solve},
      {"audit", cmd_audit},               {"estimate", cmd_estimate}};
  for (const auto& c : cmds) app.add_subcommand(c.first);
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kConfigError;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (*seed_opt) cfg.seed = seed;
    if (refinements >= 0) cfg.resolutions = refinement_ladder(cfg.resolutions.front(), refinements);
    validate(cfg);
    for (const auto& c : cmds) {
      if (app.got_subcommand(c.first)) return c.second(cfg);
    }
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  }
}

}  // namespace solab::cli
