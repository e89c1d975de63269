#include "solab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "solab/operator.hpp"

namespace solab {

namespace {

constexpr double kDegenerate = 1e-14;

struct NodalData {
  HorizontalField Xu;
  ScalarField Tu;
  HessianField XXu;
  HorizontalField XTu;
  std::vector<double> xnorm;

  explicit NodalData(const ScalarField& u)
      : Xu(horizontal_gradient(u)), Tu(vertical_derivative(u)), XXu(horizontal_hessian(u)) {
    XTu = horizontal_gradient(Tu);
    xnorm.resize(u.values.size());
    for (std::size_t i = 0; i < xnorm.size(); ++i) xnorm[i] = Xu.norm_at(i);
  }
};

AuditReport make_report(std::string name, double lhs, double rhs, double gamma, double omega, double h) {
  AuditReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.gamma = gamma;
  r.omega = omega;
  r.h = h;
  if (std::abs(lhs) < kDegenerate && std::abs(rhs) < kDegenerate) {
    r.degenerate = true;
    r.fitted_constant = 0.0;
  } else if (rhs > 0.0) {
    r.fitted_constant = lhs / rhs;
  } else {
    r.fitted_constant = std::numeric_limits<double>::infinity();
  }
  r.pass = std::isfinite(r.fitted_constant);
  r.refinement_history = {r.fitted_constant};
  return r;
}

void require_gamma(double gamma, double min, const char* what) {
  if (!(gamma >= min) || !std::isfinite(gamma)) {
    throw std::invalid_argument(std::string(what) + ": gamma out of range");
  }
}

void require_same_grid(const ScalarField& u, const CutoffFunction& eta) {
  if (!(*u.grid == *eta.eta.grid)) throw std::invalid_argument("audit: cutoff lives on another grid");
}

double integrate_fn(const GridPtr& g, const std::function<double(std::size_t)>& f, const Mask* mask = nullptr) {
  ScalarField s(g);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = f(i);
  return mask ? integrate(s, *mask) : integrate(s);
}

Mask support_mask(const CutoffFunction& eta) {
  Mask m(eta.eta.values.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = eta.eta.values[i] > 0.0 ? 1 : 0;
  return m;
}

double sqnorm(const HorizontalField& f, std::size_t i) {
  const double n = f.norm_at(i);
  return n * n;
}

// lhs at rounding level relative to rhs.
bool negligible(const AuditReport& r) { return std::abs(r.lhs) <= 1e-12 * (1.0 + std::abs(r.rhs)); }

AuditReport audit_T(const NodalData& D, const GridPtr& g, const AuditProfile& P, const CutoffFunction& eta,
                    double gamma) {
  const double e = gamma + 1.0;
  const double lhs = integrate_fn(g, [&](std::size_t i) {
    const double et = eta.eta.values[i];
    if (et == 0.0) return 0.0;
    return et * et * std::pow(P.G(std::abs(D.Tu.values[i])), e) * P.F(D.xnorm[i]) * sqnorm(D.XTu, i);
  });
  const double rhs = integrate_fn(g, [&](std::size_t i) {
    const double tu = D.Tu.values[i];
    return std::pow(P.G(std::abs(tu)), e) * P.F(D.xnorm[i]) * tu * tu * sqnorm(eta.X_eta, i);
  }) / (e * e);
  return make_report("caccioppoli_T", lhs, rhs, gamma, 1.0, g->h_x());
}

AuditReport audit_X(const NodalData& D, const GridPtr& g, const AuditProfile& P, const CutoffFunction& eta,
                    double gamma) {
  const double e = gamma + 1.0;
  const double lhs = integrate_fn(g, [&](std::size_t i) {
    const double et = eta.eta.values[i];
    if (et == 0.0) return 0.0;
    const double xx = D.XXu.frobenius_at(i);
    return et * et * std::pow(P.G(D.xnorm[i]), e) * P.F(D.xnorm[i]) * xx * xx;
  });
  const double r1 = integrate_fn(g, [&](std::size_t i) {
    const double xn = D.xnorm[i];
    const double cut = sqnorm(eta.X_eta, i) + std::abs(eta.eta.values[i] * eta.T_eta.values[i]);
    return std::pow(P.G(xn), e) * xn * xn * P.F(xn) * cut;
  });
  const double r2 = integrate_fn(g, [&](std::size_t i) {
    const double et = eta.eta.values[i];
    const double tu = D.Tu.values[i];
    return et * et * std::pow(P.G(D.xnorm[i]), e) * P.F(D.xnorm[i]) * tu * tu;
  });
  return make_report("caccioppoli_X", lhs, r1 + std::pow(e, 4.0) * r2, gamma, 1.0, g->h_x());
}

double xx_energy(const NodalData& D, const GridPtr& g, const AuditProfile& P, const CutoffFunction& eta,
                 double e) {
  return integrate_fn(g, [&](std::size_t i) {
    const double et = eta.eta.values[i];
    if (et == 0.0) return 0.0;
    const double xx = D.XXu.frobenius_at(i);
    return et * et * std::pow(P.G(D.xnorm[i]), e) * P.F(D.xnorm[i]) * xx * xx;
  });
}

double gradient_mass(const NodalData& D, const GridPtr& g, const AuditProfile& P, const Mask& supp, double e) {
  return integrate_fn(
      g,
      [&](std::size_t i) {
        const double xn = D.xnorm[i];
        return std::pow(P.G(xn), e) * xn * xn * P.F(xn);
      },
      &supp);
}

AuditReport audit_reverse(const NodalData& D, const GridPtr& g, const AuditProfile& P, const CutoffFunction& eta,
                          double gamma, double omega) {
  if (!(eta.K_eta > 0.0)) throw std::invalid_argument("reverse_audit: K_eta = 0");
  const double e = gamma + 1.0;
  const double scale = 1.0 / std::sqrt(omega * eta.K_eta);
  const double lhs = integrate_fn(g, [&](std::size_t i) {
    const double et = eta.eta.values[i];
    if (et == 0.0) return 0.0;
    const double xx = D.XXu.frobenius_at(i);
    return et * et * std::pow(P.G(et * std::abs(D.Tu.values[i]) * scale), e) * P.F(D.xnorm[i]) * xx * xx;
  });
  const double rhs = std::pow(omega, -e / 2.0) * xx_energy(D, g, P, eta, e);
  return make_report("reverse", lhs, rhs, gamma, omega, g->h_x());
}

AuditReport audit_horizontal(const NodalData& D, const GridPtr& g, const AuditProfile& P,
                             const CutoffFunction& eta, double gamma) {
  const double e = gamma + 1.0;
  const double lhs = xx_energy(D, g, P, eta, e);
  const Mask supp = support_mask(eta);
  const double rhs = std::pow(e, 10.0 * (1.0 + P.g0)) * eta.K_eta * gradient_mass(D, g, P, supp, e);
  return make_report("horizontal_estimate", lhs, rhs, gamma, 1.0, g->h_x());
}

AuditReport audit_vertical(const NodalData& D, const GridPtr& g, const AuditProfile& P, const CutoffFunction& eta,
                           double gamma) {
  if (!(eta.K_eta > 0.0)) throw std::invalid_argument("vertical_estimate_audit: K_eta = 0");
  const double e = gamma + 1.0;
  const double scale = 1.0 / std::sqrt(eta.K_eta);
  const double lhs = integrate_fn(g, [&](std::size_t i) {
    const double et = eta.eta.values[i];
    if (et == 0.0) return 0.0;
    const double tu = D.Tu.values[i];
    return et * et * std::pow(P.G(et * std::abs(tu) * scale), e) * P.F(D.xnorm[i]) * tu * tu;
  });
  const Mask supp = support_mask(eta);
  const double rhs = eta.K_eta * gradient_mass(D, g, P, supp, e);
  return make_report("vertical_estimate", lhs, rhs, gamma, 1.0, g->h_x());
}

}  // namespace

AuditProfile AuditProfile::from(const OrliczTriple& triple, double eps) {
  AuditProfile p;
  p.g0 = triple.g0();
  if (eps > 0.0) {
    const RadialProfile rp = regularized_profile(triple, eps);
    p.G = rp.potential;
    p.F = [rp](double t) { return t > 0.0 ? rp.phi(t) / t : rp.dphi(0.0); };
  } else {
    auto tr = std::make_shared<OrliczTriple>(triple);
    p.G = [tr](double t) { return tr->G(t); };
    p.F = [tr](double t) { return tr->F(t); };
  }
  return p;
}

AuditReport caccioppoli_T_audit(const ScalarField& u, const AuditProfile& prof, const CutoffFunction& eta,
                                double gamma) {
  require_gamma(gamma, 0.0, "caccioppoli_T_audit");
  require_same_grid(u, eta);
  return audit_T(NodalData(u), u.grid, prof, eta, gamma);
}

AuditReport caccioppoli_X_audit(const ScalarField& u, const AuditProfile& prof, const CutoffFunction& eta,
                                double gamma) {
  require_gamma(gamma, 0.0, "caccioppoli_X_audit");
  require_same_grid(u, eta);
  return audit_X(NodalData(u), u.grid, prof, eta, gamma);
}

AuditReport reverse_audit(const ScalarField& u, const AuditProfile& prof, const CutoffFunction& eta,
                          double gamma, double omega) {
  require_gamma(gamma, 1.0, "reverse_audit");
  if (!(omega >= 1.0)) throw std::invalid_argument("reverse_audit: omega must be >= 1");
  require_same_grid(u, eta);
  return audit_reverse(NodalData(u), u.grid, prof, eta, gamma, omega);
}

AuditReport horizontal_estimate_audit(const ScalarField& u, const AuditProfile& prof,
                                      const CutoffFunction& eta, double gamma) {
  require_gamma(gamma, 1.0, "horizontal_estimate_audit");
  require_same_grid(u, eta);
  return audit_horizontal(NodalData(u), u.grid, prof, eta, gamma);
}

AuditReport vertical_estimate_audit(const ScalarField& u, const AuditProfile& prof,
                                    const CutoffFunction& eta, double gamma) {
  require_gamma(gamma, 1.0, "vertical_estimate_audit");
  require_same_grid(u, eta);
  return audit_vertical(NodalData(u), u.grid, prof, eta, gamma);
}

std::vector<AuditReport> audit_all(const ScalarField& u, const AuditProfile& prof, const CutoffFunction& eta,
                                   std::span<const double> gammas, std::span<const double> omegas) {
  require_same_grid(u, eta);
  const NodalData D(u);
  std::vector<AuditReport> out;
  for (double gamma : gammas) {
    require_gamma(gamma, 1.0, "audit_all");
    out.push_back(audit_T(D, u.grid, prof, eta, gamma));
    out.push_back(audit_X(D, u.grid, prof, eta, gamma));
    for (double omega : omegas) {
      if (!(omega >= 1.0)) throw std::invalid_argument("audit_all: omega must be >= 1");
      out.push_back(audit_reverse(D, u.grid, prof, eta, gamma, omega));
    }
    out.push_back(audit_horizontal(D, u.grid, prof, eta, gamma));
    out.push_back(audit_vertical(D, u.grid, prof, eta, gamma));
  }
  return out;
}

AuditReport finalize_refinement(const std::vector<AuditReport>& levels, double band) {
  if (levels.empty()) throw std::invalid_argument("finalize_refinement: no levels");
  AuditReport out = levels.back();
  out.refinement_history.clear();
  bool pass = true;
  bool all_degenerate = true;
  for (const auto& l : levels) {
    out.refinement_history.push_back(l.fitted_constant);
    pass = pass && l.pass;
    all_degenerate = all_degenerate && l.degenerate;
  }
  if (!all_degenerate) {
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
      const double a = levels[k].fitted_constant;
      const double b = levels[k + 1].fitted_constant;
      const bool null_pair = negligible(levels[k]) && negligible(levels[k + 1]);
      const bool stable =
          null_pair || a == b || (a > 0.0 && b > 0.0 && std::max(a, b) <= band * std::min(a, b));
      pass = pass && stable;
    }
  }
  out.degenerate = all_degenerate;
  out.pass = pass;
  return out;
}

double lipschitz_ratio(const ScalarField& u, const AuditProfile& prof, std::span<const double> center, double r,
                       double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("lipschitz_ratio: sigma must lie in (0,1)");
  if (!(r > 0.0)) throw std::invalid_argument("lipschitz_ratio: r must be positive");
  const Grid& g = *u.grid;
  const HorizontalField Xu = horizontal_gradient(u);
  ScalarField w(u.grid);
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] = prof.G(Xu.norm_at(i));
  const Mask outer = ball_mask(g, center, r);
  const Mask inner = ball_mask(g, center, sigma * r);
  double sup = -1.0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i]) sup = std::max(sup, w.values[i]);
  }
  if (sup < 0.0) throw std::invalid_argument("lipschitz_ratio: inner ball contains no nodes");
  const double avg = integrate(w, outer) / region_measure(g, outer);
  const int Q = 2 * g.n() + 2;
  return sup * std::pow(1.0 - sigma, Q) / avg;
}

MoserSchedule make_moser_schedule(int Q, double r, double sigma, int levels) {
  if (Q < 4) throw std::invalid_argument("moser: Q must be >= 4");
  if (levels < 2) throw std::invalid_argument("moser: need at least two levels");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("moser: sigma must lie in (0,1)");
  MoserSchedule s;
  s.kappa = static_cast<double>(Q) / static_cast<double>(Q - 2);
  for (int i = 0; i < levels; ++i) {
    s.gamma.push_back(3.0 * std::pow(s.kappa, i) - 2.0);
    s.radii.push_back(sigma * r + (1.0 - sigma) * r / std::pow(2.0, i));
  }
  return s;
}

MoserTrace moser_trace(const ScalarField& u, const AuditProfile& prof, std::span<const double> center, double r,
                       double sigma, int levels) {
  const Grid& g = *u.grid;
  const MoserSchedule sched = make_moser_schedule(2 * g.n() + 2, r, sigma, levels);
  const HorizontalField Xu = horizontal_gradient(u);
  std::vector<double> w(u.values.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = prof.G(Xu.norm_at(i));

  MoserTrace tr;
  const Mask inner = ball_mask(g, center, sigma * r);
  tr.inner_sup = -1.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (inner[i]) tr.inner_sup = std::max(tr.inner_sup, w[i]);
  }
  if (tr.inner_sup < 0.0) throw std::invalid_argument("moser_trace: inner ball contains no nodes");

  for (int i = 0; i < levels; ++i) {
    const Mask ball = ball_mask(g, center, sched.radii[i]);
    MoserRow row;
    row.level = i;
    row.gamma = sched.gamma[i];
    row.radius = sched.radii[i];
    row.nodes = static_cast<std::size_t>(std::count(ball.begin(), ball.end(), 1));
    if (row.nodes == 0) throw std::invalid_argument("moser_trace: schedule exceeds grid resolution");
    // Scale by the ball maximum before powering to keep w^q representable.
    double wmax = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (ball[k]) wmax = std::max(wmax, w[k]);
    }
    const double q = row.gamma + 2.0;
    if (wmax == 0.0) {
      row.norm = 0.0;
    } else {
      ScalarField powed(u.grid);
      for (std::size_t k = 0; k < w.size(); ++k) powed.values[k] = std::pow(w[k] / wmax, q);
      const double avg = integrate(powed, ball) / region_measure(g, ball);
      row.norm = wmax * std::pow(avg, 1.0 / q);
    }
    tr.rows.push_back(row);
  }
  tr.nondecreasing = true;
  for (std::size_t i = 0; i + 1 < tr.rows.size(); ++i) {
    if (tr.rows[i + 1].norm < tr.rows[i].norm * (1.0 - 1e-9)) tr.nondecreasing = false;
  }
  return tr;
}

StudyResult run_study(const OrliczTriple& triple, const StudyConfig& cfg) {
  if (cfg.resolutions.empty()) throw std::invalid_argument("run_study: no resolutions");
  if (!cfg.boundary.value) throw std::invalid_argument("run_study: no boundary data");
  StudyResult res;
  res.all_converged = true;
  std::vector<std::vector<AuditReport>> per_level;
  const std::vector<double> center(static_cast<std::size_t>(2 * cfg.n + 1), 0.0);
  const AuditProfile prof = AuditProfile::from(triple, cfg.eps);

  for (std::size_t nodes : cfg.resolutions) {
    auto grid = Grid::cube(cfg.n, cfg.half_width, nodes);
    DirichletProblem prob = make_problem(grid, triple, cfg.boundary, cfg.eps);
    prob.residual_tol = cfg.residual_tol;
    prob.max_iters = cfg.max_iters;
    prob.init = InitPolicy::HarmonicExtension;
    SolveResult sol = solve_dirichlet(prob);
    res.all_converged = res.all_converged && sol.report.converged;

    StudyLevel lvl;
    lvl.nodes = nodes;
    lvl.h = grid->h_x();
    lvl.solve = sol.report;
    if (cfg.estimate) {
      lvl.lipschitz = lipschitz_ratio(sol.u, prof, center, cfg.r, cfg.sigma);
      lvl.moser = moser_trace(sol.u, prof, center, cfg.r, cfg.sigma, cfg.moser_levels);
    }
    if (cfg.audits) {
      const CutoffFunction eta = make_cutoff(grid, center, cfg.r_inner, cfg.r_outer);
      per_level.push_back(audit_all(sol.u, prof, eta, cfg.gammas, cfg.omegas));
    }
    res.levels.push_back(std::move(lvl));
  }

  if (cfg.audits) {
    for (std::size_t k = 0; k < per_level.front().size(); ++k) {
      std::vector<AuditReport> hist;
      for (const auto& lvl : per_level) hist.push_back(lvl[k]);
      res.audits.push_back(finalize_refinement(hist));
    }
  }
  for (std::size_t k = 0; k + 1 < res.levels.size(); ++k) {
    const double a = res.levels[k].lipschitz;
    const double b = res.levels[k + 1].lipschitz;
    res.lipschitz_variation = std::max(res.lipschitz_variation, std::abs(b - a) / std::abs(a));
  }
  return res;
}

}  // namespace solab
