#include <gtest/gtest.h>

#include <cmath>

#include "solab/catalog.hpp"
#include "solab/verify.hpp"

using namespace solab;

namespace {

const std::vector<double> kOrigin{0.0, 0.0, 0.0};

ScalarField coordinate_field(GridPtr g, int axis) {
  return ScalarField::sample(g, [axis](std::span<const double> x) { return x[axis]; });
}

AuditReport level(double lhs, double rhs, bool degenerate = false) {
  AuditReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.degenerate = degenerate;
  r.fitted_constant = degenerate ? 0.0 : lhs / rhs;
  r.pass = true;
  return r;
}

}  // namespace

TEST(AuditProfile, RegularizedAndRaw) {
  const OrliczTriple tr(make_structure("power:p=3"));
  const AuditProfile raw = AuditProfile::from(tr, 0.0);
  EXPECT_NEAR(raw.G(3.0), 9.0, 1e-12);
  EXPECT_EQ(raw.F(0.0), 0.0);
  EXPECT_EQ(raw.g0, 2.0);
  const AuditProfile reg = AuditProfile::from(tr, 0.05);
  EXPECT_NEAR(reg.F(0.0), 0.05, 1e-15);
  EXPECT_NEAR(reg.F(2.0), 2.0, 1e-14);
  EXPECT_NEAR(reg.G(2.0) - reg.G(1.0), 7.0 / 3.0, 1e-12);
}

TEST(Audits, VerticalEstimateMatchesDirectSum) {
  const GridPtr g = Grid::cube(1, 1.0, 17);
  const ScalarField u = coordinate_field(g, 2);
  const AuditProfile prof = AuditProfile::from(OrliczTriple(make_structure("power:p=2")), 0.0);
  const CutoffFunction eta = make_cutoff(g, kOrigin, 0.35, 0.8);
  const double gamma = 2.0, e = 3.0, K = eta.K_eta;
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    const double et = eta.eta[i];
    if (et <= 0.0) continue;
    const double x1 = g->coord(i, 0), x2 = g->coord(i, 1);
    const double xn2 = 0.25 * (x1 * x1 + x2 * x2);  // |X t|^2
    lhs += g->weight(i) * et * et * std::pow(0.5 * et * et / K, e);
    rhs += g->weight(i) * K * std::pow(0.5 * xn2, e) * xn2;
  }
  const AuditReport r = vertical_estimate_audit(u, prof, eta, gamma);
  EXPECT_EQ(r.name, "vertical_estimate");
  EXPECT_NEAR(r.lhs, lhs, 1e-12 * lhs);
  EXPECT_NEAR(r.rhs, rhs, 1e-12 * rhs);
  EXPECT_NEAR(r.fitted_constant, lhs / rhs, 1e-12 * lhs / rhs);
  EXPECT_TRUE(r.pass);
}

TEST(Audits, CaccioppoliTOnSimpleFields) {
  const GridPtr g = Grid::cube(1, 1.0, 17);
  const AuditProfile prof = AuditProfile::from(OrliczTriple(make_structure("power:p=2")), 0.0);
  const CutoffFunction eta = make_cutoff(g, kOrigin, 0.35, 0.8);
  // T t = 1 has no horizontal gradient.
  const AuditReport t = caccioppoli_T_audit(coordinate_field(g, 2), prof, eta, 1.0);
  EXPECT_NEAR(t.lhs, 0.0, 1e-14);
  EXPECT_GT(t.rhs, 0.0);
  EXPECT_FALSE(t.degenerate);
  EXPECT_TRUE(t.pass);
  // x1 has T u = 0 and G(0) = 0 on both sides.
  const AuditReport x = caccioppoli_T_audit(coordinate_field(g, 0), prof, eta, 0.0);
  EXPECT_TRUE(x.degenerate);
  EXPECT_EQ(x.fitted_constant, 0.0);
  EXPECT_TRUE(x.pass);
}

TEST(Audits, AuditAllOrder) {
  const GridPtr g = Grid::cube(1, 1.0, 17);
  const ScalarField u = ScalarField::sample(g, make_boundary("oscillatory", 1).value);
  const AuditProfile prof = AuditProfile::from(OrliczTriple(make_structure("power:p=3")), 1e-4);
  const CutoffFunction eta = make_cutoff(g, kOrigin, 0.35, 0.8);
  const std::vector<double> gammas{1.0, 2.0}, omegas{1.0, 4.0};
  const auto rs = audit_all(u, prof, eta, gammas, omegas);
  ASSERT_EQ(rs.size(), 12u);
  const char* names[] = {"caccioppoli_T", "caccioppoli_X", "reverse", "reverse", "horizontal_estimate",
                         "vertical_estimate"};
  for (std::size_t k = 0; k < rs.size(); ++k) {
    EXPECT_EQ(rs[k].name, names[k % 6]);
    EXPECT_EQ(rs[k].gamma, k < 6 ? 1.0 : 2.0);
    EXPECT_TRUE(rs[k].pass) << rs[k].name;
  }
  EXPECT_EQ(rs[3].omega, 4.0);
  const AuditReport single = reverse_audit(u, prof, eta, 2.0, 4.0);
  EXPECT_EQ(single.lhs, rs[9].lhs);
  EXPECT_EQ(single.rhs, rs[9].rhs);
}

TEST(Audits, ArgumentErrors) {
  const GridPtr g = Grid::cube(1, 1.0, 17);
  const ScalarField u = coordinate_field(g, 0);
  const AuditProfile prof = AuditProfile::from(OrliczTriple(make_structure("power:p=2")), 0.0);
  const CutoffFunction eta = make_cutoff(g, kOrigin, 0.35, 0.8);
  EXPECT_THROW(caccioppoli_T_audit(u, prof, eta, -0.5), std::invalid_argument);
  EXPECT_THROW(caccioppoli_X_audit(u, prof, eta, NAN), std::invalid_argument);
  EXPECT_THROW(reverse_audit(u, prof, eta, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(reverse_audit(u, prof, eta, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(horizontal_estimate_audit(u, prof, eta, 0.9), std::invalid_argument);
  EXPECT_THROW(vertical_estimate_audit(u, prof, eta, 0.0), std::invalid_argument);
  const CutoffFunction other = make_cutoff(Grid::cube(1, 1.0, 9), kOrigin, 0.35, 0.8);
  EXPECT_THROW(vertical_estimate_audit(u, prof, other, 1.0), std::invalid_argument);
}

TEST(Finalize, Rules) {
  EXPECT_TRUE(finalize_refinement({level(1.0, 1.0), level(1.5, 1.0)}).pass);
  EXPECT_FALSE(finalize_refinement({level(1.0, 1.0), level(3.0, 1.0)}).pass);
  EXPECT_TRUE(finalize_refinement({level(1.0, 1.0), level(3.0, 1.0)}, 4.0).pass);
  EXPECT_FALSE(finalize_refinement({level(1.0, 1.0), level(-1.0, 1.0)}).pass);
  const AuditReport deg = finalize_refinement({level(0, 0, true), level(0, 0, true)});
  EXPECT_TRUE(deg.pass);
  EXPECT_TRUE(deg.degenerate);
  // lhs at rounding level on both levels
  EXPECT_TRUE(finalize_refinement({level(1e-15, 1.0), level(-3e-16, 2.0)}).pass);
  EXPECT_FALSE(finalize_refinement({level(1e-15, 1.0), level(1.0, 2.0)}).pass);
  AuditReport failing = level(1.0, 1.0);
  failing.pass = false;
  EXPECT_FALSE(finalize_refinement({failing, level(1.0, 1.0)}).pass);
  const AuditReport merged = finalize_refinement({level(1.0, 2.0), level(1.0, 1.0), level(1.5, 1.0)});
  ASSERT_EQ(merged.refinement_history.size(), 3u);
  EXPECT_EQ(merged.refinement_history[0], 0.5);
  EXPECT_EQ(merged.fitted_constant, 1.5);
  EXPECT_THROW(finalize_refinement({}), std::invalid_argument);
}

TEST(Lipschitz, ConstantGradientGivesDilationFactor) {
  const GridPtr g = Grid::cube(1, 1.0, 17);
  const AuditProfile prof = AuditProfile::from(OrliczTriple(make_structure("power:p=3")), 0.0);
  EXPECT_NEAR(lipschitz_ratio(coordinate_field(g, 0), prof, kOrigin, 0.8, 0.5), 0.0625, 1e-13);
  EXPECT_NEAR(lipschitz_ratio(coordinate_field(g, 1), prof, kOrigin, 0.8, 0.25), std::pow(0.75, 4), 1e-13);
  EXPECT_THROW(lipschitz_ratio(coordinate_field(g, 0), prof, kOrigin, 0.8, 1.0), std::invalid_argument);
  EXPECT_THROW(lipschitz_ratio(coordinate_field(g, 0), prof, kOrigin, 0.0, 0.5), std::invalid_argument);
}

TEST(Moser, Schedule) {
  const MoserSchedule s = make_moser_schedule(4, 0.8, 0.5, 4);
  EXPECT_EQ(s.kappa, 2.0);
  EXPECT_EQ(s.gamma, (std::vector<double>{1.0, 4.0, 10.0, 22.0}));
  EXPECT_DOUBLE_EQ(s.radii[0], 0.8);
  EXPECT_DOUBLE_EQ(s.radii[3], 0.4 + 0.4 / 8.0);
  const MoserSchedule s6 = make_moser_schedule(6, 1.0, 0.5, 2);
  EXPECT_DOUBLE_EQ(s6.kappa, 1.5);
  EXPECT_DOUBLE_EQ(s6.gamma[1], 2.5);
  EXPECT_THROW(make_moser_schedule(3, 1.0, 0.5, 4), std::invalid_argument);
  EXPECT_THROW(make_moser_schedule(4, 1.0, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(make_moser_schedule(4, 1.0, 1.5, 4), std::invalid_argument);
}

TEST(Moser, ConstantDensity) {
  const GridPtr g = Grid::cube(1, 1.0, 17);
  const AuditProfile prof = AuditProfile::from(OrliczTriple(make_structure("power:p=2")), 0.0);
  const MoserTrace tr = moser_trace(coordinate_field(g, 0), prof, kOrigin, 0.8, 0.5, 4);
  ASSERT_EQ(tr.rows.size(), 4u);
  for (const auto& row : tr.rows) {
    EXPECT_NEAR(row.norm, 0.5, 1e-13);
    EXPECT_GT(row.nodes, 0u);
  }
  EXPECT_TRUE(tr.nondecreasing);
  EXPECT_NEAR(tr.inner_sup, 0.5, 1e-15);
  EXPECT_GT(tr.rows[0].nodes, tr.rows[3].nodes);
}

TEST(Moser, NormsBoundedByBallMaximum) {
  const GridPtr g = Grid::cube(1, 1.0, 17);
  const ScalarField u = ScalarField::sample(g, make_boundary("oscillatory", 1).value);
  const AuditProfile prof = AuditProfile::from(OrliczTriple(make_structure("power:p=3")), 0.0);
  const MoserTrace tr = moser_trace(u, prof, kOrigin, 0.8, 0.5, 8);
  const HorizontalField X = horizontal_gradient(u);
  for (const auto& row : tr.rows) {
    const Mask ball = ball_mask(*g, kOrigin, row.radius);
    double mx = 0.0;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      if (ball[i]) mx = std::max(mx, prof.G(X.norm_at(i)));
    }
    EXPECT_LE(row.norm, mx * (1.0 + 1e-12));
    EXPECT_GT(row.norm, 0.0);
  }
}

TEST(Study, SmallRun) {
  StudyConfig cfg;
  cfg.resolutions = {9, 17};
  cfg.boundary = make_boundary("oscillatory", 1);
  cfg.moser_levels = 3;
  const StudyResult res = run_study(OrliczTriple(make_structure("power:p=3")), cfg);
  EXPECT_TRUE(res.all_converged);
  ASSERT_EQ(res.levels.size(), 2u);
  EXPECT_EQ(res.levels[1].nodes, 17u);
  EXPECT_EQ(res.audits.size(), 5u);
  for (const auto& a : res.audits) EXPECT_EQ(a.refinement_history.size(), 2u);
  const double a = res.levels[0].lipschitz, b = res.levels[1].lipschitz;
  EXPECT_NEAR(res.lipschitz_variation, std::abs(b - a) / a, 1e-15);
  EXPECT_EQ(res.levels[1].moser.rows.size(), 3u);

  cfg.audits = false;
  cfg.estimate = false;
  const StudyResult bare = run_study(OrliczTriple(make_structure("power:p=3")), cfg);
  EXPECT_TRUE(bare.audits.empty());
  EXPECT_TRUE(bare.levels[0].moser.rows.empty());
  cfg.resolutions.clear();
  EXPECT_THROW(run_study(OrliczTriple(make_structure("power:p=3")), cfg), std::invalid_argument);
}
