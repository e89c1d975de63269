#include <gtest/gtest.h>

#include <cmath>

#include "solab/grid.hpp"

using namespace solab;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double cutoff_reference(std::span<const double> x, std::span<const double> c, double r0, double r1) {
  const GroupPoint y = group_multiply(group_inverse(GroupPoint({c.begin(), c.end()})), GroupPoint({x.begin(), x.end()}));
  const double rho = gauge_value(y.coords(), Gauge::Quartic);
  const double s = std::clamp((rho - r0) / (r1 - r0), 0.0, 1.0);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

}  // namespace

TEST(Grid, Geometry) {
  const GridPtr g = Grid::cube(1, 1.0, 9);
  EXPECT_EQ(g->dim(), 3);
  EXPECT_EQ(g->node_count(), 729u);
  EXPECT_DOUBLE_EQ(g->h_x(), 0.25);
  EXPECT_EQ(g->stride(2), 1u);
  EXPECT_EQ(g->stride(0), 81u);
  const std::vector<double> x = g->coords(1);
  EXPECT_DOUBLE_EQ(x[0], -1.0);
  EXPECT_DOUBLE_EQ(x[2], -0.75);
  EXPECT_TRUE(g->on_boundary(0));
  EXPECT_EQ(g->depth(364), 4u);
  EXPECT_DOUBLE_EQ(g->weight(0), 0.125 * 0.25 * 0.25 * 0.25);
  EXPECT_DOUBLE_EQ(g->cell_volume(), 0.25 * 0.25 * 0.25);
  EXPECT_TRUE(*g == *Grid::cube(1, 1.0, 9));
  EXPECT_FALSE(*g == *Grid::cube(1, 1.0, 11));
}

TEST(Grid, Parabolic) {
  const GridPtr g = Grid::parabolic(1, 1.0, 9, 0.3);
  EXPECT_DOUBLE_EQ(g->h_t(), 0.0625);
  EXPECT_EQ(g->size(2), 11u);
  EXPECT_DOUBLE_EQ(g->upper(2), 0.3125);
}

TEST(Grid, Errors) {
  EXPECT_THROW(Grid(0, {0}, {1}, {3}), std::invalid_argument);
  EXPECT_THROW(Grid(1, {0, 0, 0}, {1, 1, 1}, {3, 3, 2}), std::invalid_argument);
  EXPECT_THROW(Grid(1, {0, 0, 0}, {1, 0, 1}, {3, 3, 3}), std::invalid_argument);
  EXPECT_THROW(Grid(1, {0, 0}, {1, 1}, {3, 3}), std::invalid_argument);
  const GridPtr g = Grid::cube(1, 1.0, 5);
  EXPECT_THROW(ScalarField(g, std::vector<double>(3)), std::invalid_argument);
}

TEST(Derivatives, ExactOnQuadratics) {
  const GridPtr g = Grid::cube(1, 1.0, 9);
  auto f = [](std::span<const double> x) { return x[0] * x[0] + 3.0 * x[1] * x[2] + x[2] * x[2]; };
  const ScalarField u = ScalarField::sample(g, f);
  const HorizontalField X = horizontal_gradient(u);
  const ScalarField T = vertical_derivative(u);
  const ScalarField X1 = ScalarField::sample(g, [](std::span<const double> x) {
    return 2.0 * x[0] - 0.5 * x[1] * (3.0 * x[1] + 2.0 * x[2]);
  });
  const ScalarField X2 = ScalarField::sample(g, [](std::span<const double> x) {
    return 3.0 * x[2] + 0.5 * x[0] * (3.0 * x[1] + 2.0 * x[2]);
  });
  const ScalarField Tu = ScalarField::sample(g, [](std::span<const double> x) { return 3.0 * x[1] + 2.0 * x[2]; });
  EXPECT_LT(max_abs_diff(X.comp[0], X1.values), 1e-12);
  EXPECT_LT(max_abs_diff(X.comp[1], X2.values), 1e-12);
  EXPECT_LT(max_abs_diff(T.values, Tu.values), 1e-12);
}

TEST(Derivatives, DivergenceOfGradient) {
  // sum X_j X_j of x1^2 + x2^2 is 4.
  const GridPtr g = Grid::cube(1, 1.0, 9);
  const ScalarField u = ScalarField::sample(g, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; });
  const ScalarField div = horizontal_divergence(horizontal_gradient(u));
  for (double v : div.values) EXPECT_NEAR(v, 4.0, 1e-11);
}

TEST(Derivatives, CommutatorExactOnLowDegree) {
  const GridPtr g = Grid::cube(1, 1.0, 9);
  const ScalarField u = ScalarField::sample(g, [](std::span<const double> x) { return x[0] * x[1] * x[2]; });
  EXPECT_LT(commutator_residual(u), 1e-11);
}

TEST(Derivatives, CommutatorConvergesSecondOrder) {
  auto f = [](std::span<const double> x) {
    return std::sin(1.3 * x[0]) * std::cos(0.7 * x[1]) + std::sin(x[0] * x[2]) + x[1] * x[1] * x[1] * x[2];
  };
  const double r1 = commutator_residual(ScalarField::sample(Grid::cube(1, 1.0, 33), f));
  const double r2 = commutator_residual(ScalarField::sample(Grid::cube(1, 1.0, 65), f));
  EXPECT_GT(std::log2(r1 / r2), 1.8);
}

TEST(Derivatives, TdBoundMarginForT) {
  // T t = 1 and the horizontal Hessian of t is antisymmetric with entries 1/2.
  const GridPtr g = Grid::cube(1, 1.0, 9);
  const ScalarField u = ScalarField::sample(g, [](std::span<const double> x) { return x[2]; });
  EXPECT_NEAR(td_bound_margin(u), std::sqrt(2.0) - 1.0, 1e-12);
  const HessianField H = horizontal_hessian(u);
  EXPECT_NEAR(H.H[0][1][364], 0.5, 1e-12);
  EXPECT_NEAR(H.H[1][0][364], -0.5, 1e-12);
}

TEST(Integration, TrapezoidRule) {
  const GridPtr g = Grid::cube(1, 1.0, 9);
  EXPECT_NEAR(integrate(ScalarField(g, 1.0)), 8.0, 1e-12);
  const ScalarField lin = ScalarField::sample(g, [](std::span<const double> x) { return 1.0 + x[0] - 2.0 * x[2]; });
  EXPECT_NEAR(integrate(lin), 8.0, 1e-12);
  auto sq = [](std::span<const double> x) { return x[0] * x[0]; };
  const double e1 = std::abs(integrate(ScalarField::sample(Grid::cube(1, 1.0, 9), sq)) - 8.0 / 3.0);
  const double e2 = std::abs(integrate(ScalarField::sample(Grid::cube(1, 1.0, 17), sq)) - 8.0 / 3.0);
  EXPECT_NEAR(e1 / e2, 4.0, 1e-9);
}

TEST(Integration, Regions) {
  const GridPtr g = Grid::cube(1, 1.0, 17);
  const std::vector<double> c{0.0, 0.0, 0.0};
  const Mask m = ball_mask(*g, c, 0.5);
  std::size_t count = 0, ref = 0;
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    count += m[i];
    if (homogeneous_norm(GroupPoint(g->coords(i))) <= 0.5) ++ref;
  }
  EXPECT_EQ(count, ref);
  EXPECT_GT(region_measure(*g, m), 0.0);
  EXPECT_NEAR(integrate(ScalarField(g, 2.0), m), 2.0 * region_measure(*g, m), 1e-14);
  EXPECT_THROW(integrate(ScalarField(g, 1.0), Mask(g->node_count(), 0)), std::invalid_argument);
  EXPECT_THROW(integrate(ScalarField(g, 1.0), Mask(3, 1)), std::invalid_argument);
}

TEST(Cutoff, MatchesGroupTranslateOfGauge) {
  const GridPtr g = Grid::cube(1, 1.0, 17);
  const std::vector<double> c{0.1, -0.05, 0.02};
  const CutoffFunction cf = make_cutoff(g, c, 0.3, 0.7);
  double worst = 0.0;
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    const std::vector<double> x = g->coords(i);
    worst = std::max(worst, std::abs(cf.eta[i] - cutoff_reference(x, c, 0.3, 0.7)));
    EXPECT_GE(cf.eta[i], 0.0);
    EXPECT_LE(cf.eta[i], 1.0);
  }
  EXPECT_LT(worst, 1e-14);
}

TEST(Cutoff, DerivativesAgreeWithDifferences) {
  // The smoothstep is only C^2, so differences converge slowly on coarse grids.
  const std::vector<double> c{0.0, 0.0, 0.0};
  double prev = INFINITY;
  for (std::size_t nodes : {17u, 33u, 65u}) {
    const GridPtr g = Grid::cube(1, 1.0, nodes);
    const CutoffFunction cf = make_cutoff(g, c, 0.35, 0.8);
    const HorizontalField X = horizontal_gradient(cf.eta);
    const ScalarField T = vertical_derivative(cf.eta);
    const double err = std::max({max_abs_diff(X.comp[0], cf.X_eta.comp[0]),
                                 max_abs_diff(X.comp[1], cf.X_eta.comp[1]),
                                 max_abs_diff(T.values, cf.T_eta.values)});
    EXPECT_LT(err, prev / 2.0);
    prev = err;
  }
  EXPECT_LT(prev, 0.2);
}

TEST(Cutoff, ConstantStabilizes) {
  const std::vector<double> c{0.0, 0.0, 0.0};
  const CutoffFunction a = make_cutoff(Grid::cube(1, 1.0, 17), c, 0.35, 0.8);
  const CutoffFunction b = make_cutoff(Grid::cube(1, 1.0, 33), c, 0.35, 0.8);
  EXPECT_GT(a.K_eta, 0.0);
  EXPECT_LT(std::abs(a.K_eta - b.K_eta), 0.03 * b.K_eta);
  EXPECT_GE(b.K_eta, b.sup_X * b.sup_X);
}

TEST(Cutoff, Errors) {
  const GridPtr g = Grid::cube(1, 1.0, 9);
  const std::vector<double> c{0.0, 0.0, 0.0};
  EXPECT_THROW(make_cutoff(g, c, 0.5, 0.4), std::invalid_argument);
  EXPECT_THROW(make_cutoff(g, c, 0.5, 1.5), std::invalid_argument);
  EXPECT_THROW(make_cutoff(g, std::vector<double>{0.0, 0.0}, 0.2, 0.4), std::invalid_argument);
}
