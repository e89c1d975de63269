#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "solab/catalog.hpp"
#include "solab/operator.hpp"

using namespace solab;

namespace {

Vec random_vec(std::mt19937_64& rng, int m, double scale) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> lu(std::log(1e-2), std::log(1e2));
  Vec z(m);
  for (int i = 0; i < m; ++i) z[i] = n(rng);
  return z * (scale * std::exp(lu(rng)) / z.norm());
}

}  // namespace

TEST(Prototype, HandExample) {
  const OrliczTriple tr(make_structure("power:p=3"));
  Vec z(2);
  z << 3.0, 4.0;
  const Vec a = prototype_A(tr, z);
  EXPECT_NEAR(a[0], 15.0, 1e-12);
  EXPECT_NEAR(a[1], 20.0, 1e-12);
  EXPECT_EQ(prototype_A(tr, Vec::Zero(2)).norm(), 0.0);
  EXPECT_THROW(prototype_DA(tr, Vec::Zero(2)), std::domain_error);
  const OperatorSpec op = prototype_operator(tr);
  EXPECT_EQ(op.L, 2.0);
  EXPECT_EQ(op.lambda, 1.0);
  const OperatorSpec sub = prototype_operator(OrliczTriple(make_structure("power:p=1.5")));
  EXPECT_EQ(sub.L, 1.0);
  EXPECT_EQ(sub.lambda, 0.5);
}

TEST(Prototype, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (const auto& label : structure_catalog()) {
    const OrliczTriple tr(make_structure(label));
    const OperatorSpec op = prototype_operator(tr);
    for (int m : {2, 4, 6}) {
      for (int k = 0; k < 10; ++k) {
        const Vec z = random_vec(rng, m, 1.0);
        const Mat J = op.DA(z);
        const Mat ref = oracle::fd_jacobian(op.A, z, 1e-6);
        EXPECT_LE((J - ref).norm(), 1e-5 * (1.0 + J.norm())) << label;
        EXPECT_LE((J - J.transpose()).norm(), 1e-12 * J.norm()) << label;
      }
    }
  }
}

TEST(Prototype, StructureMarginsNonnegative) {
  std::mt19937_64 rng(12);
  for (const auto& label : structure_catalog()) {
    const OrliczTriple tr(make_structure(label));
    const OperatorSpec op = prototype_operator(tr);
    for (int k = 0; k < 200; ++k) {
      const Vec z = random_vec(rng, 4, 1.0), xi = random_vec(rng, 4, 1.0);
      const StructureMargins s = structure_margins(op, z, xi);
      const double scale = op.F(z.norm()) * xi.squaredNorm();
      EXPECT_GE(s.lower, -1e-6 * scale) << label;
      EXPECT_GE(s.upper, -1e-6 * scale) << label;
      EXPECT_GE(s.growth, -1e-12 * z.norm() * op.F(z.norm())) << label;
    }
  }
  const OperatorSpec op = prototype_operator(OrliczTriple(make_structure("power:p=2")));
  EXPECT_THROW(structure_margins(op, Vec::Zero(2), Vec::Ones(2)), std::invalid_argument);
}

TEST(Prototype, LinearOperatorMarginsAreExact) {
  const OperatorSpec op = prototype_operator(OrliczTriple(make_structure("power:p=2")));
  Vec z(2), xi(2);
  z << 0.3, -1.2;
  xi << 2.0, 1.0;
  const StructureMargins s = structure_margins(op, z, xi);
  EXPECT_NEAR(s.lower, 0.0, 1e-14);
  EXPECT_NEAR(s.upper, 0.0, 1e-14);
  EXPECT_NEAR(s.growth, 0.0, 1e-14);
}

TEST(Prototype, MonotoneAndElliptic) {
  std::mt19937_64 rng(13);
  for (const auto& label : structure_catalog()) {
    const OrliczTriple tr(make_structure(label));
    const OperatorSpec op = prototype_operator(tr);
    for (int k = 0; k < 200; ++k) {
      const Vec z = random_vec(rng, 2, 1.0), w = random_vec(rng, 2, 1.0);
      const MonotonicityResult r = monotonicity_gap(op, tr, z, w);
      EXPECT_GE(r.gap, 0.0) << label;
      EXPECT_TRUE(r.defined);
      EXPECT_GT(r.fitted_lower, 0.0) << label;
      EXPECT_GE(ellipticity_margin(op, tr, z), -1e-12 * tr.G(z.norm())) << label;
    }
  }
}

TEST(Prototype, MonotonicityDegenerateAndNear) {
  const OrliczTriple tr(make_structure("power:p=2"));
  const OperatorSpec op = prototype_operator(tr);
  Vec z(2), w(2);
  z << 1.0, 0.0;
  w << 0.5, 0.0;
  const MonotonicityResult r = monotonicity_gap(op, tr, z, w);
  EXPECT_TRUE(r.near);
  EXPECT_NEAR(r.gap, 0.25, 1e-15);
  EXPECT_NEAR(r.fitted_lower, 1.0, 1e-15);
  const MonotonicityResult same = monotonicity_gap(op, tr, z, z);
  EXPECT_FALSE(same.defined);
  EXPECT_TRUE(std::isnan(same.fitted_lower));
  EXPECT_THROW(monotonicity_gap(op, tr, z, Vec::Zero(3)), std::invalid_argument);
}

TEST(PLaplace, ClassicalLowerBounds) {
  std::mt19937_64 rng(14);
  Vec z(2), w(2);
  z << 1.0, 2.0;
  w << -0.5, 0.25;
  EXPECT_NEAR(p_laplace_gap(2.0, z, w).ratio, 1.0, 1e-14);
  for (double p : {1.2, 1.5, 3.0, 4.0, 6.0}) {
    const double bound = p >= 2.0 ? std::pow(2.0, 2.0 - p) : p - 1.0;
    for (int k = 0; k < 500; ++k) {
      const Vec a = random_vec(rng, 4, 1.0), b = random_vec(rng, 4, 1.0);
      const PLaplaceGap r = p_laplace_gap(p, a, b);
      EXPECT_GE(r.gap, 0.0);
      EXPECT_GE(r.ratio, bound * (1.0 - 1e-12)) << p;
    }
  }
  EXPECT_THROW(p_laplace_gap(1.0, z, w), std::invalid_argument);
  EXPECT_THROW(p_laplace_gap(3.0, z, z), std::invalid_argument);
}

TEST(Regularize, Ramp) {
  EXPECT_EQ(ramp_eta(0.0, 0.1), 1.0);
  EXPECT_EQ(ramp_eta(0.1, 0.1), 1.0);
  EXPECT_NEAR(ramp_eta(0.15, 0.1), 0.5, 1e-15);
  EXPECT_EQ(ramp_eta(0.2, 0.1), 0.0);
  EXPECT_NEAR(ramp_eta_derivative(0.15, 0.1), -10.0, 1e-12);
  EXPECT_EQ(ramp_eta_derivative(0.05, 0.1), 0.0);
}

TEST(Regularize, LinearIsFixed) {
  const OrliczTriple tr(make_structure("power:p=2"));
  const auto [op, params] = regularize(prototype_operator(tr), tr, 0.01);
  EXPECT_NEAR(params.m1, 1.0, 1e-14);
  EXPECT_NEAR(params.m2, 1.0, 1e-14);
  EXPECT_NEAR(params.L_tilde, 1.0, 1e-12);
  EXPECT_NEAR(params.lambda_tilde, 1.0, 1e-12);
  Vec z(2);
  z << 0.003, -0.004;
  EXPECT_NEAR((op.A(z) - z).norm(), 0.0, 1e-15);
  EXPECT_NEAR((op.DA(Vec::Zero(2)) - Mat::Identity(2, 2)).norm(), 0.0, 1e-14);
}

TEST(Regularize, QuadraticGrowth) {
  const OrliczTriple tr(make_structure("power:p=3"));
  const double eps = 0.05;
  const auto [op, params] = regularize(prototype_operator(tr), tr, eps);
  EXPECT_NEAR(params.m1, eps, 1e-15);
  EXPECT_NEAR(params.m2, 1.0 / eps, 1e-12);
  EXPECT_GT(params.lambda_tilde, 0.0);
  EXPECT_LT(params.L_tilde, 4.0);
  // Below eps the flux is (|z| + eps) z; past 2 eps it is the original.
  Vec z(2);
  z << 0.03, 0.0;
  EXPECT_NEAR(op.A(z)[0], (0.03 + eps) * 0.03, 1e-15);
  z << 0.5, 0.2;
  EXPECT_NEAR((op.A(z) - prototype_A(tr, z)).norm(), 0.0, 1e-14);
  EXPECT_NEAR((op.DA(Vec::Zero(2)) - eps * Mat::Identity(2, 2)).norm(), 0.0, 1e-15);
}

TEST(Regularize, JacobianAndPotentialConsistent) {
  std::mt19937_64 rng(15);
  for (const char* label : {"power:p=1.5", "power:p=3", "loglin", "osc:a=2,b=0.5"}) {
    const OrliczTriple tr(make_structure(label));
    const double eps = 0.02;
    const auto [op, params] = regularize(prototype_operator(tr), tr, eps);
    const RadialProfile rp = *op.radial;
    for (int k = 0; k < 30; ++k) {
      Vec z = random_vec(rng, 2, 1.0);
      if (k % 3 == 0) z *= 0.03 / z.norm() * (0.5 + 0.05 * k);  // inside the ramp region
      const double t = z.norm();
      if (std::abs(t - eps) < 1e-4 || std::abs(t - 2 * eps) < 1e-4) continue;
      const Mat J = op.DA(z);
      const Mat ref = oracle::fd_jacobian(op.A, z, 1e-7);
      EXPECT_LE((J - ref).norm(), 1e-5 * (1.0 + J.norm())) << label << " t=" << t;
      const double h = 1e-4 * t;
      EXPECT_NEAR((rp.potential(t + h) - rp.potential(t - h)) / (2 * h), rp.phi(t), 1e-6 * (1 + rp.phi(t)))
          << label << " t=" << t;
    }
  }
}

TEST(Regularize, SupDifferenceShrinks) {
  const OrliczTriple tr(make_structure("power:p=3"));
  double prev = INFINITY;
  for (double eps : {0.1, 0.03, 0.01, 0.003}) {
    const RadialProfile rp = regularized_profile(tr, eps);
    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = 3.0 * i / 2000.0;
      sup = std::max(sup, std::abs(rp.phi(t) - tr.g(t)));
    }
    EXPECT_LT(sup, prev);
    EXPECT_LE(sup, 4.0 * eps * eps + 1e-15);
    prev = sup;
  }
}

TEST(Regularize, Errors) {
  const OrliczTriple tr(make_structure("power:p=3"));
  EXPECT_THROW(regularize(prototype_operator(tr), tr, 0.0), std::invalid_argument);
  EXPECT_THROW(regularize(prototype_operator(tr), tr, 1.0), std::invalid_argument);
  OperatorSpec custom = prototype_operator(tr);
  custom.radial.reset();
  EXPECT_THROW(regularize(custom, tr, 0.1), std::invalid_argument);
  EXPECT_THROW(regularized_profile(tr, -0.1), std::invalid_argument);
}
