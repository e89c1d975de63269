#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "solab/heisenberg.hpp"
#include "solab/solver.hpp"

namespace solab {

namespace {

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s == 0.0) throw std::domain_error("degenerate normal");
  for (double& x : v) x /= s;
}

// Vertical coordinate of center^{-1} y and its Euclidean gradient in y.
double translated_t(std::span<const double> y, std::span<const double> c, std::vector<double>* grad) {
  const std::size_t n = (y.size() - 1) / 2;
  double omega = 0.0;
  for (std::size_t i = 0; i < n; ++i) omega += -c[i] * y[n + i] + c[n + i] * y[i];
  if (grad) {
    grad->assign(y.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      (*grad)[i] = 0.5 * c[n + i];
      (*grad)[n + i] = -0.5 * c[i];
    }
    grad->back() = 1.0;
  }
  return y.back() - c.back() + 0.5 * omega;
}

}  // namespace

std::vector<double> ConvexDomain::inward_normal(std::span<const double> y) const {
  std::vector<double> b(y.size(), 0.0);
  switch (kind) {
    case Kind::EuclideanBall:
      for (std::size_t i = 0; i < y.size(); ++i) b[i] = center[i] - y[i];
      break;
    case Kind::HalfSpace:
      b = normal;
      break;
    case Kind::NormBall: {
      // rho^2 = |x - c_x|^2 + |t'|; on the edge t' = 0 the t-part of the subgradient is dropped.
      std::vector<double> dt;
      const double tp = translated_t(y, center, &dt);
      const double edge_tol = 1e-12 * radius * radius;
      const double sgn = std::abs(tp) <= edge_tol ? 0.0 : (tp > 0.0 ? 1.0 : -1.0);
      for (std::size_t i = 0; i + 1 < y.size(); ++i) b[i] = -(2.0 * (y[i] - center[i]) + sgn * dt[i]);
      b.back() = -sgn * dt.back();
      break;
    }
  }
  normalize(b);
  return b;
}

StrongConvexityResult strong_convexity_margin(const ConvexDomain& domain, double eps0,
                                              const std::vector<std::vector<double>>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("strong_convexity_margin: need at least two samples");
  StrongConvexityResult r;
  r.margin = std::numeric_limits<double>::infinity();
  r.best_eps0 = std::numeric_limits<double>::infinity();
  for (const auto& y : samples) {
    const std::vector<double> b = domain.inward_normal(y);
    for (const auto& x : samples) {
      double dot = 0.0, d2 = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = x[i] - y[i];
        dot += b[i] * d;
        d2 += d * d;
      }
      if (d2 == 0.0) continue;
      r.margin = std::min(r.margin, dot - eps0 * d2);
      r.best_eps0 = std::min(r.best_eps0, dot / d2);
    }
  }
  r.flagged = !(r.best_eps0 > 1e-10);
  return r;
}

std::vector<std::vector<double>> boundary_samples(const ConvexDomain& domain, std::size_t count,
                                                  unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t d = domain.center.size();
  if (d < 3 || d % 2 == 0) throw std::invalid_argument("boundary_samples: center needs 2n+1 coordinates");
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> y(d);
    switch (domain.kind) {
      case ConvexDomain::Kind::EuclideanBall: {
        for (double& v : y) v = gauss(rng);
        normalize(y);
        for (std::size_t i = 0; i < d; ++i) y[i] = domain.center[i] + domain.radius * y[i];
        break;
      }
      case ConvexDomain::Kind::HalfSpace: {
        std::vector<double> v(d);
        for (double& x : v) x = 2.0 * unit(rng) - 1.0;
        double proj = 0.0;
        for (std::size_t i = 0; i < d; ++i) proj += v[i] * domain.normal[i];
        for (std::size_t i = 0; i < d; ++i) y[i] = domain.center[i] + v[i] - proj * domain.normal[i];
        break;
      }
      case ConvexDomain::Kind::NormBall: {
        // Every fifth sample sits on the t' = 0 edge.
        const std::size_t m = d - 1;
        std::vector<double> dir(m);
        for (double& v : dir) v = gauss(rng);
        normalize(dir);
        const double r2 = domain.radius * domain.radius;
        const double s = k % 5 == 0 ? 1.0 : unit(rng);
        const double rad = std::sqrt(r2 * s);
        const double tp = (unit(rng) < 0.5 ? -1.0 : 1.0) * r2 * (1.0 - s);
        std::vector<double> local(d);
        for (std::size_t i = 0; i < m; ++i) local[i] = rad * dir[i];
        local.back() = tp;
        const GroupPoint p = group_multiply(GroupPoint(domain.center), GroupPoint(local));
        y.assign(p.coords().begin(), p.coords().end());
        break;
      }
    }
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace solab
