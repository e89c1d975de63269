#include "solab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "solab/quadrature.hpp"

namespace solab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec radial_A(const RadialProfile& rp, const Vec& z) {
  const double t = z.norm();
  if (t == 0.0) return Vec::Zero(z.size());
  return (rp.phi(t) / t) * z;
}

Mat radial_DA(const RadialProfile& rp, const Vec& z, double at_zero) {
  const auto m = z.size();
  const double t = z.norm();
  if (t == 0.0) {
    if (!std::isfinite(at_zero)) throw std::domain_error("DA is singular at z = 0");
    return at_zero * Mat::Identity(m, m);
  }
  const double tang = rp.phi(t) / t;
  const Vec zh = z / t;
  return tang * Mat::Identity(m, m) + (rp.dphi(t) - tang) * zh * zh.transpose();
}

}  // namespace

Vec prototype_A(const OrliczTriple& triple, const Vec& z) {
  const double t = z.norm();
  if (t == 0.0) return Vec::Zero(z.size());
  return (triple.g(t) / t) * z;
}

Mat prototype_DA(const OrliczTriple& triple, const Vec& z) {
  const double t = z.norm();
  if (t == 0.0) throw std::domain_error("prototype_DA: z = 0 is degenerate");
  const double F = triple.F(t);
  const Vec zh = z / t;
  const auto m = z.size();
  return F * Mat::Identity(m, m) + (triple.structure().derivative(t) - F) * zh * zh.transpose();
}

OperatorSpec prototype_operator(const OrliczTriple& triple) {
  auto tr = std::make_shared<OrliczTriple>(triple);
  OperatorSpec op;
  op.A = [tr](const Vec& z) { return prototype_A(*tr, z); };
  op.DA = [tr](const Vec& z) { return prototype_DA(*tr, z); };
  op.F = [tr](double t) { return tr->F(t); };
  op.L = std::max(1.0, triple.g0());
  op.lambda = std::min(1.0, triple.delta());
  op.source = OperatorSpec::Source::Prototype;
  op.radial = RadialProfile{[tr](double t) { return tr->g(t); },
                            [tr](double t) { return tr->structure().derivative(t); },
                            [tr](double t) { return tr->G(t); }};
  op.label = triple.structure().label;
  return op;
}

StructureMargins structure_margins(const OperatorSpec& op, const Vec& z, const Vec& xi) {
  const double t = z.norm();
  if (t == 0.0 || xi.norm() == 0.0) throw std::invalid_argument("structure_margins: z, xi must be nonzero");
  const double F = op.F(t);
  const double quad = xi.dot(op.DA(z) * xi);
  const double xi2 = xi.squaredNorm();
  StructureMargins m;
  m.lower = quad - op.lambda * F * xi2;
  m.upper = op.L * F * xi2 - quad;
  m.growth = op.L * t * F - op.A(z).norm();
  return m;
}

MonotonicityResult monotonicity_gap(const OperatorSpec& op, const OrliczTriple& triple,
                                    const Vec& z, const Vec& w) {
  if (z.size() != w.size()) throw std::invalid_argument("monotonicity_gap: dimension mismatch");
  MonotonicityResult r;
  const Vec d = z - w;
  const double dn = d.norm();
  r.gap = (op.A(z) - op.A(w)).dot(d);
  r.near = dn <= 2.0 * z.norm();
  if (dn == 0.0) {
    r.fitted_lower = kNaN;
    return r;
  }
  const double F = r.near ? triple.F(z.norm()) : triple.F(dn);
  r.fitted_lower = r.gap / (dn * dn * F);
  r.defined = std::isfinite(r.fitted_lower);
  return r;
}

double ellipticity_margin(const OperatorSpec& op, const OrliczTriple& triple, const Vec& z,
                          double c_fit) {
  return op.A(z).dot(z) - c_fit * triple.G(z.norm());
}

PLaplaceGap p_laplace_gap(double p, const Vec& z, const Vec& w) {
  if (!(p > 1.0)) throw std::invalid_argument("p_laplace_gap: need p > 1");
  if (z.size() != w.size()) throw std::invalid_argument("p_laplace_gap: dimension mismatch");
  const Vec d = z - w;
  const double dn = d.norm();
  if (dn == 0.0) throw std::invalid_argument("p_laplace_gap: z == w");
  auto flux = [p](const Vec& v) -> Vec {
    const double n = v.norm();
    if (n == 0.0) return Vec::Zero(v.size());
    return std::pow(n, p - 2.0) * v;
  };
  PLaplaceGap r;
  r.gap = (flux(z) - flux(w)).dot(d);
  if (p < 2.0) {
    r.ratio = r.gap / (dn * dn * std::pow(z.norm() + w.norm(), p - 2.0));
  } else {
    r.ratio = r.gap / std::pow(dn, p);
  }
  return r;
}

double ramp_eta(double t, double eps) {
  if (t <= eps) return 1.0;
  if (t >= 2.0 * eps) return 0.0;
  return 2.0 - t / eps;
}

double ramp_eta_derivative(double t, double eps) {
  return (t > eps && t < 2.0 * eps) ? -1.0 / eps : 0.0;
}

namespace {

struct RegularizedData {
  RadialProfile base;
  double eps;
  double G_eps_2eps = 0.0;
  double G_base_2eps = 0.0;

  double F(double s) const { return base.phi(s) / s; }
  double dF(double s) const { return (base.dphi(s) * s - base.phi(s)) / (s * s); }
  double F_eps(double t) const { return F(std::min(t + eps, 1.0 / eps)); }
  double dF_eps(double t) const { return t + eps < 1.0 / eps ? dF(t + eps) : 0.0; }

  double phi(double t) const {
    const double eta = ramp_eta(t, eps);
    double v = eta * t * F_eps(t);
    if (eta < 1.0) v += (1.0 - eta) * base.phi(t);
    return v;
  }

  double dphi(double t) const {
    const double eta = ramp_eta(t, eps);
    const double deta = ramp_eta_derivative(t, eps);
    double v = eta * (F_eps(t) + t * dF_eps(t));
    if (eta < 1.0) v += (1.0 - eta) * base.dphi(t) + deta * (t * F_eps(t) - base.phi(t));
    return v;
  }

  double small_potential(double t) const {
    auto f = [this](double s) { return phi(s); };
    double v = quad::gauss_legendre(f, 0.0, std::min(t, eps));
    if (t > eps) v += quad::gauss_legendre(f, eps, t);
    return v;
  }

  double potential(double t) const {
    if (t <= 2.0 * eps) return small_potential(t);
    return G_eps_2eps + (base.potential(t) - G_base_2eps);
  }
};

}  // namespace

RadialProfile regularized_profile(const OrliczTriple& triple, double eps) {
  auto tr = std::make_shared<OrliczTriple>(triple);
  RadialProfile base{[tr](double t) { return tr->g(t); },
                     [tr](double t) { return tr->structure().derivative(t); },
                     [tr](double t) { return tr->G(t); }};
  return regularized_profile(base, eps);
}

RadialProfile regularized_profile(const RadialProfile& base, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("regularization needs 0 < eps < 1");
  auto d = std::make_shared<RegularizedData>();
  d->base = base;
  d->eps = eps;
  d->G_eps_2eps = d->small_potential(2.0 * eps);
  d->G_base_2eps = base.potential(2.0 * eps);
  return RadialProfile{[d](double t) { return d->phi(t); }, [d](double t) { return d->dphi(t); },
                       [d](double t) { return d->potential(t); }};
}

std::pair<OperatorSpec, RegularizationParams> regularize(const OperatorSpec& op,
                                                         const OrliczTriple& triple, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("regularization needs 0 < eps < 1");
  if (!op.radial) throw std::invalid_argument("regularize: operator has no radial profile");
  const RadialProfile rp = regularized_profile(*op.radial, eps);
  auto Fe = [F = op.F, eps](double t) { return F(std::min(t + eps, 1.0 / eps)); };

  RegularizationParams params;
  params.eps = eps;
  params.m1 = triple.F(eps);
  params.m2 = triple.F(1.0 / eps);

  // Both eigenvalues of DA_eps are phi/t and phi'; fit the bracket in units of F_eps
  // over 0 < |z| <= 1/eps, the range where the cap in F_eps is inactive.
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  auto visit = [&](double t) {
    const double fe = Fe(t);
    const double r1 = rp.phi(t) / (t * fe);
    const double r2 = rp.dphi(t) / fe;
    lo = std::min({lo, r1, r2});
    hi = std::max({hi, r1, r2});
  };
  const double a = std::log(1e-3 * eps);
  const double b = std::log(1.0 / eps - eps);
  for (int i = 0; i <= 4000; ++i) visit(std::exp(a + (b - a) * i / 4000.0));
  for (int i = 1; i < 400; ++i) visit(eps * (1.0 + i / 400.0));
  params.L_tilde = hi;
  params.lambda_tilde = lo;

  OperatorSpec out;
  out.A = [rp](const Vec& z) { return radial_A(rp, z); };
  const double at_zero = Fe(0.0);
  out.DA = [rp, at_zero](const Vec& z) { return radial_DA(rp, z, at_zero); };
  out.F = Fe;
  out.L = hi;
  out.lambda = lo;
  out.source = OperatorSpec::Source::Regularized;
  out.radial = rp;
  out.label = op.label + "@eps=" + std::to_string(eps);
  return {out, params};
}

}  // namespace solab
