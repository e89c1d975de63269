#include "solab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "solab/quadrature.hpp"

namespace solab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool le_rel(double a, double b, double rel_tol) {
  return a <= b + rel_tol * std::max(std::abs(a), std::abs(b)) + 1e-300;
}

double integrate_or_throw(const RealFn& f, double t, const char* what) {
  if (t < 0.0 || std::isnan(t)) throw std::invalid_argument(std::string(what) + ": t must be >= 0");
  if (t == 0.0) return 0.0;
  const auto r = quad::adaptive(f, 0.0, t);
  if (!std::isfinite(r.value)) throw std::domain_error(std::string(what) + ": non-finite integrand");
  return r.value;
}

}  // namespace

double StructureFunction::derivative(double t) const {
  if (deriv) return deriv(t);
  double h = 1e-6 * std::max(t, 1.0);
  if (h >= 0.5 * t) h = 1e-6 * t;
  return (eval(t + h) - eval(t - h)) / (2.0 * h);
}

OrliczTriple::OrliczTriple(StructureFunction g) : g_(std::move(g)) {
  if (!g_.eval) throw std::invalid_argument("structure function has no evaluator");
  if (!(g_.delta > 0.0) || g_.g0 < g_.delta) {
    throw std::invalid_argument("structure function needs g0 >= delta > 0");
  }
  if (g_.g0 < 1.0) {
    f_zero_ = kInf;
    f_zero_singular_ = true;
  } else if (g_.delta > 1.0) {
    f_zero_ = 0.0;
  } else {
    const double tau = 1e-10;
    f_zero_ = g_.eval(tau) / tau;
    f_zero_singular_ = !std::isfinite(f_zero_) || f_zero_ > 1e8;
    if (f_zero_singular_) f_zero_ = kInf;
  }
}

double OrliczTriple::G(double t) const {
  if (g_.antiderivative) {
    if (t < 0.0) throw std::invalid_argument("G: t must be >= 0");
    return g_.antiderivative(t);
  }
  return integrate_or_throw(g_.eval, t, "G");
}

double OrliczTriple::F(double t) const {
  if (t < 0.0) throw std::invalid_argument("F: t must be >= 0");
  if (t == 0.0) return f_zero_;
  return g_.eval(t) / t;
}

double big_G(const OrliczTriple& triple, double t) { return triple.G(t); }

ExponentEstimate verify_exponents(const StructureFunction& g, std::span<const double> t_samples,
                                  double tol) {
  if (t_samples.empty()) throw std::invalid_argument("verify_exponents: no samples");
  ExponentEstimate est;
  est.delta_est = kInf;
  est.g0_est = -kInf;
  for (double t : t_samples) {
    if (!(t > 0.0)) throw std::invalid_argument("verify_exponents: samples must be positive");
    const double gt = g.eval(t);
    if (!(gt > 0.0)) throw std::domain_error("verify_exponents: g vanishes at a positive sample");
    const double q = t * g.derivative(t) / gt;
    est.delta_est = std::min(est.delta_est, q);
    est.g0_est = std::max(est.g0_est, q);
  }
  est.ok = est.delta_est >= g.delta - tol && est.g0_est <= g.g0 + tol;
  return est;
}

YoungFunction::YoungFunction(RealFn integrand, RealFn closed_form, std::string label,
                             bool n_function, std::optional<double> doubling_constant)
    : psi_(std::move(integrand)),
      closed_(std::move(closed_form)),
      label_(std::move(label)),
      n_function_(n_function),
      doubling_(doubling_constant) {
  if (!psi_) throw std::invalid_argument("Young function needs an integrand");
}

double YoungFunction::operator()(double t) const {
  if (closed_) {
    if (t < 0.0) throw std::invalid_argument("Young function: t must be >= 0");
    return closed_(t);
  }
  return integrate_or_throw(psi_, t, "Young function");
}

YoungFunction young_from_structure(const StructureFunction& g) {
  auto triple = std::make_shared<OrliczTriple>(g);
  RealFn closed = [triple](double t) { return triple->G(t); };
  return YoungFunction(g.eval, closed, "G[" + g.label + "]", true,
                       std::pow(2.0, 1.0 + g.g0));
}

InverseResult generalized_inverse(const RealFn& psi, double t, double abs_tol) {
  if (t < 0.0 || std::isnan(t)) throw std::invalid_argument("generalized_inverse: t must be >= 0");
  if (psi(0.0) > t) return {0.0, false};
  double lo = 0.0;
  double hi = 1.0;
  constexpr double kLimit = 1e300;
  while (!(psi(hi) > t)) {
    lo = hi;
    if (hi >= kLimit) return {hi, true};
    hi *= 2.0;
  }
  // psi(lo) <= t < psi(hi)
  while (hi - lo > std::max(abs_tol, 4.0 * std::numeric_limits<double>::epsilon() * hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (psi(mid) > t) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

double conjugate(const YoungFunction& psi, double s) {
  if (s < 0.0 || std::isnan(s)) throw std::invalid_argument("conjugate: s must be >= 0");
  if (s == 0.0) return 0.0;
  const RealFn& fn = psi.integrand_fn();
  RealFn inv = [&fn](double v) { return generalized_inverse(fn, v).value; };
  const auto r = quad::adaptive(inv, 0.0, s, 1e-12, 12);
  if (!std::isfinite(r.value)) throw std::domain_error("conjugate: quadrature failed");
  return r.value;
}

YoungFunction conjugate_function(const YoungFunction& psi) {
  RealFn fn = psi.integrand_fn();
  RealFn inv = [fn](double v) { return generalized_inverse(fn, v).value; };
  RealFn closed = [inv](double s) {
    if (s == 0.0) return 0.0;
    const auto r = quad::adaptive(inv, 0.0, s, 1e-12, 12);
    if (!std::isfinite(r.value)) throw std::domain_error("conjugate: quadrature failed");
    return r.value;
  };
  return YoungFunction(inv, closed, psi.label() + "*", psi.is_N_function(), std::nullopt);
}

double young_gap(const YoungFunction& psi, double s, double t) {
  if (s < 0.0 || t < 0.0) throw std::invalid_argument("young_gap: arguments must be >= 0");
  return psi(s) + conjugate(psi, t) - s * t;
}

double comp_prop_margin(const YoungFunction& psi, double t) {
  if (!psi.is_N_function()) throw std::invalid_argument("comp_prop_margin: not an N-function");
  if (!(t > 0.0)) throw std::invalid_argument("comp_prop_margin: t must be positive");
  const double v = psi(t);
  return v - conjugate(psi, v / t);
}

double doubling_constant(const RealFn& f, std::span<const double> t_samples) {
  if (t_samples.empty()) throw std::invalid_argument("doubling_constant: no samples");
  double c = 0.0;
  for (double t : t_samples) {
    if (!(t > 0.0)) throw std::invalid_argument("doubling_constant: samples must be positive");
    const double ft = f(t);
    if (!(ft > 0.0)) throw std::domain_error("doubling_constant: function vanishes at a sample");
    c = std::max(c, f(2.0 * t) / ft);
  }
  return c;
}

double doubling_constant(const YoungFunction& psi, std::span<const double> t_samples) {
  return doubling_constant([&psi](double t) { return psi(t); }, t_samples);
}

double doubling_constant(const StructureFunction& g, std::span<const double> t_samples) {
  return doubling_constant(g.eval, t_samples);
}

void DiscreteMeasureSpace::validate() const {
  if (values.size() != weights.size()) throw std::invalid_argument("values/weights size mismatch");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) throw std::invalid_argument("non-finite sample value");
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) {
      throw std::invalid_argument("weights must be finite and nonnegative");
    }
  }
}

namespace {

double modular(const DiscreteMeasureSpace& space, const YoungFunction& psi, double k) {
  double acc = 0.0;
  for (std::size_t i = 0; i < space.values.size(); ++i) {
    if (space.weights[i] == 0.0 || space.values[i] == 0.0) continue;
    acc += space.weights[i] * psi(std::abs(space.values[i]) / k);
    if (!std::isfinite(acc)) return kInf;
  }
  return acc;
}

double luxemburg_unchecked(const DiscreteMeasureSpace& space, const YoungFunction& psi) {
  space.validate();
  double umax = 0.0;
  for (std::size_t i = 0; i < space.values.size(); ++i) {
    if (space.weights[i] > 0.0) umax = std::max(umax, std::abs(space.values[i]));
  }
  if (umax == 0.0) return 0.0;
  double lo = umax;
  double hi = umax;
  while (modular(space, psi, hi) > 1.0) hi *= 2.0;
  while (lo > 1e-300 && !(modular(space, psi, lo) > 1.0)) lo *= 0.5;
  while ((hi - lo) > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (modular(space, psi, mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

double luxemburg_norm(const DiscreteMeasureSpace& space, const YoungFunction& psi) {
  if (!psi.is_doubling()) throw std::invalid_argument("luxemburg_norm: Young function must be doubling");
  return luxemburg_unchecked(space, psi);
}

double holder_margin(const DiscreteMeasureSpace& u, const DiscreteMeasureSpace& v,
                     const YoungFunction& psi) {
  u.validate();
  v.validate();
  if (u.weights != v.weights) throw std::invalid_argument("holder_margin: spaces must share weights");
  const YoungFunction star = conjugate_function(psi);
  double pairing = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    pairing += u.weights[k] * std::abs(u.values[k] * v.values[k]);
  }
  const double nv = luxemburg_unchecked(v, star);
  if (nv == 0.0) return -pairing;
  return 2.0 * luxemburg_unchecked(u, psi) * nv - pairing;
}

LemmaGGReport lemma_gG_audit(const OrliczTriple& triple, double t, double s, double rel_tol) {
  if (t < 0.0 || s < 0.0) throw std::invalid_argument("lemma_gG_audit: arguments must be >= 0");
  if (s > t) std::swap(s, t);
  const double g0 = triple.g0();
  const double gt = triple.g(t);
  const double gs = triple.g(s);
  const double Gt = triple.G(t);
  const double Gs = triple.G(s);

  LemmaGGReport rep;
  rep.convexity = le_rel(triple.G(0.5 * (s + t)), 0.5 * (Gs + Gt), rel_tol);

  auto two_sided = [&](double x, double gx, double Gx) {
    return le_rel(x * gx / (1.0 + g0), Gx, rel_tol) && le_rel(Gx, x * gx, rel_tol);
  };
  rep.two_sided_bound = two_sided(t, gt, Gt) && two_sided(s, gs, Gs);

  rep.g_growth = le_rel(gs, gt, rel_tol);
  if (s > 0.0) rep.g_growth = rep.g_growth && le_rel(gt, std::pow(t / s, g0) * gs, rel_tol);

  if (s > 0.0) {
    rep.quotient_monotone = le_rel(Gs / s, Gt / t, rel_tol);
  } else {
    rep.quotient_monotone = t == 0.0 || Gt >= 0.0;
  }

  rep.cross_inequality = le_rel(t * gs, t * gt + s * gs, rel_tol);
  return rep;
}

}  // namespace solab
