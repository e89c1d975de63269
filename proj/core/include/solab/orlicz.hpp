#pragma once

// Structure functions g, the induced pair (G, F), Young functions with their
// generalized inverses and conjugates, Luxemburg norms, and the elementary
// inequalities relating them, each exposed as a numeric predicate or margin.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace solab {

using RealFn = std::function<double(double)>;

/// Growth law g of the operator: g(0) = 0, delta <= t g'(t)/g(t) <= g0 for t > 0.
struct StructureFunction {
  RealFn eval;
  RealFn deriv;           ///< may be empty; central differences are used instead
  double delta = 1.0;     ///< declared lower exponent
  double g0 = 1.0;        ///< declared upper exponent
  std::string label;
  RealFn antiderivative;  ///< closed-form G if known, else empty
  bool exponents_estimated = false;  ///< declared bounds come from dense sampling

  double derivative(double t) const;
};

/// g together with G(t) = int_0^t g and F(t) = g(t)/t.
class OrliczTriple {
 public:
  explicit OrliczTriple(StructureFunction g);

  const StructureFunction& structure() const { return g_; }
  double g(double t) const { return g_.eval(t); }
  double G(double t) const;
  /// F(t) = g(t)/t for t > 0; at t = 0 returns the stored limit (+inf if singular).
  double F(double t) const;
  double F_at_zero() const { return f_zero_; }
  bool F_singular_at_zero() const { return f_zero_singular_; }
  double delta() const { return g_.delta; }
  double g0() const { return g_.g0; }

 private:
  StructureFunction g_;
  double f_zero_ = 0.0;
  bool f_zero_singular_ = false;
};

/// Adaptive quadrature of g unless a closed form is registered.
double big_G(const OrliczTriple& triple, double t);

struct ExponentEstimate {
  double delta_est = 0.0;
  double g0_est = 0.0;
  bool ok = false;
};

/// min / max of t g'(t)/g(t) over the samples, compared against the declared bounds.
ExponentEstimate verify_exponents(const StructureFunction& g, std::span<const double> t_samples,
                                  double tol = 1e-6);

/// Psi(t) = int_0^t psi for a nondecreasing, left-continuous psi with psi(0) = 0.
class YoungFunction {
 public:
  YoungFunction(RealFn integrand, RealFn closed_form, std::string label, bool n_function,
                std::optional<double> doubling_constant);

  double operator()(double t) const;
  double integrand(double s) const { return psi_(s); }
  const RealFn& integrand_fn() const { return psi_; }
  bool is_N_function() const { return n_function_; }
  bool is_doubling() const { return doubling_.has_value(); }
  std::optional<double> doubling_constant() const { return doubling_; }
  const std::string& label() const { return label_; }

 private:
  RealFn psi_;
  RealFn closed_;
  std::string label_;
  bool n_function_;
  std::optional<double> doubling_;
};

/// Psi = G, psi = g; doubling with C2 = 2^{1+g0}.
YoungFunction young_from_structure(const StructureFunction& g);

struct InverseResult {
  double value = 0.0;
  bool saturated = false;  ///< superlevel set empty inside the search bracket
};

/// inf{ s >= 0 : psi(s) > t } by geometric bracketing and bisection.
InverseResult generalized_inverse(const RealFn& psi, double t, double abs_tol = 1e-13);

/// Psi*(s) = int_0^s psi^{-1}.
double conjugate(const YoungFunction& psi, double s);

/// The conjugate as a Young function of its own (integrand psi^{-1}), so Psi** is computable.
YoungFunction conjugate_function(const YoungFunction& psi);

/// Psi(s) + Psi*(t) - s t; nonnegative, zero along t = psi(s).
double young_gap(const YoungFunction& psi, double s, double t);

/// Psi(t) - Psi*(Psi(t)/t); requires an N-function.
double comp_prop_margin(const YoungFunction& psi, double t);

/// max over samples of f(2t)/f(t).
double doubling_constant(const RealFn& f, std::span<const double> t_samples);
double doubling_constant(const YoungFunction& psi, std::span<const double> t_samples);
double doubling_constant(const StructureFunction& g, std::span<const double> t_samples);

/// Sample values with nonnegative masses.
struct DiscreteMeasureSpace {
  std::vector<double> values;
  std::vector<double> weights;

  void validate() const;
};

/// inf{ k > 0 : sum w |u|/k ... <= 1 }; requires a doubling Psi.
double luxemburg_norm(const DiscreteMeasureSpace& space, const YoungFunction& psi);

/// 2 ||u||_Psi ||v||_Psi* - sum w |u v|; u and v must share weights.
double holder_margin(const DiscreteMeasureSpace& u, const DiscreteMeasureSpace& v,
                     const YoungFunction& psi);

/// The five properties of g and G (convexity, two-sided bound, growth of g,
/// monotone G(t)/t, and the cross inequality) at one sample pair.
struct LemmaGGReport {
  bool convexity = false;
  bool two_sided_bound = false;
  bool g_growth = false;
  bool quotient_monotone = false;
  bool cross_inequality = false;

  bool all() const {
    return convexity && two_sided_bound && g_growth && quotient_monotone && cross_inequality;
  }
};

LemmaGGReport lemma_gG_audit(const OrliczTriple& triple, double t, double s,
                             double rel_tol = 1e-9);

}  // namespace solab
