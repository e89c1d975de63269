#pragma once

// The operator class A: R^{2n} -> R^{2n}, its Jacobian, sampled structure
// predicates, and the epsilon-regularization used by the solver.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>

#include "solab/orlicz.hpp"

namespace solab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A(z) = phi(|z|) z/|z|. Every operator built here is of this form.
struct RadialProfile {
  RealFn phi;        ///< radial flux, phi(0) = 0
  RealFn dphi;       ///< phi'
  RealFn potential;  ///< int_0^t phi, the energy density
};

struct OperatorSpec {
  enum class Source { Prototype, Regularized, Custom };

  std::function<Vec(const Vec&)> A;
  std::function<Mat(const Vec&)> DA;
  RealFn F;             ///< F entering the structure condition
  double L = 1.0;       ///< upper constant
  double lambda = 1.0;  ///< lower constant
  Source source = Source::Custom;
  std::optional<RadialProfile> radial;
  std::string label;
};

struct RegularizationParams {
  double eps = 0.0;
  double m1 = 0.0;            ///< F(eps), the limit of F_eps at 0
  double m2 = 0.0;            ///< F(1/eps), the value of F_eps past 1/eps
  double L_tilde = 0.0;       ///< fitted upper constant
  double lambda_tilde = 0.0;  ///< fitted lower constant
  std::optional<double> M_cap;
};

Vec prototype_A(const OrliczTriple& triple, const Vec& z);
/// F(|z|) I + (g'(|z|) - F(|z|)) z z^T / |z|^2; throws at z = 0.
Mat prototype_DA(const OrliczTriple& triple, const Vec& z);

/// L = max{1, g0}, lambda = min{1, delta}.
OperatorSpec prototype_operator(const OrliczTriple& triple);

struct StructureMargins {
  double lower = 0.0;   ///< <DA xi, xi> - lambda F |xi|^2
  double upper = 0.0;   ///< L F |xi|^2 - <DA xi, xi>
  double growth = 0.0;  ///< L |z| F - |A(z)|
};

StructureMargins structure_margins(const OperatorSpec& op, const Vec& z, const Vec& xi);

struct MonotonicityResult {
  double gap = 0.0;
  bool near = false;          ///< |z - w| <= 2|z|
  double fitted_lower = 0.0;  ///< NaN when z == w
  bool defined = false;
};

MonotonicityResult monotonicity_gap(const OperatorSpec& op, const OrliczTriple& triple,
                                    const Vec& z, const Vec& w);

/// <A(z), z> - c_fit G(|z|).
double ellipticity_margin(const OperatorSpec& op, const OrliczTriple& triple, const Vec& z,
                          double c_fit = 1.0);

struct PLaplaceGap {
  double gap = 0.0;
  double ratio = 0.0;
};

PLaplaceGap p_laplace_gap(double p, const Vec& z, const Vec& w);

/// Piecewise-linear ramp: 1 on [0, eps], 0 past 2 eps.
double ramp_eta(double t, double eps);
double ramp_eta_derivative(double t, double eps);

/// F_eps(t) = F(min{t + eps, 1/eps}), A_eps = eta F_eps z + (1 - eta) A.
std::pair<OperatorSpec, RegularizationParams> regularize(const OperatorSpec& op,
                                                         const OrliczTriple& triple, double eps);

/// Radial profile of the regularized prototype; the potential is cached at 2 eps.
RadialProfile regularized_profile(const OrliczTriple& triple, double eps);
RadialProfile regularized_profile(const RadialProfile& base, double eps);

}  // namespace solab
