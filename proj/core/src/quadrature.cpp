#include "solab/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace solab::quad {

Result adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                unsigned max_depth) {
  Result r;
  if (a == b) {
    r.ok = true;
    return r;
  }
  double l1 = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol, &r.error_estimate, &l1);
  r.ok = std::isfinite(r.value) && r.error_estimate <= std::max(rel_tol * l1, 1e-300) * 1e3;
  return r;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

}  // namespace solab::quad
