#pragma once

#include <functional>

namespace solab::quad {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  bool ok = false;  ///< finite value and estimate within the requested tolerance
};

/// Adaptive 15-point Gauss-Kronrod on [a, b].
Result adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol = 1e-12, unsigned max_depth = 15);

/// Fixed 20-point Gauss-Legendre; intended for short panels of analytic integrands.
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

}  // namespace solab::quad
