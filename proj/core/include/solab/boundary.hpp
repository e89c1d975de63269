#pragma once

// Analytic boundary-data families with exact Euclidean gradients.
//
//   affine:c=0,a1=1,a2=0,...,at=0          c + sum a_i x_i + at t
//   oscillatory:k=2,amp=1,tcoef=0.5,shift=0
//       shift + amp sin(k x_1) cos(k x_{n+1}) + tcoef sin(k t)
//   quadratic:a=1,b=-1,ct=0,shift=0        shift + a x_1^2 + b x_{n+1}^2 + ct t

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace solab {

struct AnalyticFunction {
  std::function<double(std::span<const double>)> value;
  /// Euclidean gradient, length 2n+1.
  std::function<std::vector<double>(std::span<const double>)> gradient;
  std::string label;
  bool t_independent = false;
  bool affine = false;
};

/// `coeffs` has length 2n+1 with the t-coefficient last.
AnalyticFunction affine_function(std::vector<double> coeffs, double constant);

/// Unknown families or keys throw std::invalid_argument.
AnalyticFunction make_boundary(const std::string& label, int n);

}  // namespace solab
