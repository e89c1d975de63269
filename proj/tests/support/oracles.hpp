#pragma once

// Reference computations independent of the library's own code paths.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "solab/boundary.hpp"
#include "solab/grid.hpp"

namespace solab::oracle {

/// Composite Simpson with Richardson extrapolation on 2^k panels.
double simpson_richardson(const std::function<double(double)>& f, double a, double b, int levels = 12);

/// Central-difference Jacobian with step h * max(1, |z_j|).
Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& A,
                            const Eigen::VectorXd& z, double h = 1e-6);

/// inf{ s >= 0 : psi(s) > t } by scanning a fine lattice of [0, hi] then refining.
double brute_inverse(const std::function<double(double)>& psi, double t, double hi);

/// Quadratic-energy minimizer (g(t) = t) on the Kuhn P1 discretization, assembled
/// densely from vertex-matrix inverses and solved directly. Boundary nodes take `data`.
std::vector<double> kohn_laplace_dense(const GridPtr& grid, const AnalyticFunction& data);

/// Largest singular value of the antisymmetric part of a 2n x 2n Hessian at one node.
double skew_part_norm(const HessianField& H, std::size_t node);
double symmetric_part_norm(const HessianField& H, std::size_t node);

}  // namespace solab::oracle
