#pragma once

// Variational solver for div_H A_eps(Xu) = 0 with Dirichlet data.
//
// The discrete energy is sum over Kuhn simplices of vol * G_eps(|Xu|), with Xu
// constant per simplex. It is minimized by damped Newton with Armijo
// backtracking; the weak residual is the largest partial derivative of the
// energy over free nodes.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solab/boundary.hpp"
#include "solab/grid.hpp"
#include "solab/heisenberg.hpp"
#include "solab/operator.hpp"
#include "solab/orlicz.hpp"

namespace solab {

enum class InitPolicy { ZeroFill, HarmonicExtension };

struct DirichletProblem {
  GridPtr grid;
  Mask free;  ///< nodes solved for; every other node takes its value from u0
  ScalarField u0;
  std::shared_ptr<const OrliczTriple> triple;
  double eps = 1e-4;          ///< 0 selects the unregularized operator
  double residual_tol = 0.0;  ///< 0 selects 1e-8 (1 + initial residual)
  std::size_t max_iters = 100000;
  InitPolicy init = InitPolicy::ZeroFill;

  /// Energy density and flux used by the discretization.
  RadialProfile profile() const;
  void validate() const;
};

/// Free nodes = all nodes off the box boundary; u0 sampled from `data` everywhere.
DirichletProblem make_problem(GridPtr grid, const OrliczTriple& triple, const AnalyticFunction& data,
                              double eps = 1e-4);

struct SolveReport {
  std::size_t iterations = 0;
  double final_energy = 0.0;
  double weak_residual = 0.0;
  double initial_residual = 0.0;
  double tolerance = 0.0;
  std::vector<double> energy_history;
  std::vector<double> residual_history;
  double gradient_cap_observed = 0.0;  ///< max |Xu| over simplices
  bool converged = false;
  std::string message;
};

struct SolveResult {
  ScalarField u;
  SolveReport report;
};

double discrete_energy(const ScalarField& u, const DirichletProblem& prob);
/// dE/du at every node (zero on fixed nodes).
std::vector<double> energy_gradient(const ScalarField& u, const DirichletProblem& prob);
double weak_residual(const ScalarField& u, const DirichletProblem& prob);
/// max |Xu| over simplices.
double simplex_gradient_cap(const ScalarField& u);

SolveResult solve_dirichlet(const DirichletProblem& prob);

/// Solves both problems and returns min over free nodes of u - v. Requires u0 >= v0 on
/// fixed nodes and identical grids and structure functions.
double comparison_check(const DirichletProblem& prob_u, const DirichletProblem& prob_v);

/// L(x) = u0(y) + (grad u0(y) + sign K b) . (x - y), as an affine function and sampled.
AnalyticFunction barrier_function(std::span<const double> b, double K, const GroupPoint& base,
                                  const AnalyticFunction& u0, int sign = +1);
ScalarField barrier_field(GridPtr grid, std::span<const double> b, double K, const GroupPoint& base,
                          const AnalyticFunction& u0, int sign = +1);

struct BarrierLevel {
  std::size_t nodes = 0;
  double h = 0.0;
  double residual = 0.0;     ///< weak residual as defined above
  double normalized = 0.0;   ///< residual divided by the cell volume
};

/// Weak residual of the affine L with the unregularized operator on [-1,1]^{2n+1}
/// at `base_nodes`, then `refinements` mesh halvings. Throws if |XL| vanishes on the
/// grid and F is singular at 0.
std::vector<BarrierLevel> barrier_residual_study(const AnalyticFunction& L, const OrliczTriple& triple,
                                                 int n, std::size_t base_nodes, int refinements);

/// Observed order log2(r_k / r_{k+1}) between consecutive entries.
std::vector<double> observed_orders(std::span<const double> values);

struct ConvexDomain {
  enum class Kind { EuclideanBall, HalfSpace, NormBall };
  Kind kind = Kind::EuclideanBall;
  std::vector<double> center;  ///< ball center, or a point on the half-space boundary
  double radius = 1.0;
  std::vector<double> normal;  ///< inward unit normal of the half-space

  /// Inward unit normal at a boundary point; normalized subgradient on edges.
  std::vector<double> inward_normal(std::span<const double> y) const;
};

struct StrongConvexityResult {
  double margin = 0.0;      ///< min over pairs of b(y).(x - y) - eps0 |x - y|^2
  double best_eps0 = 0.0;   ///< min over pairs of b(y).(x - y) / |x - y|^2
  bool flagged = false;     ///< best_eps0 <= 1e-10, i.e. zero up to rounding
};

StrongConvexityResult strong_convexity_margin(const ConvexDomain& domain, double eps0,
                                              const std::vector<std::vector<double>>& boundary_samples);

/// Deterministic boundary samples of a domain (2n+1 coordinates each).
std::vector<std::vector<double>> boundary_samples(const ConvexDomain& domain, std::size_t count,
                                                  unsigned long long seed);

}  // namespace solab
