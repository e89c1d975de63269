#pragma once

// Uniform nodal grids on boxes of R^{2n+1}, fields sampled on them, finite
// difference horizontal/vertical derivatives, cutoffs and quadrature.
//
// Nodes are stored row-major with the vertical coordinate t varying fastest.
// Derivatives use central differences inside and second-order one-sided
// stencils on the boundary faces.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "solab/heisenberg.hpp"

namespace solab {

class Grid {
 public:
  Grid(int n, std::vector<double> lower, std::vector<double> upper, std::vector<std::size_t> sizes);

  /// [-half_width, half_width]^{2n+1} with `nodes` per axis, so h_t = h_x.
  static std::shared_ptr<const Grid> cube(int n, double half_width, std::size_t nodes);
  /// Horizontal cube with h_t = h_x^2; the t-extent is [-half_width_t, half_width_t] rounded up.
  static std::shared_ptr<const Grid> parabolic(int n, double half_width, std::size_t nodes,
                                               double half_width_t);

  int n() const { return n_; }
  int dim() const { return 2 * n_ + 1; }
  std::size_t size(int axis) const { return sizes_[axis]; }
  double spacing(int axis) const { return h_[axis]; }
  double lower(int axis) const { return lower_[axis]; }
  double upper(int axis) const { return upper_[axis]; }
  std::size_t stride(int axis) const { return strides_[axis]; }
  std::size_t node_count() const { return count_; }
  double h_x() const { return h_[0]; }
  double h_t() const { return h_[dim() - 1]; }

  std::size_t axis_index(std::size_t node, int axis) const { return (node / strides_[axis]) % sizes_[axis]; }
  double coord(std::size_t node, int axis) const;
  void coords(std::size_t node, std::span<double> out) const;
  std::vector<double> coords(std::size_t node) const;
  /// Index distance to the nearest boundary face.
  std::size_t depth(std::size_t node) const;
  bool on_boundary(std::size_t node) const { return depth(node) == 0; }
  /// Trapezoid product weight of the node.
  double weight(std::size_t node) const;
  double cell_volume() const;

  bool operator==(const Grid& other) const;

 private:
  int n_;
  std::vector<double> lower_, upper_, h_;
  std::vector<std::size_t> sizes_, strides_;
  std::size_t count_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

struct ScalarField {
  ScalarField() = default;
  ScalarField(GridPtr g, std::vector<double> v);
  explicit ScalarField(GridPtr g, double fill = 0.0);

  /// Samples f(x) at every node.
  static ScalarField sample(GridPtr g, const std::function<double(std::span<const double>)>& f);

  GridPtr grid;
  std::vector<double> values;

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

/// 2n components per node, stored component-major.
struct HorizontalField {
  HorizontalField() = default;
  explicit HorizontalField(GridPtr g);

  GridPtr grid;
  std::vector<std::vector<double>> comp;

  double norm_at(std::size_t node) const;
};

/// H[i][j] = X_i X_j u.
struct HessianField {
  GridPtr grid;
  std::vector<std::vector<std::vector<double>>> H;

  double frobenius_at(std::size_t node) const;
};

/// Central difference along one coordinate axis.
ScalarField partial(const ScalarField& u, int axis);
HorizontalField horizontal_gradient(const ScalarField& u);
ScalarField vertical_derivative(const ScalarField& u);
ScalarField horizontal_divergence(const HorizontalField& F);
HessianField horizontal_hessian(const ScalarField& u);

/// max |X_i X_{n+i} u - X_{n+i} X_i u - T u| over nodes at depth >= 2.
double commutator_residual(const ScalarField& u);
/// min of 2|XXu| - |Tu| over nodes at depth >= 2.
double td_bound_margin(const ScalarField& u);

struct CutoffFunction {
  ScalarField eta;
  HorizontalField X_eta;
  ScalarField T_eta;
  double K_eta = 0.0;      ///< sup|X eta|^2 + sup|eta T eta|
  double sup_X = 0.0;
  double sup_XX = 0.0;
  std::vector<double> center;
  double r_inner = 0.0;
  double r_outer = 0.0;
};

/// eta = 1 - S((rho - r_inner)/(r_outer - r_inner)) with S the quintic smoothstep and rho
/// the quartic gauge (|x|^4 + t^2)^{1/4} of center^{-1} x. X eta and T eta are exact.
CutoffFunction make_cutoff(GridPtr g, std::span<const double> center, double r_inner, double r_outer);

using Mask = std::vector<std::uint8_t>;

/// Nodes with gauge_distance(x, center) <= r.
Mask ball_mask(const Grid& g, std::span<const double> center, double r, Gauge gauge = Gauge::Norm);

double integrate(const ScalarField& f);
double integrate(const ScalarField& f, const Mask& region);
/// Trapezoid weight sum of the region.
double region_measure(const Grid& g, const Mask& region);

}  // namespace solab
