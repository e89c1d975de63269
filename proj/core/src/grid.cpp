#include "solab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "solab/parallel.hpp"

namespace solab {

Grid::Grid(int n, std::vector<double> lower, std::vector<double> upper, std::vector<std::size_t> sizes)
    : n_(n), lower_(std::move(lower)), upper_(std::move(upper)), sizes_(std::move(sizes)) {
  if (n < 1) throw std::invalid_argument("grid: n must be >= 1");
  const std::size_t d = static_cast<std::size_t>(2 * n + 1);
  if (lower_.size() != d || upper_.size() != d || sizes_.size() != d) {
    throw std::invalid_argument("grid: need 2n+1 extents and sizes");
  }
  h_.resize(d);
  strides_.resize(d);
  for (std::size_t a = 0; a < d; ++a) {
    if (sizes_[a] < 3) throw std::invalid_argument("grid: need at least 3 nodes per axis");
    if (!(upper_[a] > lower_[a]) || !std::isfinite(lower_[a]) || !std::isfinite(upper_[a])) {
      throw std::invalid_argument("grid: axis " + std::to_string(a) + " has empty extent");
    }
    h_[a] = (upper_[a] - lower_[a]) / static_cast<double>(sizes_[a] - 1);
  }
  std::size_t s = 1;
  for (std::size_t a = d; a-- > 0;) {
    strides_[a] = s;
    s *= sizes_[a];
  }
  count_ = s;
}

GridPtr Grid::cube(int n, double half_width, std::size_t nodes) {
  const std::size_t d = static_cast<std::size_t>(2 * n + 1);
  return std::make_shared<const Grid>(n, std::vector<double>(d, -half_width),
                                      std::vector<double>(d, half_width),
                                      std::vector<std::size_t>(d, nodes));
}

GridPtr Grid::parabolic(int n, double half_width, std::size_t nodes, double half_width_t) {
  const std::size_t d = static_cast<std::size_t>(2 * n + 1);
  const double h = 2.0 * half_width / static_cast<double>(nodes - 1);
  const double ht = h * h;
  const auto half_cells = static_cast<std::size_t>(std::ceil(half_width_t / ht));
  std::vector<double> lo(d, -half_width), hi(d, half_width);
  std::vector<std::size_t> sz(d, nodes);
  lo.back() = -ht * static_cast<double>(half_cells);
  hi.back() = ht * static_cast<double>(half_cells);
  sz.back() = 2 * half_cells + 1;
  return std::make_shared<const Grid>(n, lo, hi, sz);
}

double Grid::coord(std::size_t node, int axis) const {
  return lower_[axis] + h_[axis] * static_cast<double>(axis_index(node, axis));
}

void Grid::coords(std::size_t node, std::span<double> out) const {
  for (int a = 0; a < dim(); ++a) out[a] = coord(node, a);
}

std::vector<double> Grid::coords(std::size_t node) const {
  std::vector<double> out(static_cast<std::size_t>(dim()));
  coords(node, out);
  return out;
}

std::size_t Grid::depth(std::size_t node) const {
  std::size_t d = sizes_[0];
  for (int a = 0; a < dim(); ++a) {
    const std::size_t k = axis_index(node, a);
    d = std::min({d, k, sizes_[a] - 1 - k});
  }
  return d;
}

double Grid::weight(std::size_t node) const {
  double w = 1.0;
  for (int a = 0; a < dim(); ++a) {
    const std::size_t k = axis_index(node, a);
    w *= (k == 0 || k + 1 == sizes_[a]) ? 0.5 * h_[a] : h_[a];
  }
  return w;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (double h : h_) v *= h;
  return v;
}

bool Grid::operator==(const Grid& o) const {
  return n_ == o.n_ && sizes_ == o.sizes_ && lower_ == o.lower_ && upper_ == o.upper_;
}

ScalarField::ScalarField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("field without grid");
  if (values.size() != grid->node_count()) throw std::invalid_argument("field size does not match grid");
}

ScalarField::ScalarField(GridPtr g, double fill) : grid(std::move(g)) {
  if (!grid) throw std::invalid_argument("field without grid");
  values.assign(grid->node_count(), fill);
}

ScalarField ScalarField::sample(GridPtr g, const std::function<double(std::span<const double>)>& f) {
  ScalarField u(g);
  parallel_for(g->node_count(), [&](std::size_t b, std::size_t e) {
    std::vector<double> x(static_cast<std::size_t>(g->dim()));
    for (std::size_t i = b; i < e; ++i) {
      g->coords(i, x);
      u.values[i] = f(x);
    }
  });
  return u;
}

HorizontalField::HorizontalField(GridPtr g) : grid(std::move(g)) {
  comp.assign(static_cast<std::size_t>(2 * grid->n()), std::vector<double>(grid->node_count(), 0.0));
}

double HorizontalField::norm_at(std::size_t node) const {
  double s = 0.0;
  for (const auto& c : comp) s += c[node] * c[node];
  return std::sqrt(s);
}

double HessianField::frobenius_at(std::size_t node) const {
  double s = 0.0;
  for (const auto& row : H) {
    for (const auto& c : row) s += c[node] * c[node];
  }
  return std::sqrt(s);
}

ScalarField partial(const ScalarField& u, int axis) {
  const Grid& g = *u.grid;
  ScalarField out(u.grid);
  const std::size_t s = g.stride(axis);
  const std::size_t N = g.size(axis);
  const double inv2h = 0.5 / g.spacing(axis);
  const double* v = u.values.data();
  parallel_for(g.node_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t k = g.axis_index(i, axis);
      double d;
      if (k == 0) {
        d = (-3.0 * v[i] + 4.0 * v[i + s] - v[i + 2 * s]) * inv2h;
      } else if (k + 1 == N) {
        d = (3.0 * v[i] - 4.0 * v[i - s] + v[i - 2 * s]) * inv2h;
      } else {
        d = (v[i + s] - v[i - s]) * inv2h;
      }
      out.values[i] = d;
    }
  });
  return out;
}

namespace {

// X_j applied to u, given the already-computed partials D_j u and D_t u.
void combine_horizontal(const Grid& g, int j, const ScalarField& Dj, const ScalarField& Dt,
                        std::vector<double>& out) {
  const int n = g.n();
  const int partner = j < n ? j + n : j - n;
  const double sign = j < n ? -0.5 : 0.5;
  parallel_for(g.node_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      out[i] = Dj.values[i] + sign * g.coord(i, partner) * Dt.values[i];
    }
  });
}

}  // namespace

HorizontalField horizontal_gradient(const ScalarField& u) {
  const Grid& g = *u.grid;
  HorizontalField X(u.grid);
  const ScalarField Dt = partial(u, g.dim() - 1);
  for (int j = 0; j < 2 * g.n(); ++j) {
    combine_horizontal(g, j, partial(u, j), Dt, X.comp[j]);
  }
  return X;
}

ScalarField vertical_derivative(const ScalarField& u) { return partial(u, u.grid->dim() - 1); }

ScalarField horizontal_divergence(const HorizontalField& F) {
  const Grid& g = *F.grid;
  ScalarField div(F.grid);
  std::vector<double> tmp(g.node_count());
  for (int j = 0; j < 2 * g.n(); ++j) {
    ScalarField Fj(F.grid, F.comp[j]);
    combine_horizontal(g, j, partial(Fj, j), vertical_derivative(Fj), tmp);
    for (std::size_t i = 0; i < g.node_count(); ++i) div.values[i] += tmp[i];
  }
  return div;
}

HessianField horizontal_hessian(const ScalarField& u) {
  const HorizontalField X = horizontal_gradient(u);
  const int m = 2 * u.grid->n();
  HessianField H;
  H.grid = u.grid;
  H.H.assign(static_cast<std::size_t>(m), {});
  for (int j = 0; j < m; ++j) {
    const HorizontalField XXj = horizontal_gradient(ScalarField(u.grid, X.comp[j]));
    for (int i = 0; i < m; ++i) H.H[i].push_back(XXj.comp[i]);
  }
  return H;
}

double commutator_residual(const ScalarField& u) {
  const Grid& g = *u.grid;
  const HessianField H = horizontal_hessian(u);
  const ScalarField T = vertical_derivative(u);
  const int n = g.n();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.depth(i) < 2) continue;
    for (int a = 0; a < n; ++a) {
      const double r = H.H[a][n + a][i] - H.H[n + a][a][i] - T.values[i];
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

double td_bound_margin(const ScalarField& u) {
  const Grid& g = *u.grid;
  const HessianField H = horizontal_hessian(u);
  const ScalarField T = vertical_derivative(u);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.depth(i) < 2) continue;
    margin = std::min(margin, 2.0 * H.frobenius_at(i) - std::abs(T.values[i]));
  }
  return margin;
}

CutoffFunction make_cutoff(GridPtr g, std::span<const double> center, double r_inner, double r_outer) {
  if (center.size() != static_cast<std::size_t>(g->dim())) throw std::invalid_argument("cutoff: center dimension");
  if (!(r_inner > 0.0) || !(r_outer > r_inner) || (r_outer - r_inner) < 1e-12 * r_outer) {
    throw std::invalid_argument("cutoff: need 0 < r_inner < r_outer");
  }
  const std::vector<double> c(center.begin(), center.end());
  const double width = r_outer - r_inner;
  CutoffFunction cf;
  cf.center = c;
  cf.r_inner = r_inner;
  cf.r_outer = r_outer;
  // Closed-form eta, X eta and T eta, evaluated at y = center^{-1} x (the fields are left invariant).
  const int n = g->n();
  const int d = g->dim();
  cf.eta = ScalarField(g);
  cf.X_eta = HorizontalField(g);
  cf.T_eta = ScalarField(g);
  std::vector<double> x(static_cast<std::size_t>(d)), y(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    g->coords(i, x);
    double omega = 0.0;
    for (int a = 0; a < n; ++a) omega += -c[a] * x[n + a] + c[n + a] * x[a];
    double r2 = 0.0;
    for (int a = 0; a < 2 * n; ++a) {
      y[a] = x[a] - c[a];
      r2 += y[a] * y[a];
    }
    const double t = x[d - 1] - c[d - 1] + 0.5 * omega;
    const double rho = std::pow(r2 * r2 + t * t, 0.25);
    const double s = std::clamp((rho - r_inner) / width, 0.0, 1.0);
    cf.eta.values[i] = 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    if (s <= 0.0 || s >= 1.0) continue;
    const double deta = -30.0 * s * s * (1.0 - s) * (1.0 - s) / width;
    const double rho3 = rho * rho * rho;
    const double dt = deta * t / (2.0 * rho3);
    cf.T_eta.values[i] = dt;
    for (int a = 0; a < 2 * n; ++a) {
      const int partner = a < n ? a + n : a - n;
      const double sign = a < n ? -0.5 : 0.5;
      cf.X_eta.comp[a][i] = deta * r2 * y[a] / rho3 + sign * y[partner] * dt;
    }
  }
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    if (g->on_boundary(i) && cf.eta.values[i] != 0.0) {
      throw std::invalid_argument("cutoff: outer ball leaves the grid");
    }
  }
  const HessianField H = horizontal_hessian(cf.eta);
  double sup_eta_T = 0.0;
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    cf.sup_X = std::max(cf.sup_X, cf.X_eta.norm_at(i));
    cf.sup_XX = std::max(cf.sup_XX, H.frobenius_at(i));
    sup_eta_T = std::max(sup_eta_T, std::abs(cf.eta.values[i] * cf.T_eta.values[i]));
  }
  cf.K_eta = cf.sup_X * cf.sup_X + sup_eta_T;
  return cf;
}

Mask ball_mask(const Grid& g, std::span<const double> center, double r, Gauge gauge) {
  Mask m(g.node_count(), 0);
  std::vector<double> x(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.coords(i, x);
    m[i] = gauge_distance(x, center, gauge) <= r ? 1 : 0;
  }
  return m;
}

double integrate(const ScalarField& f) {
  const Grid& g = *f.grid;
  return parallel_sum(g.node_count(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += g.weight(i) * f.values[i];
    return s;
  });
}

double integrate(const ScalarField& f, const Mask& region) {
  const Grid& g = *f.grid;
  if (region.size() != g.node_count()) throw std::invalid_argument("integrate: mask size mismatch");
  if (std::none_of(region.begin(), region.end(), [](std::uint8_t v) { return v != 0; })) {
    throw std::invalid_argument("integrate: empty region");
  }
  return parallel_sum(g.node_count(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      if (region[i]) s += g.weight(i) * f.values[i];
    }
    return s;
  });
}

double region_measure(const Grid& g, const Mask& region) {
  return integrate(ScalarField(std::make_shared<const Grid>(g), 1.0), region);
}

}  // namespace solab
