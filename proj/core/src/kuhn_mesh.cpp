#include "kuhn_mesh.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace solab::detail {

KuhnMesh::KuhnMesh(GridPtr grid) : grid_(std::move(grid)) {
  const Grid& g = *grid_;
  d_ = g.dim();
  m_ = 2 * g.n();
  if (g.n() > 3) throw std::invalid_argument("simplicial assembly supports n <= 3");
  cells_ = 1;
  cell_sizes_.resize(d_);
  for (int a = 0; a < d_; ++a) {
    cell_sizes_[a] = g.size(a) - 1;
    cells_ *= cell_sizes_[a];
  }
  std::vector<int> p(d_);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms_.push_back(p);
    std::vector<std::size_t> off(d_ + 1, 0);
    std::vector<double> cen(d_, 0.0);
    for (int k = 1; k <= d_; ++k) {
      off[k] = off[k - 1] + g.stride(p[k - 1]);
      cen[p[k - 1]] = static_cast<double>(d_ - k + 1) / (d_ + 1);
    }
    offsets_.push_back(off);
    centroid_.push_back(cen);
  } while (std::next_permutation(p.begin(), p.end()));
  volume_ = g.cell_volume() / static_cast<double>(perms_.size());
}

void KuhnMesh::simplex(std::size_t s, std::size_t* nodes, double* B) const {
  const Grid& g = *grid_;
  const std::size_t k = s % perms_.size();
  std::size_t c = s / perms_.size();
  const auto& perm = perms_[k];
  const auto& cen = centroid_[k];

  // cell multi-index -> base node id and centroid coordinates
  double x[64];
  std::size_t base = 0;
  for (int a = d_ - 1; a >= 0; --a) {
    const std::size_t idx = c % cell_sizes_[a];
    c /= cell_sizes_[a];
    base += idx * g.stride(a);
    x[a] = g.lower(a) + g.spacing(a) * (static_cast<double>(idx) + cen[a]);
  }
  for (int v = 0; v <= d_; ++v) nodes[v] = base + offsets_[k][v];

  // Euclidean gradient rows: grad[a][v]
  double grad[64][65];
  for (int a = 0; a < d_; ++a) std::fill(grad[a], grad[a] + d_ + 1, 0.0);
  for (int step = 1; step <= d_; ++step) {
    const int a = perm[step - 1];
    const double inv = 1.0 / g.spacing(a);
    grad[a][step] += inv;
    grad[a][step - 1] -= inv;
  }
  const int n = m_ / 2;
  const int t = d_ - 1;
  for (int i = 0; i < m_; ++i) {
    const double coef = i < n ? -0.5 * x[i + n] : 0.5 * x[i - n];
    for (int v = 0; v <= d_; ++v) B[i * (d_ + 1) + v] = grad[i][v] + coef * grad[t][v];
  }
}

}  // namespace solab::detail
