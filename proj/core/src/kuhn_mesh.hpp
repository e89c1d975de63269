#pragma once

// Kuhn (Freudenthal) subdivision of every grid cell into d! simplices. On each
// simplex the P1 interpolant has a constant Euclidean gradient given by forward
// differences along the simplex's axis path; X-coefficients are frozen at the
// simplex centroid.

#include <cstddef>
#include <vector>

#include "solab/grid.hpp"

namespace solab::detail {

class KuhnMesh {
 public:
  explicit KuhnMesh(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  std::size_t simplex_count() const { return cells_ * perms_.size(); }
  int vertices() const { return d_ + 1; }
  int horizontal() const { return m_; }
  double simplex_volume() const { return volume_; }

  /// Node ids of the simplex's d+1 vertices and the m x (d+1) row-major map from
  /// local nodal values to Xu.
  void simplex(std::size_t s, std::size_t* nodes, double* B) const;

 private:
  GridPtr grid_;
  int d_ = 0;
  int m_ = 0;
  std::size_t cells_ = 0;
  std::vector<std::size_t> cell_sizes_;
  std::vector<std::vector<int>> perms_;
  std::vector<std::vector<std::size_t>> offsets_;    // vertex node offsets per permutation
  std::vector<std::vector<double>> centroid_;        // centroid offset per axis, in cells
  double volume_ = 0.0;
};

}  // namespace solab::detail
