#pragma once

// Group law, dilations and homogeneous gauges on the Heisenberg group H^n,
// identified with R^{2n+1}. Coordinates are stored flat as (x_1..x_{2n}, t).

#include <cstddef>
#include <span>
#include <vector>

namespace solab {

struct HeisenbergConfig {
  explicit HeisenbergConfig(int group_index);

  int n;  ///< group index, n >= 1
  int Q;  ///< homogeneous dimension, always 2n + 2

  int dim() const { return 2 * n + 1; }
  int horizontal_dim() const { return 2 * n; }
};

/// A point of H^n. Immutable after construction.
class GroupPoint {
 public:
  /// `coords` has odd length 2n+1 with the vertical coordinate last.
  explicit GroupPoint(std::vector<double> coords);
  GroupPoint(std::span<const double> horizontal, double t);

  static GroupPoint origin(int n);

  int n() const { return static_cast<int>(coords_.size() / 2); }
  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  std::span<const double> horizontal() const { return {coords_.data(), coords_.size() - 1}; }
  double t() const { return coords_.back(); }
  double operator[](std::size_t i) const { return coords_[i]; }

  bool operator==(const GroupPoint&) const = default;

 private:
  std::vector<double> coords_;
};

GroupPoint group_multiply(const GroupPoint& p, const GroupPoint& q);
GroupPoint group_inverse(const GroupPoint& p);

/// (sum x_i^2 + |t|)^{1/2}; the gauge used for every ball in the library.
double homogeneous_norm(const GroupPoint& p);
double quasi_distance(const GroupPoint& p, const GroupPoint& q);
GroupPoint dilate(const GroupPoint& p, double lambda);

/// Homogeneous gauges available for balls and cutoffs.
///   Norm     (|x|^2 + |t|)^{1/2}, Lipschitz but kinked along t = 0
///   Quartic  (|x|^4 + t^2)^{1/4}, smooth away from the origin
enum class Gauge { Norm, Quartic };

double gauge_value(std::span<const double> coords, Gauge gauge);

/// Gauge of center^{-1} * x without allocating; both spans have length 2n+1.
double gauge_distance(std::span<const double> x, std::span<const double> center, Gauge gauge);

}  // namespace solab
