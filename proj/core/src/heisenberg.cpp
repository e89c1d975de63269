#include "solab/heisenberg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace solab {

namespace {

void require_same_group(const GroupPoint& p, const GroupPoint& q) {
  if (p.dim() != q.dim()) {
    throw std::invalid_argument("dimension mismatch: H^" + std::to_string(p.n()) + " vs H^" +
                                std::to_string(q.n()));
  }
}

// Vertical coordinate of center^{-1} * x.
double translated_t(std::span<const double> x, std::span<const double> c) {
  const std::size_t n = (x.size() - 1) / 2;
  double omega = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    omega += -c[i] * x[n + i] + c[n + i] * x[i];
  }
  return x.back() - c.back() + 0.5 * omega;
}

}  // namespace

HeisenbergConfig::HeisenbergConfig(int group_index) : n(group_index), Q(2 * group_index + 2) {
  if (group_index < 1) throw std::invalid_argument("Heisenberg group index must be >= 1");
}

GroupPoint::GroupPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 3 || coords_.size() % 2 == 0) {
    throw std::invalid_argument("group point needs 2n+1 coordinates with n >= 1");
  }
  for (double v : coords_) {
    if (!std::isfinite(v)) throw std::invalid_argument("group point coordinates must be finite");
  }
}

GroupPoint::GroupPoint(std::span<const double> horizontal, double t)
    : GroupPoint([&] {
        std::vector<double> c(horizontal.begin(), horizontal.end());
        c.push_back(t);
        return c;
      }()) {}

GroupPoint GroupPoint::origin(int n) {
  HeisenbergConfig cfg(n);
  return GroupPoint(std::vector<double>(static_cast<std::size_t>(cfg.dim()), 0.0));
}

GroupPoint group_multiply(const GroupPoint& p, const GroupPoint& q) {
  require_same_group(p, q);
  const std::size_t n = static_cast<std::size_t>(p.n());
  std::vector<double> out(p.dim());
  double omega = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    omega += p[i] * q[n + i] - p[n + i] * q[i];
  }
  for (std::size_t i = 0; i < 2 * n; ++i) out[i] = p[i] + q[i];
  out.back() = p.t() + q.t() + 0.5 * omega;
  return GroupPoint(std::move(out));
}

GroupPoint group_inverse(const GroupPoint& p) {
  std::vector<double> out(p.coords().begin(), p.coords().end());
  for (double& v : out) v = -v;
  return GroupPoint(std::move(out));
}

double homogeneous_norm(const GroupPoint& p) { return gauge_value(p.coords(), Gauge::Norm); }

double quasi_distance(const GroupPoint& p, const GroupPoint& q) {
  require_same_group(p, q);
  return gauge_distance(p.coords(), q.coords(), Gauge::Norm);
}

GroupPoint dilate(const GroupPoint& p, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("dilation factor must be positive");
  }
  std::vector<double> out(p.coords().begin(), p.coords().end());
  for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] *= lambda;
  out.back() *= lambda * lambda;
  return GroupPoint(std::move(out));
}

double gauge_value(std::span<const double> coords, Gauge gauge) {
  double r2 = 0.0;
  for (std::size_t i = 0; i + 1 < coords.size(); ++i) r2 += coords[i] * coords[i];
  const double t = coords.back();
  switch (gauge) {
    case Gauge::Norm:
      return std::sqrt(r2 + std::abs(t));
    case Gauge::Quartic:
      return std::sqrt(std::sqrt(r2 * r2 + t * t));
  }
  return 0.0;
}

double gauge_distance(std::span<const double> x, std::span<const double> center, Gauge gauge) {
  if (x.size() != center.size()) throw std::invalid_argument("dimension mismatch in gauge_distance");
  double r2 = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double d = x[i] - center[i];
    r2 += d * d;
  }
  const double t = translated_t(x, center);
  switch (gauge) {
    case Gauge::Norm:
      return std::sqrt(r2 + std::abs(t));
    case Gauge::Quartic:
      return std::sqrt(std::sqrt(r2 * r2 + t * t));
  }
  return 0.0;
}

}  // namespace solab
