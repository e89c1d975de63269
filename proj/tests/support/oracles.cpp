#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace solab::oracle {

double simpson_richardson(const std::function<double(double)>& f, double a, double b, int levels) {
  auto simpson = [&](int panels) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  std::vector<double> row;
  for (int k = 1; k <= levels; ++k) row.push_back(simpson(1 << k));
  // Romberg-style elimination of h^4, h^6, ... terms.
  for (int m = 1; m < static_cast<int>(row.size()); ++m) {
    const double factor = std::pow(4.0, m + 1);
    for (int k = static_cast<int>(row.size()) - 1; k >= m; --k) {
      row[k] = (factor * row[k] - row[k - 1]) / (factor - 1.0);
    }
  }
  return row.back();
}

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& A,
                            const Eigen::VectorXd& z, double h) {
  const int m = static_cast<int>(z.size());
  Eigen::MatrixXd J(m, m);
  for (int j = 0; j < m; ++j) {
    const double step = h * std::max(1.0, std::abs(z[j]));
    Eigen::VectorXd zp = z, zm = z;
    zp[j] += step;
    zm[j] -= step;
    J.col(j) = (A(zp) - A(zm)) / (2.0 * step);
  }
  return J;
}

double brute_inverse(const std::function<double(double)>& psi, double t, double hi) {
  const int N = 200000;
  double lo = 0.0, up = hi;
  for (int pass = 0; pass < 3; ++pass) {
    const double step = (up - lo) / N;
    double found = up;
    for (int i = 0; i <= N; ++i) {
      const double s = lo + i * step;
      if (psi(s) > t) {
        found = s;
        break;
      }
    }
    lo = std::max(0.0, found - step);
    up = found;
  }
  return up;
}

std::vector<double> kohn_laplace_dense(const GridPtr& grid, const AnalyticFunction& data) {
  const Grid& g = *grid;
  const int d = g.dim();
  const int n = g.n();
  const std::size_t N = g.node_count();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));

  std::vector<int> perm(static_cast<std::size_t>(d));
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  const double fact = std::tgamma(d + 1.0);
  for (std::size_t base = 0; base < N; ++base) {
    bool corner = true;
    for (int a = 0; a < d; ++a) {
      if (g.axis_index(base, a) + 1 >= g.size(a)) corner = false;
    }
    if (!corner) continue;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<std::size_t> verts{base};
      for (int k = 0; k < d; ++k) verts.push_back(verts.back() + g.stride(perm[k]));
      Eigen::MatrixXd M(d, d);
      const std::vector<double> x0 = g.coords(verts[0]);
      Eigen::VectorXd centroid = Eigen::Map<const Eigen::VectorXd>(x0.data(), d);
      for (int k = 1; k <= d; ++k) {
        const std::vector<double> xk = g.coords(verts[k]);
        for (int a = 0; a < d; ++a) M(a, k - 1) = xk[a] - x0[a];
        centroid += Eigen::Map<const Eigen::VectorXd>(xk.data(), d);
      }
      centroid /= d + 1.0;
      const Eigen::MatrixXd Minv = M.inverse();
      Eigen::MatrixXd grads(d, d + 1);  // column k: Euclidean gradient of basis k
      for (int k = 1; k <= d; ++k) grads.col(k) = Minv.row(k - 1).transpose();
      grads.col(0) = -grads.rightCols(d).rowwise().sum();
      Eigen::MatrixXd B(2 * n, d + 1);
      for (int j = 0; j < 2 * n; ++j) {
        const double coef = j < n ? -0.5 * centroid[j + n] : 0.5 * centroid[j - n];
        B.row(j) = grads.row(j) + coef * grads.row(d - 1);
      }
      const double vol = std::abs(M.determinant()) / fact;
      const Eigen::MatrixXd loc = vol * B.transpose() * B;
      for (int a = 0; a <= d; ++a) {
        for (int b = 0; b <= d; ++b) K(verts[a], verts[b]) += loc(a, b);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  std::vector<std::size_t> free_nodes;
  std::vector<double> u(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    if (g.on_boundary(i)) {
      u[i] = data.value(g.coords(i));
    } else {
      free_nodes.push_back(i);
    }
  }
  const Eigen::Index m = static_cast<Eigen::Index>(free_nodes.size());
  Eigen::MatrixXd Kff(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) Kff(a, b) = K(free_nodes[a], free_nodes[b]);
    for (std::size_t j = 0; j < N; ++j) {
      if (g.on_boundary(j)) rhs[a] -= K(free_nodes[a], j) * u[j];
    }
  }
  const Eigen::VectorXd uf = Kff.ldlt().solve(rhs);
  for (Eigen::Index a = 0; a < m; ++a) u[free_nodes[a]] = uf[a];
  return u;
}

namespace {
Eigen::MatrixXd hessian_at(const HessianField& H, std::size_t node) {
  const int m = static_cast<int>(H.H.size());
  Eigen::MatrixXd M(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) M(i, j) = H.H[i][j][node];
  }
  return M;
}
}  // namespace

double skew_part_norm(const HessianField& H, std::size_t node) {
  const Eigen::MatrixXd M = hessian_at(H, node);
  const Eigen::MatrixXd S = 0.5 * (M - M.transpose());
  return Eigen::JacobiSVD<Eigen::MatrixXd>(S).singularValues()(0);
}

double symmetric_part_norm(const HessianField& H, std::size_t node) {
  const Eigen::MatrixXd M = hessian_at(H, node);
  const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  return Eigen::JacobiSVD<Eigen::MatrixXd>(S).singularValues()(0);
}

}  // namespace solab::oracle
