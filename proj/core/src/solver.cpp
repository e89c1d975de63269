#include "solab/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kuhn_mesh.hpp"
#include "solab/parallel.hpp"

namespace solab {

namespace {

using detail::KuhnMesh;
using SpMat = Eigen::SparseMatrix<double>;

constexpr int kMaxVerts = 8;
constexpr int kMaxHor = 6;

RadialProfile raw_profile(std::shared_ptr<const OrliczTriple> tr) {
  return RadialProfile{[tr](double t) { return tr->g(t); },
                       [tr](double t) {
                         if (t == 0.0) return tr->F_at_zero();
                         return tr->structure().derivative(t);
                       },
                       [tr](double t) { return tr->G(t); }};
}

RadialProfile linear_profile() {
  return RadialProfile{[](double t) { return t; }, [](double) { return 1.0; },
                       [](double t) { return 0.5 * t * t; }};
}

struct Local {
  std::size_t nodes[kMaxVerts];
  double B[kMaxHor * kMaxVerts];
  double z[kMaxHor];
  double t = 0.0;
};

class Assembler {
 public:
  Assembler(GridPtr grid, RadialProfile profile)
      : mesh_(std::move(grid)), rp_(std::move(profile)), nv_(mesh_.vertices()), m_(mesh_.horizontal()) {}

  const KuhnMesh& mesh() const { return mesh_; }

  void local(std::size_t s, const std::vector<double>& u, Local& L) const {
    mesh_.simplex(s, L.nodes, L.B);
    double t2 = 0.0;
    for (int i = 0; i < m_; ++i) {
      double zi = 0.0;
      for (int v = 0; v < nv_; ++v) zi += L.B[i * nv_ + v] * u[L.nodes[v]];
      L.z[i] = zi;
      t2 += zi * zi;
    }
    L.t = std::sqrt(t2);
  }

  /// Per-simplex energy densities G(|Xu|).
  std::vector<double> densities(const std::vector<double>& u) const {
    std::vector<double> out(mesh_.simplex_count());
    parallel_for(out.size(), [&](std::size_t b, std::size_t e) {
      Local L;
      for (std::size_t s = b; s < e; ++s) {
        local(s, u, L);
        out[s] = rp_.potential(L.t);
      }
    });
    return out;
  }

  double energy(const std::vector<double>& u) const {
    const double vol = mesh_.simplex_volume();
    return parallel_sum(mesh_.simplex_count(), [&](std::size_t b, std::size_t e) {
      Local L;
      double acc = 0.0;
      for (std::size_t s = b; s < e; ++s) {
        local(s, u, L);
        acc += rp_.potential(L.t);
      }
      return acc * vol;
    });
  }

  double cap(const std::vector<double>& u) const {
    double c = 0.0;
    Local L;
    for (std::size_t s = 0; s < mesh_.simplex_count(); ++s) {
      local(s, u, L);
      c = std::max(c, L.t);
    }
    return c;
  }

  double floor_norm(const std::vector<double>& u) const {
    double c = std::numeric_limits<double>::infinity();
    Local L;
    for (std::size_t s = 0; s < mesh_.simplex_count(); ++s) {
      local(s, u, L);
      c = std::min(c, L.t);
    }
    return c;
  }

  std::vector<double> gradient(const std::vector<double>& u) const {
    const std::size_t S = mesh_.simplex_count();
    std::vector<double> contrib(S * static_cast<std::size_t>(nv_));
    const double vol = mesh_.simplex_volume();
    parallel_for(S, [&](std::size_t b, std::size_t e) {
      Local L;
      for (std::size_t s = b; s < e; ++s) {
        local(s, u, L);
        const double scale = L.t > 0.0 ? vol * rp_.phi(L.t) / L.t : 0.0;
        for (int v = 0; v < nv_; ++v) {
          double acc = 0.0;
          for (int i = 0; i < m_; ++i) acc += L.B[i * nv_ + v] * L.z[i];
          contrib[s * nv_ + v] = scale * acc;
        }
      }
    });
    std::vector<double> g(u.size(), 0.0);
    std::size_t nodes[kMaxVerts];
    double B[kMaxHor * kMaxVerts];
    for (std::size_t s = 0; s < S; ++s) {
      mesh_.simplex(s, nodes, B);
      for (int v = 0; v < nv_; ++v) g[nodes[v]] += contrib[s * nv_ + v];
    }
    return g;
  }

  /// Hessian restricted to free nodes, indexed by `slot` (-1 for fixed nodes).
  SpMat hessian(const std::vector<double>& u, const std::vector<long>& slot, std::size_t nfree) const {
    const std::size_t S = mesh_.simplex_count();
    const std::size_t nv2 = static_cast<std::size_t>(nv_ * nv_);
    std::vector<double> contrib(S * nv2);
    const double vol = mesh_.simplex_volume();
    parallel_for(S, [&](std::size_t b, std::size_t e) {
      Local L;
      double D[kMaxHor * kMaxHor];
      double DB[kMaxHor * kMaxVerts];
      for (std::size_t s = b; s < e; ++s) {
        local(s, u, L);
        double tang, radial;
        if (L.t > 0.0) {
          tang = rp_.phi(L.t) / L.t;
          radial = rp_.dphi(L.t);
        } else {
          tang = radial = rp_.dphi(0.0);
        }
        for (int i = 0; i < m_; ++i) {
          for (int j = 0; j < m_; ++j) {
            double v = i == j ? tang : 0.0;
            if (L.t > 0.0) v += (radial - tang) * L.z[i] * L.z[j] / (L.t * L.t);
            D[i * m_ + j] = v;
          }
        }
        for (int i = 0; i < m_; ++i) {
          for (int v = 0; v < nv_; ++v) {
            double acc = 0.0;
            for (int j = 0; j < m_; ++j) acc += D[i * m_ + j] * L.B[j * nv_ + v];
            DB[i * nv_ + v] = acc;
          }
        }
        double* out = &contrib[s * nv2];
        for (int a = 0; a < nv_; ++a) {
          for (int c = 0; c < nv_; ++c) {
            double acc = 0.0;
            for (int i = 0; i < m_; ++i) acc += L.B[i * nv_ + a] * DB[i * nv_ + c];
            out[a * nv_ + c] = vol * acc;
          }
        }
      }
    });
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(S * nv2);
    std::size_t nodes[kMaxVerts];
    double B[kMaxHor * kMaxVerts];
    for (std::size_t s = 0; s < S; ++s) {
      mesh_.simplex(s, nodes, B);
      for (int a = 0; a < nv_; ++a) {
        const long ra = slot[nodes[a]];
        if (ra < 0) continue;
        for (int c = 0; c < nv_; ++c) {
          const long rc = slot[nodes[c]];
          if (rc < 0) continue;
          trip.emplace_back(ra, rc, contrib[s * nv2 + a * nv_ + c]);
        }
      }
    }
    SpMat H(static_cast<long>(nfree), static_cast<long>(nfree));
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
  }

 private:
  KuhnMesh mesh_;
  RadialProfile rp_;
  int nv_;
  int m_;
};

std::vector<long> free_slots(const Mask& free, std::size_t& nfree) {
  std::vector<long> slot(free.size(), -1);
  nfree = 0;
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (free[i]) slot[i] = static_cast<long>(nfree++);
  }
  return slot;
}

double max_free_abs(const std::vector<double>& g, const Mask& free) {
  double r = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (free[i]) r = std::max(r, std::abs(g[i]));
  }
  return r;
}

/// Solves H x = rhs; returns false on failure.
bool linear_solve(const SpMat& H, const Eigen::VectorXd& rhs, Eigen::VectorXd& x) {
  if (H.rows() <= 20000) {
    Eigen::SimplicialLDLT<SpMat> ldlt(H);
    if (ldlt.info() != Eigen::Success) return false;
    x = ldlt.solve(rhs);
    return ldlt.info() == Eigen::Success && x.allFinite();
  }
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
  cg.setTolerance(1e-13);
  cg.setMaxIterations(static_cast<long>(std::max<long>(2000, H.rows())));
  cg.compute(H);
  if (cg.info() != Eigen::Success) return false;
  x = cg.solve(rhs);
  return x.allFinite();
}

std::vector<double> initial_iterate(const DirichletProblem& prob) {
  std::vector<double> u = prob.u0.values;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (prob.free[i]) u[i] = 0.0;
  }
  if (prob.init == InitPolicy::ZeroFill) return u;

  Assembler lin(prob.grid, linear_profile());
  std::size_t nfree = 0;
  const auto slot = free_slots(prob.free, nfree);
  const std::vector<double> g = lin.gradient(u);
  Eigen::VectorXd rhs(static_cast<long>(nfree));
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (slot[i] >= 0) rhs[slot[i]] = -g[i];
  }
  Eigen::VectorXd x;
  if (!linear_solve(lin.hessian(u, slot, nfree), rhs, x)) {
    throw std::runtime_error("harmonic extension: linear solve failed");
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (slot[i] >= 0) u[i] += x[slot[i]];
  }
  return u;
}

}  // namespace

RadialProfile DirichletProblem::profile() const {
  if (!triple) throw std::invalid_argument("problem has no structure function");
  if (eps == 0.0) return raw_profile(triple);
  return regularized_profile(*triple, eps);
}

void DirichletProblem::validate() const {
  if (!grid) throw std::invalid_argument("problem has no grid");
  if (!triple) throw std::invalid_argument("problem has no structure function");
  if (!u0.grid || !(*u0.grid == *grid)) throw std::invalid_argument("boundary data lives on another grid");
  if (free.size() != grid->node_count()) throw std::invalid_argument("free mask size mismatch");
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (free[i] && grid->on_boundary(i)) throw std::invalid_argument("free mask touches the box boundary");
  }
  for (double v : u0.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("boundary data not finite");
  }
  if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in [0, 1)");
}

DirichletProblem make_problem(GridPtr grid, const OrliczTriple& triple, const AnalyticFunction& data,
                              double eps) {
  DirichletProblem p;
  p.grid = grid;
  p.free.assign(grid->node_count(), 0);
  for (std::size_t i = 0; i < grid->node_count(); ++i) p.free[i] = grid->on_boundary(i) ? 0 : 1;
  p.u0 = ScalarField::sample(grid, data.value);
  p.triple = std::make_shared<const OrliczTriple>(triple);
  p.eps = eps;
  return p;
}

namespace {

void check_matches(const ScalarField& u, const DirichletProblem& prob) {
  if (!u.grid || !(*u.grid == *prob.grid)) throw std::invalid_argument("field lives on another grid");
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (!prob.free[i] && u.values[i] != prob.u0.values[i]) {
      throw std::invalid_argument("field does not match the boundary data");
    }
  }
}

}  // namespace

double discrete_energy(const ScalarField& u, const DirichletProblem& prob) {
  prob.validate();
  check_matches(u, prob);
  return Assembler(prob.grid, prob.profile()).energy(u.values);
}

std::vector<double> energy_gradient(const ScalarField& u, const DirichletProblem& prob) {
  prob.validate();
  std::vector<double> g = Assembler(prob.grid, prob.profile()).gradient(u.values);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!prob.free[i]) g[i] = 0.0;
  }
  return g;
}

double weak_residual(const ScalarField& u, const DirichletProblem& prob) {
  return max_free_abs(energy_gradient(u, prob), prob.free);
}

double simplex_gradient_cap(const ScalarField& u) {
  return Assembler(u.grid, linear_profile()).cap(u.values);
}

SolveResult solve_dirichlet(const DirichletProblem& prob) {
  prob.validate();
  const Assembler asmb(prob.grid, prob.profile());
  const double vol = asmb.mesh().simplex_volume();
  std::size_t nfree = 0;
  const auto slot = free_slots(prob.free, nfree);

  std::vector<double> u = initial_iterate(prob);
  std::vector<double> dens = asmb.densities(u);
  auto total = [&](const std::vector<double>& d) {
    double s = 0.0;
    for (double v : d) s += v;
    return s * vol;
  };

  SolveReport rep;
  double E = total(dens);
  std::vector<double> g = asmb.gradient(u);
  double r = max_free_abs(g, prob.free);
  rep.initial_residual = r;
  rep.tolerance = prob.residual_tol > 0.0 ? prob.residual_tol : 1e-8 * (1.0 + r);
  rep.energy_history.push_back(E);
  rep.residual_history.push_back(r);

  constexpr double kArmijo = 1e-4;
  constexpr double kBacktrack = 0.5;
  std::vector<double> trial(u.size());
  Eigen::VectorXd rhs(static_cast<long>(nfree)), step;

  while (r > rep.tolerance && rep.iterations < prob.max_iters) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (slot[i] >= 0) rhs[slot[i]] = -g[i];
    }
    bool newton = linear_solve(asmb.hessian(u, slot, nfree), rhs, step);
    double slope = newton ? -rhs.dot(step) : 0.0;
    if (!newton || !(slope < 0.0)) {
      step = rhs;
      slope = -rhs.squaredNorm();
    }

    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> trial_dens;
    double dE = 0.0;
    while (alpha >= 1e-12) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        trial[i] = slot[i] >= 0 ? u[i] + alpha * step[slot[i]] : u[i];
      }
      trial_dens = asmb.densities(trial);
      dE = 0.0;
      for (std::size_t s = 0; s < dens.size(); ++s) dE += trial_dens[s] - dens[s];
      dE *= vol;
      if (dE <= kArmijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= kBacktrack;
    }

    if (!accepted) {
      // Energy differences have reached rounding level; take the full step only if it
      // lowers the residual without a measurable energy increase.
      for (std::size_t i = 0; i < u.size(); ++i) {
        trial[i] = slot[i] >= 0 ? u[i] + step[slot[i]] : u[i];
      }
      trial_dens = asmb.densities(trial);
      dE = 0.0;
      for (std::size_t s = 0; s < dens.size(); ++s) dE += trial_dens[s] - dens[s];
      dE *= vol;
      const std::vector<double> g_try = asmb.gradient(trial);
      const double r_try = max_free_abs(g_try, prob.free);
      if (r_try < r && dE <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(E)) {
        u.swap(trial);
        dens.swap(trial_dens);
        E = std::min(E, E + dE);
        g = g_try;
        r = r_try;
        ++rep.iterations;
        rep.energy_history.push_back(E);
        rep.residual_history.push_back(r);
        continue;
      }
      rep.message = "line search stalled";
      break;
    }

    u.swap(trial);
    dens.swap(trial_dens);
    E += dE;
    g = asmb.gradient(u);
    r = max_free_abs(g, prob.free);
    ++rep.iterations;
    rep.energy_history.push_back(E);
    rep.residual_history.push_back(r);
  }

  rep.converged = r <= rep.tolerance;
  if (rep.converged) {
    rep.message = "converged";
  } else if (rep.message.empty()) {
    rep.message = "iteration budget exhausted";
  }
  rep.final_energy = total(dens);
  rep.weak_residual = r;
  rep.gradient_cap_observed = asmb.cap(u);
  return {ScalarField(prob.grid, std::move(u)), rep};
}

double comparison_check(const DirichletProblem& prob_u, const DirichletProblem& prob_v) {
  prob_u.validate();
  prob_v.validate();
  if (!(*prob_u.grid == *prob_v.grid) || prob_u.free != prob_v.free) {
    throw std::invalid_argument("comparison_check: problems must share grid and domain");
  }
  if (prob_u.eps != prob_v.eps || prob_u.triple->structure().label != prob_v.triple->structure().label) {
    throw std::invalid_argument("comparison_check: problems must share the operator");
  }
  for (std::size_t i = 0; i < prob_u.free.size(); ++i) {
    if (!prob_u.free[i] && prob_u.u0.values[i] < prob_v.u0.values[i]) {
      throw std::invalid_argument("comparison_check: boundary data not ordered");
    }
  }
  const SolveResult su = solve_dirichlet(prob_u);
  const SolveResult sv = solve_dirichlet(prob_v);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prob_u.free.size(); ++i) {
    if (prob_u.free[i]) gap = std::min(gap, su.u.values[i] - sv.u.values[i]);
  }
  return gap;
}

AnalyticFunction barrier_function(std::span<const double> b, double K, const GroupPoint& base,
                                  const AnalyticFunction& u0, int sign) {
  const std::size_t d = base.dim();
  if (b.size() != d) throw std::invalid_argument("barrier: b has the wrong dimension");
  double bn = 0.0;
  for (double v : b) bn += v * v;
  if (std::abs(std::sqrt(bn) - 1.0) > 1e-12) throw std::invalid_argument("barrier: b must be a unit vector");
  const std::vector<double> y(base.coords().begin(), base.coords().end());
  std::vector<double> coeffs = u0.gradient(y);
  double c = u0.value(y);
  for (std::size_t i = 0; i < d; ++i) {
    coeffs[i] += (sign >= 0 ? 1.0 : -1.0) * K * b[i];
    c -= coeffs[i] * y[i];
  }
  AnalyticFunction L = affine_function(coeffs, c);
  L.label = "barrier";
  return L;
}

ScalarField barrier_field(GridPtr grid, std::span<const double> b, double K, const GroupPoint& base,
                          const AnalyticFunction& u0, int sign) {
  return ScalarField::sample(grid, barrier_function(b, K, base, u0, sign).value);
}

std::vector<BarrierLevel> barrier_residual_study(const AnalyticFunction& L, const OrliczTriple& triple,
                                                 int n, std::size_t base_nodes, int refinements) {
  if (!L.affine) throw std::invalid_argument("barrier_residual_study: L must be affine");
  if (refinements < 0) throw std::invalid_argument("barrier_residual_study: negative refinements");
  std::vector<BarrierLevel> out;
  std::size_t nodes = base_nodes;
  for (int k = 0; k <= refinements; ++k) {
    auto grid = Grid::cube(n, 1.0, nodes);
    DirichletProblem prob = make_problem(grid, triple, L, 0.0);
    if (triple.F_singular_at_zero() && Assembler(grid, linear_profile()).floor_norm(prob.u0.values) <= 1e-12) {
      throw std::domain_error("barrier_residual_study: |XL| vanishes on the grid; use eps > 0");
    }
    BarrierLevel lvl;
    lvl.nodes = nodes;
    lvl.h = grid->h_x();
    lvl.residual = weak_residual(prob.u0, prob);
    lvl.normalized = lvl.residual / grid->cell_volume();
    out.push_back(lvl);
    nodes = 2 * nodes - 1;
  }
  return out;
}

std::vector<double> observed_orders(std::span<const double> values) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) out.push_back(std::log2(values[k] / values[k + 1]));
  return out;
}

}  // namespace solab
