#pragma once

// Numerical audits of Caccioppoli-type and sup-bound inequalities on computed
// solutions. Each audit evaluates both sides on the grid and reports their
// ratio; constants are fitted, never asserted.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solab/boundary.hpp"
#include "solab/grid.hpp"
#include "solab/orlicz.hpp"
#include "solab/solver.hpp"

namespace solab {

/// Energy density G and coefficient F = phi/t of the operator actually solved.
struct AuditProfile {
  RealFn G;
  RealFn F;
  double g0 = 1.0;

  /// The eps-regularized pair when eps > 0, else (G, F) of the triple.
  static AuditProfile from(const OrliczTriple& triple, double eps);
};

struct AuditReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double fitted_constant = 0.0;  ///< lhs / rhs; 0 when degenerate
  double gamma = 0.0;
  double omega = 1.0;
  double h = 0.0;
  bool degenerate = false;  ///< both sides below 1e-14
  std::vector<double> refinement_history;
  bool pass = false;
};

AuditReport caccioppoli_T_audit(const ScalarField& u, const AuditProfile& prof, const CutoffFunction& eta,
                                double gamma);
AuditReport caccioppoli_X_audit(const ScalarField& u, const AuditProfile& prof, const CutoffFunction& eta,
                                double gamma);
AuditReport reverse_audit(const ScalarField& u, const AuditProfile& prof, const CutoffFunction& eta,
                          double gamma, double omega);
AuditReport horizontal_estimate_audit(const ScalarField& u, const AuditProfile& prof,
                                      const CutoffFunction& eta, double gamma);
AuditReport vertical_estimate_audit(const ScalarField& u, const AuditProfile& prof,
                                    const CutoffFunction& eta, double gamma);

/// Merges one report per refinement level (coarse to fine) into the finest report.
/// Passes iff every level passes and consecutive fitted constants differ by at most
/// `band` times; all-degenerate histories pass, and so do consecutive levels whose lhs
/// is below 1e-12 (1 + rhs).
AuditReport finalize_refinement(const std::vector<AuditReport>& levels, double band = 2.0);

/// sup_{B_{sigma r}} G(|Xu|) (1 - sigma)^Q / avg_{B_r} G(|Xu|), balls in the norm gauge.
double lipschitz_ratio(const ScalarField& u, const AuditProfile& prof, std::span<const double> center,
                       double r, double sigma);

struct MoserSchedule {
  double kappa = 0.0;
  std::vector<double> gamma;
  std::vector<double> radii;
};

MoserSchedule make_moser_schedule(int Q, double r, double sigma, int levels);

struct MoserRow {
  int level = 0;
  double gamma = 0.0;
  double radius = 0.0;
  double norm = 0.0;  ///< (avg_{B_{r_i}} w^{gamma+2})^{1/(gamma+2)}, w = G(|Xu|)
  std::size_t nodes = 0;
};

struct MoserTrace {
  std::vector<MoserRow> rows;
  double inner_sup = 0.0;  ///< max of w over B_{sigma r}
  bool nondecreasing = false;
};

MoserTrace moser_trace(const ScalarField& u, const AuditProfile& prof, std::span<const double> center,
                       double r, double sigma, int levels);

/// One boundary-value problem solved on a sequence of grids, then audited.
struct StudyConfig {
  int n = 1;
  double half_width = 1.0;
  std::vector<std::size_t> resolutions{17, 33};
  AnalyticFunction boundary;
  double eps = 1e-4;
  double residual_tol = 0.0;
  std::size_t max_iters = 100000;
  std::vector<double> gammas{1.0};
  std::vector<double> omegas{1.0};
  double r_inner = 0.35;
  double r_outer = 0.8;
  double r = 0.8;
  double sigma = 0.5;
  int moser_levels = 8;
  bool audits = true;
  bool estimate = true;
};

struct StudyLevel {
  std::size_t nodes = 0;
  double h = 0.0;
  SolveReport solve;
  double lipschitz = 0.0;
  MoserTrace moser;
};

struct StudyResult {
  std::vector<StudyLevel> levels;
  std::vector<AuditReport> audits;  ///< finalized across levels
  double lipschitz_variation = 0.0;  ///< max relative change between consecutive levels
  bool all_converged = false;
};

StudyResult run_study(const OrliczTriple& triple, const StudyConfig& cfg);

/// Every audit at one level; used by run_study and by callers with their own fields.
std::vector<AuditReport> audit_all(const ScalarField& u, const AuditProfile& prof, const CutoffFunction& eta,
                                   std::span<const double> gammas, std::span<const double> omegas);

}  // namespace solab
