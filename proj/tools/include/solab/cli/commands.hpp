#pragma once

// Subcommands of the solab tool. Each writes its report files under cfg.out and
// returns an ExitCode.

#include "solab/cli/config.hpp"

namespace solab::cli {

/// Exponents, doubling, g/G inequality pairs, Young gaps, conjugate round trips, Luxemburg norms.
int cmd_orlicz_check(const ExperimentConfig& cfg);
/// Structure margins, monotonicity, ellipticity, Jacobian check and the eps sweep.
int cmd_operator_check(const ExperimentConfig& cfg);
/// Solves on the finest configured resolution and dumps the solution.
int cmd_solve(const ExperimentConfig& cfg);
/// Refinement study with every audit plus the estimate.
int cmd_audit(const ExperimentConfig& cfg);
/// Refinement study restricted to lipschitz_ratio and moser_trace.
int cmd_estimate(const ExperimentConfig& cfg);

/// Parses argv, loads the config and dispatches.
int run(int argc, char** argv);

}  // namespace solab::cli
