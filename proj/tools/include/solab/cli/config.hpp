#pragma once

// Experiment configuration for the solab command-line tool.
//
// Either a JSON object or key=value lines ('#' starts a comment). List values are
// JSON arrays, or ';'-separated in key=value form (labels contain commas).
//
//   structure   = power:p=3; loglin         default: the structure catalog
//   young       = square; xlogx             default: the Young catalog
//   n = 1, half_width = 1, resolutions = 17;33, boundary = oscillatory
//   eps = 1e-4, sigma = 0.5, r = 0.8, r_inner = 0.35, r_outer = 0.8
//   gammas = 1, omegas = 1, eps_sweep = 1e-2;1e-3, moser_levels = 8
//   max_iters = 100000, residual_tol = 0, seed = 42, samples = 1000, out = solab_out

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace solab::cli {

enum ExitCode : int { kPass = 0, kNumericFailure = 1, kConfigError = 2, kIoError = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<std::string> structures;
  std::vector<std::string> young;
  int n = 1;
  double half_width = 1.0;
  std::vector<std::size_t> resolutions{17, 33};
  std::string boundary = "oscillatory";
  double eps = 1e-4;
  double sigma = 0.5;
  double r = 0.8;
  double r_inner = 0.35;
  double r_outer = 0.8;
  std::vector<double> gammas{1.0};
  std::vector<double> omegas{1.0};
  std::vector<double> eps_sweep{1e-2, 1e-3};
  int moser_levels = 8;
  std::size_t max_iters = 100000;
  double residual_tol = 0.0;
  std::uint64_t seed = 42;
  std::size_t samples = 1000;
  std::filesystem::path out = "solab_out";
};

/// Throws ConfigError on syntax errors, unknown keys and malformed values.
ExperimentConfig parse_config(const std::string& text);
/// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Ranges and label resolution; throws ConfigError.
void validate(const ExperimentConfig& cfg);

/// `base` refined `k` times by halving the spacing (N -> 2N - 1).
std::vector<std::size_t> refinement_ladder(std::size_t base, int k);

}  // namespace solab::cli
