#pragma once

// Serialization of solver and audit results: JSON records and flat CSV tables.
// Numbers are printed with 17 significant digits so that files round-trip.

#include <filesystem>
#include <string>
#include <vector>

#include "solab/solver.hpp"
#include "solab/verify.hpp"

namespace solab {

/// Shortest-safe decimal form with 17 significant digits; "inf", "-inf", "nan" otherwise.
std::string format_real(double v);

std::string to_json(const SolveReport& r);
std::string to_json(const AuditReport& r);
std::string to_json(const std::vector<AuditReport>& rs);
std::string to_json(const StudyResult& s);

/// Header: name,gamma,omega,lhs,rhs,fitted_constant,h,pass
std::string audit_csv(const std::vector<AuditReport>& rs);

/// One row per (audit, level): name,gamma,omega,level,h,fitted_constant.
std::string plot_data_csv(const StudyResult& s);

/// Header: nodes,h,iterations,final_energy,weak_residual,converged,lipschitz_ratio
std::string study_levels_csv(const StudyResult& s);

/// Simple CSV builder; cells are written verbatim.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& row(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::size_t width_;
  std::string out_;
};

/// Writes `content` to `path`, creating parent directories. Throws std::runtime_error.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace solab
