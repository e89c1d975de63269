#include "solab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace solab {

namespace {

using nlohmann::ordered_json;

// JSON has no inf/nan; they are stored as strings.
ordered_json real(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

ordered_json reals(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

ordered_json solve_json(const SolveReport& r) {
  ordered_json j;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["message"] = r.message;
  j["final_energy"] = real(r.final_energy);
  j["weak_residual"] = real(r.weak_residual);
  j["initial_residual"] = real(r.initial_residual);
  j["tolerance"] = real(r.tolerance);
  j["gradient_cap_observed"] = real(r.gradient_cap_observed);
  j["energy_history"] = reals(r.energy_history);
  j["residual_history"] = reals(r.residual_history);
  return j;
}

ordered_json audit_json(const AuditReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["gamma"] = real(r.gamma);
  j["omega"] = real(r.omega);
  j["lhs"] = real(r.lhs);
  j["rhs"] = real(r.rhs);
  j["fitted_constant"] = real(r.fitted_constant);
  j["h"] = real(r.h);
  j["degenerate"] = r.degenerate;
  j["refinement_history"] = reals(r.refinement_history);
  j["pass"] = r.pass;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_json(const SolveReport& r) { return dump(solve_json(r)); }

std::string to_json(const AuditReport& r) { return dump(audit_json(r)); }

std::string to_json(const std::vector<AuditReport>& rs) {
  ordered_json a = ordered_json::array();
  for (const auto& r : rs) a.push_back(audit_json(r));
  return dump(a);
}

std::string to_json(const StudyResult& s) {
  ordered_json j;
  j["all_converged"] = s.all_converged;
  j["lipschitz_variation"] = real(s.lipschitz_variation);
  ordered_json levels = ordered_json::array();
  for (const auto& l : s.levels) {
    ordered_json e;
    e["nodes"] = l.nodes;
    e["h"] = real(l.h);
    e["solve"] = solve_json(l.solve);
    e["lipschitz_ratio"] = real(l.lipschitz);
    ordered_json rows = ordered_json::array();
    for (const auto& m : l.moser.rows) {
      rows.push_back({{"level", m.level},
                      {"gamma", real(m.gamma)},
                      {"radius", real(m.radius)},
                      {"norm", real(m.norm)},
                      {"nodes", m.nodes}});
    }
    e["moser"] = {{"rows", rows}, {"inner_sup", real(l.moser.inner_sup)}, {"nondecreasing", l.moser.nondecreasing}};
    levels.push_back(e);
  }
  j["levels"] = levels;
  ordered_json audits = ordered_json::array();
  for (const auto& r : s.audits) audits.push_back(audit_json(r));
  j["audits"] = audits;
  return dump(j);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CsvWriter: empty header");
  row(header);
}

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
  return *this;
}

std::string CsvWriter::str() const { return out_; }

std::string audit_csv(const std::vector<AuditReport>& rs) {
  CsvWriter w({"name", "gamma", "omega", "lhs", "rhs", "fitted_constant", "h", "pass"});
  for (const auto& r : rs) {
    w.row({r.name, format_real(r.gamma), format_real(r.omega), format_real(r.lhs), format_real(r.rhs),
           format_real(r.fitted_constant), format_real(r.h), r.pass ? "1" : "0"});
  }
  return w.str();
}

std::string plot_data_csv(const StudyResult& s) {
  CsvWriter w({"name", "gamma", "omega", "level", "h", "fitted_constant"});
  for (const auto& r : s.audits) {
    for (std::size_t k = 0; k < r.refinement_history.size(); ++k) {
      const double h = k < s.levels.size() ? s.levels[k].h : r.h;
      w.row({r.name, format_real(r.gamma), format_real(r.omega), std::to_string(k), format_real(h),
             format_real(r.refinement_history[k])});
    }
  }
  return w.str();
}

std::string study_levels_csv(const StudyResult& s) {
  CsvWriter w({"nodes", "h", "iterations", "final_energy", "weak_residual", "converged", "lipschitz_ratio"});
  for (const auto& l : s.levels) {
    w.row({std::to_string(l.nodes), format_real(l.h), std::to_string(l.solve.iterations),
           format_real(l.solve.final_energy), format_real(l.solve.weak_residual), l.solve.converged ? "1" : "0",
           format_real(l.lipschitz)});
  }
  return w.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace solab
