#include "solab/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "solab/boundary.hpp"
#include "solab/catalog.hpp"

namespace solab::cli {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': not a number: " + v);
  }
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError("'" + key + "': not a nonnegative integer: " + v);
  return x;
}

// Every key becomes a list of strings; scalars are one-element lists.
using RawConfig = std::map<std::string, std::vector<std::string>>;

RawConfig raw_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("JSON config must be an object");
  RawConfig raw;
  auto scalar = [](const std::string& key, const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) {
      std::ostringstream os;
      os.precision(17);
      os << v.get<double>();
      return os.str();
    }
    throw ConfigError("'" + key + "': unsupported value type");
  };
  for (const auto& [key, v] : j.items()) {
    auto& list = raw[key];
    if (v.is_array()) {
      for (const auto& e : v) list.push_back(scalar(key, e));
    } else {
      list.push_back(scalar(key, v));
    }
  }
  return raw;
}

RawConfig raw_from_lines(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (raw.count(key)) throw ConfigError("duplicate key '" + key + "'");
    raw[key] = split(line.substr(eq + 1), ';');
  }
  return raw;
}

const std::string& single(const std::string& key, const std::vector<std::string>& v) {
  if (v.size() != 1) throw ConfigError("'" + key + "' takes a single value");
  return v.front();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  const std::string body = trim(text);
  const RawConfig raw = !body.empty() && body.front() == '{' ? raw_from_json(body) : raw_from_lines(body);
  ExperimentConfig cfg;
  for (const auto& [key, v] : raw) {
    if (key == "structure" || key == "structures") {
      cfg.structures = v;
    } else if (key == "young") {
      cfg.young = v;
    } else if (key == "n") {
      cfg.n = static_cast<int>(to_count(key, single(key, v)));
    } else if (key == "half_width") {
      cfg.half_width = to_real(key, single(key, v));
    } else if (key == "resolutions") {
      cfg.resolutions.clear();
      for (const auto& s : v) cfg.resolutions.push_back(to_count(key, s));
    } else if (key == "boundary") {
      cfg.boundary = single(key, v);
    } else if (key == "eps") {
      cfg.eps = to_real(key, single(key, v));
    } else if (key == "sigma") {
      cfg.sigma = to_real(key, single(key, v));
    } else if (key == "r") {
      cfg.r = to_real(key, single(key, v));
    } else if (key == "r_inner") {
      cfg.r_inner = to_real(key, single(key, v));
    } else if (key == "r_outer") {
      cfg.r_outer = to_real(key, single(key, v));
    } else if (key == "gammas") {
      cfg.gammas.clear();
      for (const auto& s : v) cfg.gammas.push_back(to_real(key, s));
    } else if (key == "omegas") {
      cfg.omegas.clear();
      for (const auto& s : v) cfg.omegas.push_back(to_real(key, s));
    } else if (key == "eps_sweep") {
      cfg.eps_sweep.clear();
      for (const auto& s : v) cfg.eps_sweep.push_back(to_real(key, s));
    } else if (key == "moser_levels") {
      cfg.moser_levels = static_cast<int>(to_count(key, single(key, v)));
    } else if (key == "max_iters") {
      cfg.max_iters = to_count(key, single(key, v));
    } else if (key == "residual_tol") {
      cfg.residual_tol = to_real(key, single(key, v));
    } else if (key == "seed") {
      cfg.seed = to_count(key, single(key, v));
    } else if (key == "samples") {
      cfg.samples = to_count(key, single(key, v));
    } else if (key == "out") {
      cfg.out = single(key, v);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 3) throw ConfigError("n must lie in 1..3");
  if (!(cfg.half_width > 0.0)) throw ConfigError("half_width must be positive");
  if (cfg.resolutions.empty()) throw ConfigError("resolutions must not be empty");
  for (std::size_t r : cfg.resolutions) {
    if (r < 9) throw ConfigError("resolutions must be >= 9 per axis");
  }
  if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) throw ConfigError("sigma must lie in (0,1)");
  if (!(cfg.eps >= 0.0 && cfg.eps < 1.0)) throw ConfigError("eps must lie in [0,1)");
  for (double e : cfg.eps_sweep) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("eps_sweep entries must lie in (0,1)");
  }
  if (!(cfg.r > 0.0)) throw ConfigError("r must be positive");
  if (!(cfg.r_inner > 0.0 && cfg.r_outer > cfg.r_inner)) throw ConfigError("need 0 < r_inner < r_outer");
  if (cfg.gammas.empty() || cfg.omegas.empty()) throw ConfigError("gammas and omegas must not be empty");
  for (double g : cfg.gammas) {
    if (!(g >= 1.0)) throw ConfigError("gammas must be >= 1");
  }
  for (double w : cfg.omegas) {
    if (!(w >= 1.0)) throw ConfigError("omegas must be >= 1");
  }
  if (cfg.moser_levels < 2) throw ConfigError("moser_levels must be >= 2");
  if (cfg.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(cfg.residual_tol >= 0.0)) throw ConfigError("residual_tol must be >= 0");
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  try {
    for (const auto& s : cfg.structures) make_structure(s);
    for (const auto& y : cfg.young) make_young(y);
    make_boundary(cfg.boundary, cfg.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::size_t> refinement_ladder(std::size_t base, int k) {
  if (k < 0) throw ConfigError("refinements must be >= 0");
  std::vector<std::size_t> out{base};
  for (int i = 0; i < k; ++i) out.push_back(2 * out.back() - 1);
  return out;
}

}  // namespace solab::cli
