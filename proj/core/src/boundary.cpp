#include "solab/boundary.hpp"

#include <cmath>
#include <stdexcept>

#include "solab/catalog.hpp"

namespace solab {

AnalyticFunction affine_function(std::vector<double> coeffs, double constant) {
  if (coeffs.size() < 3 || coeffs.size() % 2 == 0) throw std::invalid_argument("affine: need 2n+1 coefficients");
  AnalyticFunction f;
  f.value = [coeffs, constant](std::span<const double> x) {
    double v = constant;
    for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * x[i];
    return v;
  };
  f.gradient = [coeffs](std::span<const double>) { return coeffs; };
  f.t_independent = coeffs.back() == 0.0;
  f.affine = true;
  f.label = "affine";
  return f;
}

AnalyticFunction make_boundary(const std::string& label, int n) {
  const ParsedLabel pl = parse_label(label);
  const std::size_t d = static_cast<std::size_t>(2 * n + 1);
  auto get = [&](const std::string& k, double fallback) {
    auto it = pl.params.find(k);
    return it == pl.params.end() ? fallback : it->second;
  };

  if (pl.name == "affine") {
    std::vector<double> a(d, 0.0);
    for (const auto& [k, v] : pl.params) {
      if (k == "c") continue;
      if (k == "at") {
        a.back() = v;
        continue;
      }
      std::size_t idx = 0;
      if (k.size() < 2 || k[0] != 'a' || (idx = std::stoul(k.substr(1))) < 1 || idx > 2 * static_cast<std::size_t>(n)) {
        throw std::invalid_argument("affine: unknown key '" + k + "'");
      }
      a[idx - 1] = v;
    }
    AnalyticFunction f = affine_function(a, get("c", 0.0));
    f.label = label;
    return f;
  }

  if (pl.name == "oscillatory") {
    for (const auto& [k, v] : pl.params) {
      if (k != "k" && k != "amp" && k != "tcoef" && k != "shift") {
        throw std::invalid_argument("oscillatory: unknown key '" + k + "'");
      }
    }
    const double k = get("k", 2.0), amp = get("amp", 1.0), tc = get("tcoef", 0.5), sh = get("shift", 0.0);
    const std::size_t j = static_cast<std::size_t>(n);
    AnalyticFunction f;
    f.value = [=](std::span<const double> x) {
      return sh + amp * std::sin(k * x[0]) * std::cos(k * x[j]) + tc * std::sin(k * x[d - 1]);
    };
    f.gradient = [=](std::span<const double> x) {
      std::vector<double> g(d, 0.0);
      g[0] = amp * k * std::cos(k * x[0]) * std::cos(k * x[j]);
      g[j] = -amp * k * std::sin(k * x[0]) * std::sin(k * x[j]);
      g[d - 1] = tc * k * std::cos(k * x[d - 1]);
      return g;
    };
    f.t_independent = tc == 0.0;
    f.label = label;
    return f;
  }

  if (pl.name == "quadratic") {
    for (const auto& [k, v] : pl.params) {
      if (k != "a" && k != "b" && k != "ct" && k != "shift") {
        throw std::invalid_argument("quadratic: unknown key '" + k + "'");
      }
    }
    const double a = get("a", 1.0), b = get("b", -1.0), ct = get("ct", 0.0), sh = get("shift", 0.0);
    const std::size_t j = static_cast<std::size_t>(n);
    AnalyticFunction f;
    f.value = [=](std::span<const double> x) {
      return sh + a * x[0] * x[0] + b * x[j] * x[j] + ct * x[d - 1];
    };
    f.gradient = [=](std::span<const double> x) {
      std::vector<double> g(d, 0.0);
      g[0] = 2.0 * a * x[0];
      g[j] = 2.0 * b * x[j];
      g[d - 1] = ct;
      return g;
    };
    f.t_independent = ct == 0.0;
    f.label = label;
    return f;
  }

  throw std::invalid_argument("unknown boundary family '" + pl.name + "'");
}

}  // namespace solab
