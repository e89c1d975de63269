#include "solab/catalog.hpp"

#include <boost/math/tools/minima.hpp>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace solab {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double take(const ParsedLabel& pl, const std::string& key, double fallback) {
  auto it = pl.params.find(key);
  return it == pl.params.end() ? fallback : it->second;
}

void allow_keys(const ParsedLabel& pl, std::initializer_list<const char*> keys) {
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : pl.params) {
    if (!ok.count(k)) throw std::invalid_argument("unknown parameter '" + k + "' for " + pl.name);
  }
}

// Extremum of f over [lo, hi] on a log grid, polished by Brent in log t.
double log_extremum(const std::function<double(double)>& f, double lo, double hi, int per_decade,
                    bool maximize) {
  const double sign = maximize ? -1.0 : 1.0;
  const double l0 = std::log(lo);
  const double l1 = std::log(hi);
  const int m = static_cast<int>(std::ceil((l1 - l0) / std::log(10.0) * per_decade));
  const double step = (l1 - l0) / m;
  int best = 0;
  double best_val = sign * f(lo);
  for (int i = 1; i <= m; ++i) {
    const double v = sign * f(std::exp(l0 + i * step));
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = l0 + std::max(best - 1, 0) * step;
  const double b = l0 + std::min(best + 1, m) * step;
  auto obj = [&](double l) { return sign * f(std::exp(l)); };
  const auto [lx, val] = boost::math::tools::brent_find_minima(obj, a, b, 52);
  return sign * std::min(val, best_val);
}

}  // namespace

ParsedLabel parse_label(const std::string& label) {
  ParsedLabel pl;
  const auto colon = label.find(':');
  pl.name = label.substr(0, colon);
  if (pl.name.empty()) throw std::invalid_argument("empty label");
  if (colon == std::string::npos) return pl;
  std::string rest = label.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    auto comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    const std::string item = rest.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("malformed parameter '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    double v = 0.0;
    auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size() || !std::isfinite(v)) {
      throw std::invalid_argument("bad number '" + val + "' in label");
    }
    pl.params[key] = v;
    pos = comma + 1;
  }
  return pl;
}

StructureFunction power_structure(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("power: need p > 1");
  StructureFunction g;
  g.eval = [p](double t) { return std::pow(t, p - 1.0); };
  g.deriv = [p](double t) { return (p - 1.0) * std::pow(t, p - 2.0); };
  g.antiderivative = [p](double t) { return std::pow(t, p) / p; };
  g.delta = p - 1.0;
  g.g0 = p - 1.0;
  g.label = "power:p=" + fmt(p);
  return g;
}

StructureFunction loglin_structure(double alpha, double beta, double a) {
  if (!(a >= 1.0)) throw std::invalid_argument("loglin: need a >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("loglin: need alpha > 0");
  const double la = std::log(a);
  auto lg = [a, la](double t) { return la + std::log1p(t / a); };
  auto h = [a, lg](double t) { return t / ((a + t) * lg(t)); };
  double hsup = log_extremum(h, 1e-12, 1e12, 200, true);
  if (a == 1.0) hsup = std::max(hsup, 1.0);
  StructureFunction g;
  g.delta = alpha + std::min(0.0, beta * hsup);
  g.g0 = alpha + std::max(0.0, beta * hsup);
  if (!(g.delta > 0.0)) throw std::invalid_argument("loglin: parameters give delta <= 0");
  g.eval = [alpha, beta, lg](double t) {
    if (t <= 0.0) return 0.0;
    return std::pow(t, alpha) * std::pow(lg(t), beta);
  };
  g.deriv = [alpha, beta, a, lg](double t) {
    const double L = lg(t);
    const double gt = std::pow(t, alpha) * std::pow(L, beta);
    return gt * (alpha / t + beta / ((a + t) * L));
  };
  if (alpha == 1.0 && beta == 1.0) {
    // G = t^2/2 log(a+t) - a^2 r(t/a)/2 with r(x) = log(1+x) - x + x^2/2.
    g.antiderivative = [a, lg](double t) {
      if (t <= 0.0) return 0.0;
      const double x = t / a;
      double r = 0.0;
      if (x < 0.1) {
        double term = x * x * x;
        for (int k = 3; k < 40; ++k, term *= -x) r += term / k;
      } else {
        r = std::log1p(x) - x + 0.5 * x * x;
      }
      return 0.5 * t * t * lg(t) - 0.5 * a * a * r;
    };
  }
  g.label = "loglin:alpha=" + fmt(alpha) + ",beta=" + fmt(beta) + ",a=" + fmt(a);
  return g;
}

StructureFunction osc_structure(double a, double b) {
  if (!(b > 0.0) || !(a >= 1.0 + b * std::numbers::sqrt2)) {
    throw std::invalid_argument("osc: need b > 0 and a >= 1 + b*sqrt(2)");
  }
  constexpr double e = std::numbers::e;
  const double ea = std::exp(a);
  StructureFunction g;
  g.eval = [a, b, ea](double t) {
    if (t <= 0.0) return 0.0;
    const double l1 = std::log1p(t / e);
    const double log_s = 1.0 + l1;
    const double L = std::log1p(l1);
    return ea * std::expm1(a * l1 + b * std::sin(L) * log_s);
  };
  g.deriv = [a, b](double t) {
    const double l1 = std::log1p(t / e);
    const double log_s = 1.0 + l1;
    const double L = std::log1p(l1);
    const double E = a + b * std::sin(L);
    return std::exp(E * log_s) * (E + b * std::cos(L)) / (e + t);
  };
  auto q = [ev = g.eval, dv = g.deriv](double t) { return t * dv(t) / ev(t); };
  g.delta = log_extremum(q, 1e-12, 1e12, 200, false) - 1e-6;
  g.g0 = log_extremum(q, 1e-12, 1e12, 200, true) + 1e-6;
  g.exponents_estimated = true;
  g.label = "osc:a=" + fmt(a) + ",b=" + fmt(b);
  return g;
}

StructureFunction glued_structure(double alpha, double beta, double eps, double k1, double k2) {
  if (!(eps > 0.0) || !(alpha - eps > 0.0) || !(beta >= alpha) || !(k1 > 0.0) || !(k2 > k1)) {
    throw std::invalid_argument("glued: need 0 < eps < alpha <= beta and 0 < k1 < k2");
  }
  const double p1 = alpha - eps;
  const double p3 = beta + eps;
  const double A = p1 / alpha * std::pow(k1, -eps);
  const double B = std::pow(k1, p1) * eps / alpha;
  const double v2 = A * std::pow(k2, alpha) + B;
  const double m2 = A * alpha * std::pow(k2, alpha - 1.0);
  const double C = m2 / (p3 * std::pow(k2, p3 - 1.0));
  const double D = v2 - C * std::pow(k2, p3);
  const double G1 = std::pow(k1, p1 + 1.0) / (p1 + 1.0);
  const double G2 = G1 + A * (std::pow(k2, alpha + 1.0) - std::pow(k1, alpha + 1.0)) / (alpha + 1.0) +
                    B * (k2 - k1);

  StructureFunction g;
  g.eval = [=](double t) {
    if (t <= 0.0) return 0.0;
    if (t <= k1) return std::pow(t, p1);
    if (t <= k2) return A * std::pow(t, alpha) + B;
    return C * std::pow(t, p3) + D;
  };
  g.deriv = [=](double t) {
    if (t <= k1) return p1 * std::pow(t, p1 - 1.0);
    if (t <= k2) return A * alpha * std::pow(t, alpha - 1.0);
    return C * p3 * std::pow(t, p3 - 1.0);
  };
  g.antiderivative = [=](double t) {
    if (t <= 0.0) return 0.0;
    if (t <= k1) return std::pow(t, p1 + 1.0) / (p1 + 1.0);
    if (t <= k2) {
      return G1 + A * (std::pow(t, alpha + 1.0) - std::pow(k1, alpha + 1.0)) / (alpha + 1.0) +
             B * (t - k1);
    }
    return G2 + C * (std::pow(t, p3 + 1.0) - std::pow(k2, p3 + 1.0)) / (p3 + 1.0) + D * (t - k2);
  };
  g.delta = p1;
  g.g0 = p3;
  g.label = "glued:alpha=" + fmt(alpha) + ",beta=" + fmt(beta) + ",eps=" + fmt(eps) +
            ",k1=" + fmt(k1) + ",k2=" + fmt(k2);
  return g;
}

StructureFunction make_structure(const std::string& label) {
  const ParsedLabel pl = parse_label(label);
  if (pl.name == "power") {
    allow_keys(pl, {"p"});
    if (!pl.params.count("p")) throw std::invalid_argument("power: missing p");
    return power_structure(pl.params.at("p"));
  }
  if (pl.name == "loglin") {
    allow_keys(pl, {"alpha", "beta", "a"});
    return loglin_structure(take(pl, "alpha", 1.0), take(pl, "beta", 1.0),
                            take(pl, "a", std::numbers::e));
  }
  if (pl.name == "osc") {
    allow_keys(pl, {"a", "b"});
    return osc_structure(take(pl, "a", 2.0), take(pl, "b", 0.5));
  }
  if (pl.name == "glued") {
    allow_keys(pl, {"alpha", "beta", "eps", "k1", "k2"});
    return glued_structure(take(pl, "alpha", 1.5), take(pl, "beta", 2.5), take(pl, "eps", 0.5),
                           take(pl, "k1", 1.0), take(pl, "k2", 2.0));
  }
  throw std::invalid_argument("unknown structure function '" + pl.name + "'");
}

YoungFunction young_square() {
  return YoungFunction([](double s) { return s; }, [](double t) { return 0.5 * t * t; }, "square",
                       true, 4.0);
}

YoungFunction young_xlogx() {
  return YoungFunction([](double s) { return std::log1p(s); },
                       [](double t) { return (1.0 + t) * std::log1p(t) - t; }, "xlogx", true, 4.0);
}

YoungFunction young_exp() {
  return YoungFunction([](double s) { return std::expm1(s); },
                       [](double t) { return std::expm1(t) - t; }, "exp", true, std::nullopt);
}

YoungFunction young_linear() {
  return YoungFunction([](double s) { return s > 0.0 ? 1.0 : 0.0; }, [](double t) { return t; },
                       "linear", false, 2.0);
}

YoungFunction make_young(const std::string& label) {
  if (label == "square") return young_square();
  if (label == "xlogx") return young_xlogx();
  if (label == "exp") return young_exp();
  if (label == "linear") return young_linear();
  return young_from_structure(make_structure(label));
}

std::vector<std::string> structure_catalog() {
  return {"power:p=1.5", "power:p=2",   "power:p=3",  "power:p=4",
          "loglin:alpha=1,beta=1,a=2.718281828459045", "loglin:alpha=1,beta=1,a=1",
          "osc:a=2,b=0.5", "glued:alpha=1.5,beta=2.5,eps=0.5,k1=1,k2=2"};
}

std::vector<std::string> young_catalog() {
  return {"square", "xlogx", "exp", "power:p=1.5", "power:p=3", "loglin:alpha=1,beta=1,a=1"};
}

}  // namespace solab
