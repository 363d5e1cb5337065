#pragma once

/// Residual reports with a stable JSON form. Everything that is hashed lives
/// under "body"; wall time sits outside it so reruns stay byte-identical.

#include "gaugeflow/grid_fields.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gaugeflow {

using json = nlohmann::json;

#ifndef GAUGEFLOW_VERSION
#define GAUGEFLOW_VERSION "0.0.0"
#endif
#ifndef GAUGEFLOW_DESCRIBE
#define GAUGEFLOW_DESCRIBE GAUGEFLOW_VERSION
#endif

inline std::string version_string() { return GAUGEFLOW_DESCRIBE; }

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// JSON has no inf/nan; keep them readable instead of null.
inline json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline json grid_json(const Grid2& g) {
  return {{"axes", {g.axis_labels[0], g.axis_labels[1]}},
          {"domain", {num(g.x0), num(g.x_max()), num(g.y0), num(g.y_max())}},
          {"n", {g.nx, g.ny}}};
}

struct ResidualEntry {
  std::string name;
  double linf = 0.0, l2 = 0.0;
  std::optional<double> order;
  /// Human-readable bound, e.g. "linf <= 1e-10" or "order 2 +- 0.3".
  std::string bound;
  bool pass = true;
  /// Informational rows are reported but do not enter the verdict.
  bool gating = true;

  json to_json() const {
    json j{{"name", name}, {"linf", num(linf)}, {"l2", num(l2)}, {"bound", bound}, {"pass", pass}};
    j["order"] = order ? num(*order) : json(nullptr);
    if (!gating) j["informational"] = true;
    return j;
  }
};

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Report {
  std::string scenario;
  json grid = json::object();
  json params = json::object();
  std::string convention = "calibrated";
  std::vector<ResidualEntry> residuals;
  json extra = json::object();
  double wall_time_s = 0.0;

  bool pass() const {
    for (const auto& r : residuals)
      if (r.gating && !r.pass) return false;
    return true;
  }

  /// linf <= tol.
  ResidualEntry& bound(const std::string& name, const Norms& n, double tol) {
    residuals.push_back({name, n.linf, n.l2, std::nullopt, "linf <= " + fmt_g(tol), n.linf <= tol});
    return residuals.back();
  }
  ResidualEntry& bound(const std::string& name, double v, double tol) { return bound(name, Norms{v, v}, tol); }

  /// Observed order between h and h/2 within target +- margin; norms of the fine run.
  ResidualEntry& order(const std::string& name, const Norms& coarse, const Norms& fine, bool use_l2 = false,
                       double target = 2.0, double margin = 0.3) {
    const double a = use_l2 ? coarse.l2 : coarse.linf, b = use_l2 ? fine.l2 : fine.linf;
    // a residual that is already zero has no order; report nan and fail
    const double p = a > 0.0 && b > 0.0 ? std::log2(a / b) : std::nan("");
    const std::string which = use_l2 ? "l2" : "linf";
    residuals.push_back({name, fine.linf, fine.l2, p,
                         which + " order " + fmt_g(target) + " +- " + fmt_g(margin),
                         std::abs(p - target) <= margin});
    return residuals.back();
  }

  /// |value - expected| <= rel |expected|.
  ResidualEntry& relative(const std::string& name, double value, double expected, double rel) {
    const double e = std::abs(value - expected);
    residuals.push_back({name, value, e, std::nullopt,
                         "within " + fmt_g(100 * rel) + "% of " + fmt_g(expected), e <= rel * std::abs(expected)});
    return residuals.back();
  }

  /// lo <= value <= hi.
  ResidualEntry& within(const std::string& name, double value, double lo, double hi) {
    residuals.push_back({name, value, value, std::nullopt, "in [" + fmt_g(lo) + ", " + fmt_g(hi) + "]",
                         value >= lo && value <= hi});
    return residuals.back();
  }

  ResidualEntry& info(const std::string& name, const Norms& n, std::optional<double> ord = std::nullopt) {
    residuals.push_back({name, n.linf, n.l2, ord, "informational", true, false});
    return residuals.back();
  }

  json body() const {
    json res = json::array();
    for (const auto& r : residuals) res.push_back(r.to_json());
    json b{{"scenario", scenario},
           {"grid", grid},
           {"params", params},
           {"residuals", res},
           {"convention", convention},
           {"verdict", pass() ? "pass" : "fail"}};
    if (!extra.empty()) b["details"] = extra;
    return b;
  }

  json to_json() const {
    const json b = body();
    return {{"schema", 1}, {"body", b}, {"body_digest", hex64(fnv1a(b.dump()))}, {"wall_time_s", wall_time_s}};
  }

  /// One row per residual; no timing so the output is reproducible.
  void write_csv(std::ostream& os) const {
    os << "scenario,name,linf,l2,order,bound,pass,gating\n";
    for (const auto& r : residuals)
      os << scenario << ',' << r.name << ',' << format_double(r.linf) << ',' << format_double(r.l2) << ','
         << (r.order ? format_double(*r.order) : std::string()) << ",\"" << r.bound << "\"," << (r.pass ? 1 : 0)
         << ',' << (r.gating ? 1 : 0) << '\n';
  }
};

}  // namespace gaugeflow
