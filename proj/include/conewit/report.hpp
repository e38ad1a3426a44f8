#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "conewit/point.hpp"
#include "conewit/witness.hpp"

namespace conewit {

/// Deterministic decimal rendering used everywhere a number reaches a report,
/// so repeated runs at a fixed seed serialize byte-identically.
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string fmt_bool(bool b) { return b ? "true" : "false"; }

inline std::string fmt_values(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt_double(v[i]);
  }
  return s + "]";
}

inline std::string fmt_point(const Point& p) {
  if (const auto* c = std::get_if<Coordinates>(&p)) return fmt_values(c->values);
  if (const auto* g = std::get_if<GridFunction>(&p)) return fmt_values(g->values);
  const auto& m = std::get<SymMat>(p);
  std::string s = "[";
  for (int i = 0; i < m.n(); ++i) {
    if (i) s += ",";
    s += "[";
    for (int j = 0; j < m.n(); ++j) {
      if (j) s += ",";
      s += fmt_double(m.at(i, j));
    }
    s += "]";
  }
  return s + "]";
}

struct Assertion {
  std::string name;
  bool pass = false;
  std::string expected;
  std::string measured;
};

inline Assertion make_assertion(std::string name, bool pass, std::string expected,
                                std::string measured) {
  return Assertion{std::move(name), pass, std::move(expected), std::move(measured)};
}

struct ScenarioResult {
  std::string scenario;
  std::vector<Assertion> assertions;

  bool all_pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }
};

struct Report {
  std::uint64_t seed = 0;
  std::vector<ScenarioResult> results;
  /// Wall time of the run; excluded from canonical serializations so that
  /// reruns compare byte-identically.
  double elapsed_seconds = 0.0;

  bool all_pass() const {
    for (const auto& r : results)
      if (!r.all_pass()) return false;
    return true;
  }

  long failure_count() const {
    long n = 0;
    for (const auto& r : results)
      for (const auto& a : r.assertions)
        if (!a.pass) ++n;
    return n;
  }

  void sort() {
    std::stable_sort(results.begin(), results.end(),
                     [](const ScenarioResult& a, const ScenarioResult& b) {
                       return a.scenario < b.scenario;
                     });
  }

  void merge(Report other) {
    for (auto& r : other.results) results.push_back(std::move(r));
  }
};

inline nlohmann::json to_json(const Report& report) {
  nlohmann::json j;
  j["seed"] = report.seed;
  j["pass"] = report.all_pass();
  j["failures"] = report.failure_count();
  auto arr = nlohmann::json::array();
  for (const auto& r : report.results) {
    nlohmann::json rj;
    rj["scenario"] = r.scenario;
    rj["pass"] = r.all_pass();
    auto as = nlohmann::json::array();
    for (const auto& a : r.assertions) {
      as.push_back({{"name", a.name},
                    {"pass", a.pass},
                    {"expected", a.expected},
                    {"measured", a.measured}});
    }
    rj["assertions"] = std::move(as);
    arr.push_back(std::move(rj));
  }
  j["results"] = std::move(arr);
  return j;
}

inline std::string to_text(const Report& report) {
  std::string out;
  out += "seed " + std::to_string(report.seed) + "\n";
  for (const auto& r : report.results) {
    out += (r.all_pass() ? "[pass] " : "[FAIL] ") + r.scenario + "\n";
    for (const auto& a : r.assertions) {
      out += std::string("  ") + (a.pass ? "ok   " : "FAIL ") + a.name + ": expected " +
             a.expected + ", measured " + a.measured + "\n";
    }
  }
  out += report.all_pass() ? "all checks passed\n"
                           : (std::to_string(report.failure_count()) + " check(s) failed\n");
  return out;
}

inline std::string to_csv(const Report& report) {
  const auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out = "scenario,assertion,expected,measured,pass\n";
  for (const auto& r : report.results)
    for (const auto& a : r.assertions)
      out += quote(r.scenario) + "," + quote(a.name) + "," + quote(a.expected) + "," +
             quote(a.measured) + "," + (a.pass ? "true" : "false") + "\n";
  return out;
}

/// Flat key-value record of a witness search outcome.
inline nlohmann::json witness_to_json(const WitnessReport& w) {
  nlohmann::json j;
  j["found"] = w.found;
  j["strategy"] = strategy_name(w.strategy);
  j["attempts"] = w.attempts.total();
  j["attempts_direct"] = w.attempts.direct;
  j["attempts_boundary_functional"] = w.attempts.boundary_functional;
  j["attempts_extremal"] = w.attempts.extremal;
  j["attempts_scaling"] = w.attempts.scaling;
  j["y_margin"] = fmt_double(w.y_margin);
  j["x_margin"] = fmt_double(w.x_margin);
  j["witness_y"] = w.witness_y ? fmt_point(*w.witness_y) : "";
  j["preimage_x"] = w.preimage_x ? fmt_point(*w.preimage_x) : "";
  if (w.scaling_n) j["scaling_n"] = *w.scaling_n;
  return j;
}

}  // namespace conewit
