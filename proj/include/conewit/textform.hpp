#pragma once

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "conewit/cone.hpp"
#include "conewit/maps.hpp"
#include "conewit/report.hpp"
#include "conewit/scenario.hpp"

namespace conewit {

// ---------------------------------------------------------------------------
// Canonical text forms, e.g. `orthant:4`, `ray:3:[1,0,0]`,
// `f=spindual:[0.6,0.8]`, `S=permdiag:(2,1):(0.5,2)`, `u=point:[0,1]`.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> parse_number_list(const std::string& s, const char* what) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    raise(Errc::ParseError, std::string(what) + ": expected [a,b,...], got '" + s + "'");
  std::vector<double> out;
  std::size_t i = 1;
  while (i < s.size() - 1) {
    const char* begin = s.c_str() + i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) raise(Errc::ParseError, std::string(what) + ": bad number in '" + s + "'");
    out.push_back(v);
    i = static_cast<std::size_t>(end - s.c_str());
    if (i < s.size() - 1) {
      if (s[i] != ',') raise(Errc::ParseError, std::string(what) + ": expected ',' in '" + s + "'");
      ++i;
    }
  }
  if (out.empty()) raise(Errc::ParseError, std::string(what) + ": empty list");
  return out;
}

inline std::vector<std::vector<double>> parse_matrix(const std::string& s, const char* what) {
  if (s.size() < 4 || s.front() != '[' || s.back() != ']')
    raise(Errc::ParseError, std::string(what) + ": expected [[...],[...]]");
  std::vector<std::vector<double>> rows;
  std::size_t i = 1;
  while (i < s.size() - 1) {
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] != '[') raise(Errc::ParseError, std::string(what) + ": expected row start");
    const std::size_t close = s.find(']', i);
    if (close == std::string::npos) raise(Errc::ParseError, std::string(what) + ": unbalanced row");
    rows.push_back(parse_number_list(s.substr(i, close - i + 1), what));
    i = close + 1;
  }
  if (rows.empty()) raise(Errc::ParseError, std::string(what) + ": empty matrix");
  return rows;
}

inline std::vector<double> parse_paren_list(const std::string& s, const char* what) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    raise(Errc::ParseError, std::string(what) + ": expected (a,b,...), got '" + s + "'");
  return parse_number_list("[" + s.substr(1, s.size() - 2) + "]", what);
}

/// Splits on ':' but never inside brackets or parentheses.
inline std::vector<std::string> split_fields(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == ':' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline int parse_int(const std::string& s, const char* what) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty())
    raise(Errc::ParseError, std::string(what) + ": bad integer '" + s + "'");
  return static_cast<int>(v);
}

inline double parse_real(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    raise(Errc::ParseError, std::string(what) + ": bad number '" + s + "'");
  return v;
}

}  // namespace detail

inline ConeSpec parse_cone(const std::string& text) {
  const auto fields = detail::split_fields(text);
  const std::string& kind = fields[0];
  if (kind == "orthant" && fields.size() == 2)
    return make_orthant(detail::parse_int(fields[1], "orthant"));
  if (kind == "lorentz" && fields.size() == 2)
    return make_lorentz(detail::parse_int(fields[1], "lorentz"));
  if (kind == "psd" && fields.size() == 2) return make_psd(detail::parse_int(fields[1], "psd"));
  if (kind == "copositive" && fields.size() == 2)
    return make_copositive(detail::parse_int(fields[1], "copositive"));
  if (kind == "lex" && fields.size() == 1) return make_lex();
  if (kind == "ray" && fields.size() == 3)
    return make_ray(detail::parse_int(fields[1], "ray"),
                    detail::parse_number_list(fields[2], "ray direction"));
  if (kind == "grid" && fields.size() == 2)
    return make_grid_cone(Grid(detail::parse_number_list(fields[1], "grid nodes")));
  raise(Errc::ParseError, "unknown cone '" + text + "'");
}

inline std::string cone_to_text(const ConeSpec& cone) {
  if (const auto* c = std::get_if<OrthantCone>(&cone)) return "orthant:" + std::to_string(c->n);
  if (const auto* c = std::get_if<LorentzCone>(&cone)) return "lorentz:" + std::to_string(c->d);
  if (const auto* c = std::get_if<PsdCone>(&cone)) return "psd:" + std::to_string(c->n);
  if (const auto* c = std::get_if<CopositiveCone>(&cone))
    return "copositive:" + std::to_string(c->n);
  if (std::holds_alternative<LexCone>(cone)) return "lex";
  if (const auto* c = std::get_if<RayCone>(&cone))
    return "ray:" + std::to_string(c->n) + ":" + fmt_values(c->direction);
  return "grid:" + fmt_values(std::get<GridCone>(cone).grid.nodes());
}

namespace detail {

inline const Grid* cone_grid(const ConeSpec& cone) {
  if (const auto* c = std::get_if<GridCone>(&cone)) return &c->grid;
  return nullptr;
}

inline int cone_matrix_dim(const ConeSpec& cone) {
  if (const auto* c = std::get_if<PsdCone>(&cone)) return c->n;
  if (const auto* c = std::get_if<CopositiveCone>(&cone)) return c->n;
  return 0;
}

}  // namespace detail

/// Functionals are parsed in the context of a cone: `trace`, `trapezoid` and
/// `eval@K` take their dimension or grid from it.
inline Functional parse_functional(const std::string& text, const ConeSpec& cone) {
  const auto fields = detail::split_fields(text);
  const std::string& kind = fields[0];
  if (kind == "covector" && fields.size() == 2)
    return covector(detail::parse_number_list(fields[1], "covector"));
  if (kind == "spindual" && fields.size() == 2)
    return spin_dual(detail::parse_number_list(fields[1], "spindual"));
  if (kind == "trace" && fields.size() == 1) {
    const int n = detail::cone_matrix_dim(cone);
    if (n == 0) raise(Errc::ParseError, "'trace' needs a matrix cone");
    return trace_form(SymMat::identity(n));
  }
  if (kind == "traceform" && fields.size() == 2)
    return trace_form(SymMat::from_rows(detail::parse_matrix(fields[1], "traceform")));
  if (kind == "cpform" && fields.size() == 2)
    return cp_form(detail::parse_matrix(fields[1], "cpform"));
  if (kind == "trapezoid" && fields.size() == 1) {
    const Grid* g = detail::cone_grid(cone);
    if (!g) raise(Errc::ParseError, "'trapezoid' needs a grid cone");
    return trapezoid(*g);
  }
  if (kind.rfind("eval@", 0) == 0 && fields.size() == 1) {
    const Grid* g = detail::cone_grid(cone);
    if (!g) raise(Errc::ParseError, "'eval@K' needs a grid cone");
    return point_eval(*g, detail::parse_int(kind.substr(5), "eval node"));
  }
  if (kind == "lexfirst" && fields.size() == 1) return lex_first();
  raise(Errc::ParseError, "unknown functional '" + text + "'");
}

inline std::string functional_to_text(const Functional& f) {
  if (const auto* dc = std::get_if<DenseCovector>(&f)) return "covector:" + fmt_values(dc->values);
  if (const auto* sd = std::get_if<SpinDual>(&f)) return "spindual:" + fmt_values(sd->xhat);
  if (const auto* tf = std::get_if<TraceForm>(&f)) {
    bool is_identity = true;
    for (int i = 0; i < tf->b.n() && is_identity; ++i)
      for (int j = 0; j < tf->b.n() && is_identity; ++j)
        if (tf->b.at(i, j) != (i == j ? 1.0 : 0.0)) is_identity = false;
    if (is_identity) return "trace";
    std::string s = "traceform:[";
    for (int i = 0; i < tf->b.n(); ++i) {
      if (i) s += ",";
      std::vector<double> row(tf->b.n());
      for (int j = 0; j < tf->b.n(); ++j) row[j] = tf->b.at(i, j);
      s += fmt_values(row);
    }
    return s + "]";
  }
  if (const auto* cf = std::get_if<CPForm>(&f)) {
    std::string s = "cpform:[";
    for (std::size_t i = 0; i < cf->vs.size(); ++i) {
      if (i) s += ",";
      s += fmt_values(cf->vs[i]);
    }
    return s + "]";
  }
  if (std::holds_alternative<TrapezoidIntegral>(f)) return "trapezoid";
  if (const auto* pe = std::get_if<PointEvaluation>(&f)) return "eval@" + std::to_string(pe->node);
  if (std::holds_alternative<LexFirstCoord>(f)) return "lexfirst";
  return "composed";
}

/// Points: `point:[...]`/`nodes:[...]` for coordinate and grid cones,
/// `mat:[[...]]` for matrix cones, `unit` for the canonical member.
inline Point parse_point(const std::string& text, const ConeSpec& cone) {
  const auto fields = detail::split_fields(text);
  const std::string& kind = fields[0];
  if (kind == "unit" && fields.size() == 1) return canonical_cone_point(cone);
  if ((kind == "point" || kind == "nodes") && fields.size() == 2) {
    auto values = detail::parse_number_list(fields[1], "point");
    if (const Grid* g = detail::cone_grid(cone)) return grid_fn(*g, std::move(values));
    if (detail::cone_matrix_dim(cone) > 0)
      raise(Errc::ParseError, "matrix cone points need mat:[[...]]");
    return coords(std::move(values));
  }
  if (kind == "mat" && fields.size() == 2)
    return SymMat::from_rows(detail::parse_matrix(fields[1], "mat"));
  raise(Errc::ParseError, "unknown point '" + text + "'");
}

inline std::string point_to_text(const Point& p) {
  if (const auto* c = std::get_if<Coordinates>(&p)) return "point:" + fmt_values(c->values);
  if (const auto* g = std::get_if<GridFunction>(&p)) return "nodes:" + fmt_values(g->values);
  return "mat:" + fmt_point(p);
}

/// Maps: `identity`, `permdiag:(images...):(scales...)` (1-based images),
/// `spinauto:[[Q]]:rho`, `congruence:[[M]]`, `dense:[[M]]`, `lextri:(a,c,d)`,
/// `sample:SEED` for a seeded draw from the cone's automorphism family.
inline LinearMap parse_map(const std::string& text, const ConeSpec& cone) {
  const auto fields = detail::split_fields(text);
  const std::string& kind = fields[0];
  if (kind == "identity" && fields.size() == 1) return identity_map();
  if (kind == "permdiag" && fields.size() == 3) {
    const auto images = detail::parse_paren_list(fields[1], "permdiag images");
    std::vector<int> perm(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) perm[i] = static_cast<int>(images[i]) - 1;
    return perm_diag(std::move(perm), detail::parse_paren_list(fields[2], "permdiag scales"));
  }
  if (kind == "spinauto" && fields.size() == 3)
    return spin_auto(detail::parse_matrix(fields[1], "spinauto"),
                     detail::parse_real(fields[2], "spinauto rho"));
  if (kind == "congruence" && fields.size() == 2)
    return congruence(detail::parse_matrix(fields[1], "congruence"));
  if (kind == "dense" && fields.size() == 2)
    return dense_map(detail::parse_matrix(fields[1], "dense"));
  if (kind == "lextri" && fields.size() == 2) {
    const auto abc = detail::parse_paren_list(fields[1], "lextri");
    if (abc.size() != 3) raise(Errc::ParseError, "lextri needs (a,c,d)");
    return lex_triangular(abc[0], abc[1], abc[2]);
  }
  if (kind == "sample" && fields.size() == 2) {
    RngStream rng(static_cast<std::uint64_t>(detail::parse_int(fields[1], "sample seed")));
    return sample_automorphism(cone, rng);
  }
  raise(Errc::ParseError, "unknown map '" + text + "'");
}

// ---------------------------------------------------------------------------
// Flat key-value config files (TOML-style: comments, optional [sections],
// `key = value` lines).
// ---------------------------------------------------------------------------

struct ConfigEntry {
  std::string value;
  int line = 0;
  int col = 0;
};

struct ConfigFile {
  std::map<std::string, ConfigEntry> entries;

  bool has(const std::string& key) const { return entries.count(key) > 0; }

  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second.value;
  }
};

inline ConfigFile parse_config_text(const std::string& text) {
  ConfigFile cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    ++line_no;
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;

    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    const std::string body = line.substr(a, b - a + 1);
    if (body.front() == '[' && body.back() == ']') continue;  // section headers are cosmetic

    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      raise(Errc::ParseError, "line " + std::to_string(line_no) + ", col " +
                                  std::to_string(a + 1) + ": expected 'key = value'");
    std::string key = body.substr(0, eq);
    std::string value = body.substr(eq + 1);
    const auto trim = [](std::string& s) {
      const std::size_t x = s.find_first_not_of(" \t");
      const std::size_t y = s.find_last_not_of(" \t");
      s = x == std::string::npos ? "" : s.substr(x, y - x + 1);
    };
    trim(key);
    trim(value);
    if (key.empty())
      raise(Errc::ParseError,
            "line " + std::to_string(line_no) + ", col " + std::to_string(a + 1) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    cfg.entries[key] = ConfigEntry{value, line_no, static_cast<int>(a + eq + 2)};
  }
  return cfg;
}

/// Builds a runnable scenario from a parsed config. Value-level errors are
/// re-raised with the offending key's line/column attached.
inline Scenario scenario_from_config(const ConfigFile& cfg) {
  const auto located = [&](const std::string& key) -> std::string {
    const auto it = cfg.entries.find(key);
    if (it == cfg.entries.end()) return key;
    return key + " (line " + std::to_string(it->second.line) + ", col " +
           std::to_string(it->second.col) + ")";
  };
  if (!cfg.has("cone")) raise(Errc::ParseError, "config needs a 'cone' key");

  Scenario sc;
  sc.name = cfg.get("name", "config-scenario");
  try {
    sc.cone = parse_cone(cfg.get("cone", ""));
  } catch (const Error& e) {
    raise(Errc::ParseError, located("cone") + ": " + e.what());
  }
  const auto parse_with = [&](const std::string& key, auto&& fn, auto&& fallback) {
    using Out = decltype(fallback());
    if (!cfg.has(key)) return Out(fallback());
    try {
      return Out(fn(cfg.get(key, "")));
    } catch (const Error& e) {
      raise(Errc::ParseError, located(key) + ": " + e.what());
    }
  };
  sc.s = parse_with(
      "S", [&](const std::string& v) { return parse_map(v, sc.cone); },
      [] { return identity_map(); });
  sc.f = parse_with(
      "f", [&](const std::string& v) { return parse_functional(v, sc.cone); },
      [&]() -> Functional { raise(Errc::ParseError, "config needs an 'f' key"); });
  sc.u = parse_with(
      "u", [&](const std::string& v) { return parse_point(v, sc.cone); },
      [&] { return canonical_cone_point(sc.cone); });
  sc.budget = cfg.has("budget") ? detail::parse_int(cfg.get("budget", ""), "budget") : 10000;
  sc.tol = cfg.has("tol") ? detail::parse_real(cfg.get("tol", ""), "tol") : 1e-9;

  const std::string expect = cfg.get("expect", "witness-found");
  if (cfg.get("expect_positive", "true") == "true") sc.expectations.push_back(ExpectPositive{2000});
  if (cfg.has("expect_inverse_residual"))
    sc.expectations.push_back(ExpectInverseResidual{
        detail::parse_real(cfg.get("expect_inverse_residual", ""), "expect_inverse_residual"), 100});
  else
    sc.expectations.push_back(ExpectInverseResidual{1e-9, 100});
  if (expect == "witness-found") {
    sc.expectations.push_back(ExpectWitness{true});
  } else if (expect == "witness-not-found") {
    sc.expectations.push_back(ExpectWitness{false});
  } else if (expect != "none") {
    raise(Errc::ParseError, located("expect") + ": expected witness-found|witness-not-found|none");
  }
  return sc;
}

}  // namespace conewit
