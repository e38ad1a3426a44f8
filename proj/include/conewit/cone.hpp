#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conewit/errors.hpp"
#include "conewit/maps.hpp"
#include "conewit/numerics.hpp"
#include "conewit/point.hpp"
#include "conewit/rng.hpp"

namespace conewit {

// ---------------------------------------------------------------------------
// Cone families. Each carries just enough data to define membership; the
// single signed margin below drives every interior/boundary/exterior decision.
// ---------------------------------------------------------------------------

struct OrthantCone {
  int n = 1;
};

/// {(x, alpha) : alpha >= ||x||} in R^{d+1}; the last coordinate is alpha.
struct LorentzCone {
  int d = 1;
};

struct PsdCone {
  int n = 1;
};

/// Copositive matrices; membership via the simplex oracle, so n <= 12.
struct CopositiveCone {
  int n = 1;
};

/// {(x, y) : x > 0, or x = 0 and y >= 0}; not closed, induces a total order.
struct LexCone {};

/// Single ray {lambda * direction : lambda >= 0}; empty interior for n >= 2.
struct RayCone {
  int n = 1;
  std::vector<double> direction;
};

/// Nodewise-nonnegative piecewise-linear functions on a grid.
struct GridCone {
  Grid grid;
};

using ConeSpec =
    std::variant<OrthantCone, LorentzCone, PsdCone, CopositiveCone, LexCone, RayCone, GridCone>;

inline ConeSpec make_orthant(int n) {
  if (n < 1) raise(Errc::ShapeMismatch, "orthant dimension must be positive");
  return OrthantCone{n};
}

inline ConeSpec make_lorentz(int d) {
  if (d < 1) raise(Errc::ShapeMismatch, "lorentz dimension must be positive");
  return LorentzCone{d};
}

inline ConeSpec make_psd(int n) {
  if (n < 1) raise(Errc::ShapeMismatch, "psd dimension must be positive");
  return PsdCone{n};
}

inline ConeSpec make_copositive(int n) {
  if (n < 1) raise(Errc::ShapeMismatch, "copositive dimension must be positive");
  if (n > 12) raise(Errc::DimensionTooLarge, "copositive membership supports n <= 12");
  return CopositiveCone{n};
}

inline ConeSpec make_lex() { return LexCone{}; }

inline ConeSpec make_ray(int n, std::vector<double> direction) {
  if (n < 1 || static_cast<int>(direction.size()) != n)
    raise(Errc::ShapeMismatch, "ray direction length mismatch");
  const double norm = l2_norm(direction);
  if (norm < 1e-9) raise(Errc::PreconditionViolated, "ray direction must be nonzero");
  for (double& v : direction) v /= norm;
  return RayCone{n, std::move(direction)};
}

inline ConeSpec make_grid_cone(Grid g) { return GridCone{std::move(g)}; }

inline std::string cone_kind_name(const ConeSpec& cone) {
  if (std::holds_alternative<OrthantCone>(cone)) return "orthant";
  if (std::holds_alternative<LorentzCone>(cone)) return "lorentz";
  if (std::holds_alternative<PsdCone>(cone)) return "psd";
  if (std::holds_alternative<CopositiveCone>(cone)) return "copositive";
  if (std::holds_alternative<LexCone>(cone)) return "lex";
  if (std::holds_alternative<RayCone>(cone)) return "ray";
  return "grid";
}

/// Closed in the ambient norm topology. Only the lexicographic cone is not.
inline bool is_closed(const ConeSpec& cone) { return !std::holds_alternative<LexCone>(cone); }

/// Nonempty interior (for the lexicographic cone this is the open half-plane
/// {x > 0}). Only the ray cone is flagged empty-interior here.
inline bool has_interior(const ConeSpec& cone) { return !std::holds_alternative<RayCone>(cone); }

// --- membership margin --------------------------------------------------------

namespace detail {

inline const Coordinates& as_coords(const Point& p, int expected, const char* what) {
  const auto* cp = std::get_if<Coordinates>(&p);
  if (!cp || static_cast<int>(cp->values.size()) != expected) raise(Errc::ShapeMismatch, what);
  return *cp;
}

inline const SymMat& as_matrix(const Point& p, int expected, const char* what) {
  const auto* mp = std::get_if<SymMat>(&p);
  if (!mp || mp->n() != expected) raise(Errc::ShapeMismatch, what);
  return *mp;
}

inline const GridFunction& as_grid_fn(const Point& p, const Grid& g, const char* what) {
  const auto* gp = std::get_if<GridFunction>(&p);
  if (!gp || !(gp->grid == g)) raise(Errc::ShapeMismatch, what);
  return *gp;
}

}  // namespace detail

/// Signed membership surrogate: positive inside, ~zero on the boundary,
/// negative outside. The lexicographic cone uses an exact discrete rule
/// (+1 / 0 / -max(|x|,|y|)) because no tolerance band classifies a non-closed
/// cone correctly.
inline double margin(const ConeSpec& cone, const Point& p) {
  check_finite(p);
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    const auto& x = detail::as_coords(p, c->n, "orthant point");
    return *std::min_element(x.values.begin(), x.values.end());
  }
  if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    const auto& x = detail::as_coords(p, c->d + 1, "lorentz point");
    double head = 0.0;
    for (int i = 0; i < c->d; ++i) head += x.values[i] * x.values[i];
    return x.values.back() - std::sqrt(head);
  }
  if (const auto* c = std::get_if<PsdCone>(&cone))
    return min_eigenvalue(detail::as_matrix(p, c->n, "psd point"));
  if (const auto* c = std::get_if<CopositiveCone>(&cone))
    return simplex_quadratic_min(detail::as_matrix(p, c->n, "copositive point")).value;
  if (std::holds_alternative<LexCone>(cone)) {
    const auto& x = detail::as_coords(p, 2, "lex point");
    if (x.values[0] > 0.0) return 1.0;
    if (x.values[0] == 0.0 && x.values[1] >= 0.0) return 0.0;
    return -std::max(std::abs(x.values[0]), std::abs(x.values[1]));
  }
  if (const auto* c = std::get_if<RayCone>(&cone)) {
    const auto& x = detail::as_coords(p, c->n, "ray point");
    const double along = dot(x.values, c->direction);
    double off_sq = 0.0;
    for (int i = 0; i < c->n; ++i) {
      const double r = x.values[i] - along * c->direction[i];
      off_sq += r * r;
    }
    const double off = std::sqrt(off_sq);
    return off <= 1e-9 ? along : -off;
  }
  const auto& c = std::get<GridCone>(cone);
  const auto& g = detail::as_grid_fn(p, c.grid, "grid point");
  return *std::min_element(g.values.begin(), g.values.end());
}

enum class PointClass { Interior, Boundary, Exterior };

inline const char* class_name(PointClass c) {
  switch (c) {
    case PointClass::Interior: return "interior";
    case PointClass::Boundary: return "boundary";
    case PointClass::Exterior: return "exterior";
  }
  return "?";
}

struct MembershipVerdict {
  PointClass cls = PointClass::Exterior;
  double margin = 0.0;
};

inline MembershipVerdict classify(const ConeSpec& cone, const Point& p, double tol = 1e-9) {
  if (!(tol > 0.0)) raise(Errc::PreconditionViolated, "classification tolerance must be positive");
  const double m = margin(cone, p);
  if (std::holds_alternative<LexCone>(cone)) {
    // exact rule: the x = 0 face takes no tolerance band
    if (m > 0.0) return {PointClass::Interior, m};
    if (m == 0.0) return {PointClass::Boundary, m};
    return {PointClass::Exterior, m};
  }
  if (m > tol) return {PointClass::Interior, m};
  if (m < -tol) return {PointClass::Exterior, m};
  return {PointClass::Boundary, m};
}

inline bool in_cone(const ConeSpec& cone, const Point& p, double tol = 1e-9) {
  return classify(cone, p, tol).cls != PointClass::Exterior;
}

/// Order comparison x <= y induced by the cone: y - x must be a member.
inline bool leq(const ConeSpec& cone, const Point& x, const Point& y, double tol = 1e-9) {
  const Point diff = sub(y, x);
  if (std::holds_alternative<LexCone>(cone)) {
    const auto& d = std::get<Coordinates>(diff);
    return d.values[0] > 0.0 || (d.values[0] == 0.0 && d.values[1] >= 0.0);
  }
  return margin(cone, diff) >= -tol;
}

// --- canonical points -----------------------------------------------------------

/// Order unit of the cone (an interior point); EmptyRegion for the ray cone.
inline Point canonical_interior(const ConeSpec& cone) {
  if (const auto* c = std::get_if<OrthantCone>(&cone))
    return Coordinates{std::vector<double>(c->n, 1.0)};
  if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    std::vector<double> v(c->d + 1, 0.0);
    v.back() = 1.0;
    return Coordinates{std::move(v)};
  }
  if (const auto* c = std::get_if<PsdCone>(&cone)) return SymMat::identity(c->n);
  if (const auto* c = std::get_if<CopositiveCone>(&cone)) return SymMat::identity(c->n);
  if (std::holds_alternative<LexCone>(cone)) return Coordinates{{1.0, 0.0}};
  if (const auto* c = std::get_if<GridCone>(&cone))
    return GridFunction{c->grid, std::vector<double>(c->grid.size(), 1.0)};
  raise(Errc::EmptyRegion, "ray cone has no interior");
}

/// Some nonzero member, interior when one exists.
inline Point canonical_cone_point(const ConeSpec& cone) {
  if (const auto* c = std::get_if<RayCone>(&cone)) return Coordinates{c->direction};
  return canonical_interior(cone);
}

/// Ambient-space gaussian sample of the cone's point shape.
inline Point sample_ambient(const ConeSpec& cone, RngStream& rng) {
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    std::vector<double> v(c->n);
    for (double& x : v) x = rng.normal();
    return Coordinates{std::move(v)};
  }
  if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    std::vector<double> v(c->d + 1);
    for (double& x : v) x = rng.normal();
    return Coordinates{std::move(v)};
  }
  if (const auto* c = std::get_if<PsdCone>(&cone)) {
    SymMat m(c->n);
    for (int i = 0; i < c->n; ++i)
      for (int j = i; j < c->n; ++j) m.set(i, j, rng.normal());
    return m;
  }
  if (const auto* c = std::get_if<CopositiveCone>(&cone)) {
    SymMat m(c->n);
    for (int i = 0; i < c->n; ++i)
      for (int j = i; j < c->n; ++j) m.set(i, j, rng.normal());
    return m;
  }
  if (std::holds_alternative<LexCone>(cone)) return Coordinates{{rng.normal(), rng.normal()}};
  if (const auto* c = std::get_if<RayCone>(&cone)) {
    std::vector<double> v(c->n);
    for (double& x : v) x = rng.normal();
    return Coordinates{std::move(v)};
  }
  const auto& c = std::get<GridCone>(cone);
  std::vector<double> v(c.grid.size());
  for (double& x : v) x = rng.normal();
  return GridFunction{c.grid, std::move(v)};
}

// --- region sampling ------------------------------------------------------------

enum class Region { Cone, Interior, Boundary, Exterior };

inline const char* region_name(Region r) {
  switch (r) {
    case Region::Cone: return "cone";
    case Region::Interior: return "interior";
    case Region::Boundary: return "boundary";
    case Region::Exterior: return "exterior";
  }
  return "?";
}

namespace detail {

inline std::vector<double> abs_normals(int n, RngStream& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = std::abs(rng.normal());
  return v;
}

inline SymMat gram_sample(int n, RngStream& rng) {
  std::vector<std::vector<double>> g(n, std::vector<double>(n));
  for (auto& row : g)
    for (double& x : row) x = rng.normal();
  SymMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, dot(g[i], g[j]));
  return m;
}

inline SymMat nonneg_sym_sample(int n, RngStream& rng) {
  SymMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, std::abs(rng.normal()));
  return m;
}

}  // namespace detail

/// Draws a point that classifies into the requested region at tol 1e-9.
/// Rejection from ambient gaussians backs the exterior regions; the interior
/// and boundary draws are constructive per family.
inline Point sample_point(const ConeSpec& cone, Region region, RngStream& rng) {
  constexpr double kTol = 1e-9;
  const auto matches = [&](const Point& p) {
    const PointClass c = classify(cone, p, kTol).cls;
    switch (region) {
      case Region::Cone: return c != PointClass::Exterior;
      case Region::Interior: return c == PointClass::Interior;
      case Region::Boundary: return c == PointClass::Boundary;
      case Region::Exterior: return c == PointClass::Exterior;
    }
    return false;
  };

  if (region == Region::Exterior) {
    for (int tries = 0; tries < 100000; ++tries) {
      Point p = sample_ambient(cone, rng);
      if (matches(p)) return p;
    }
    raise(Errc::EmptyRegion, "could not sample an exterior point");
  }

  for (int tries = 0; tries < 100000; ++tries) {
    Point p;
    if (const auto* c = std::get_if<OrthantCone>(&cone)) {
      auto v = detail::abs_normals(c->n, rng);
      if (region == Region::Boundary) v[rng.uniform_int(0, c->n - 1)] = 0.0;
      p = Coordinates{std::move(v)};
    } else if (const auto* c = std::get_if<LorentzCone>(&cone)) {
      std::vector<double> v(c->d + 1);
      double norm_sq = 0.0;
      for (int i = 0; i < c->d; ++i) {
        v[i] = rng.normal();
        norm_sq += v[i] * v[i];
      }
      v.back() = std::sqrt(norm_sq) + (region == Region::Boundary ? 0.0 : std::abs(rng.normal()));
      p = Coordinates{std::move(v)};
    } else if (const auto* c = std::get_if<PsdCone>(&cone)) {
      SymMat m = detail::gram_sample(c->n, rng);
      if (region == Region::Boundary) {
        const Spectrum sp = sym_eig(m);
        m = m - sp.eigenvalues.front() * SymMat::outer(sp.eigenvectors.front());
      }
      p = m;
    } else if (const auto* c = std::get_if<CopositiveCone>(&cone)) {
      // PSD part plus an entrywise-nonnegative part: sufficient, not exhaustive
      SymMat m = detail::gram_sample(c->n, rng) + detail::nonneg_sym_sample(c->n, rng);
      if (region == Region::Boundary) {
        const double v = simplex_quadratic_min(m).value;
        SymMat ones(c->n);
        for (int i = 0; i < c->n; ++i)
          for (int j = i; j < c->n; ++j) ones.set(i, j, v);
        m = m - ones;  // (sum x)^2 = 1 on the simplex, so this shifts the minimum to 0
      }
      p = m;
    } else if (std::holds_alternative<LexCone>(cone)) {
      if (region == Region::Boundary) {
        p = Coordinates{{0.0, std::abs(rng.normal())}};
      } else {
        p = Coordinates{{std::abs(rng.normal()) + 1e-3, rng.normal()}};
      }
    } else if (const auto* c = std::get_if<RayCone>(&cone)) {
      if (region == Region::Interior) raise(Errc::EmptyRegion, "ray cone has no interior");
      if (region == Region::Boundary) {
        p = Coordinates{std::vector<double>(c->n, 0.0)};
      } else {
        std::vector<double> v = c->direction;
        const double lambda = std::abs(rng.normal()) + 1e-3;
        for (double& x : v) x *= lambda;
        p = Coordinates{std::move(v)};
      }
    } else {
      const auto& gc = std::get<GridCone>(cone);
      auto v = detail::abs_normals(gc.grid.size(), rng);
      if (region == Region::Boundary) v[rng.uniform_int(0, gc.grid.size() - 1)] = 0.0;
      p = GridFunction{gc.grid, std::move(v)};
    }
    if (matches(p)) return p;
  }
  raise(Errc::EmptyRegion, "region sampling failed");
}

// --- dual functionals -------------------------------------------------------------

namespace detail {

inline double functional_scale(const ConeSpec& cone, const Functional& f) {
  return 1.0 + std::abs(eval(f, canonical_cone_point(cone)));
}

inline void self_check_dual(const ConeSpec& cone, const Functional& f, RngStream rng, int samples) {
  const double floor = -1e-10 * functional_scale(cone, f);
  for (int i = 0; i < samples; ++i) {
    const Point p = sample_point(cone, Region::Cone, rng);
    if (eval(f, p) < floor)
      raise(Errc::NotPositiveFunctional, "dual self-check failed on a cone sample");
  }
}

}  // namespace detail

/// Random nonzero element of the dual cone K'. Each family gets its natural
/// structured form; the result is self-checked against freshly sampled cone
/// points before it is returned.
inline Functional sample_dual(const ConeSpec& cone, RngStream& rng, int self_check_samples = 1000) {
  Functional f = lex_first();
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    std::vector<double> v;
    do {
      v = detail::abs_normals(c->n, rng);
    } while (*std::max_element(v.begin(), v.end()) < 1e-6);
    f = covector(std::move(v));
  } else if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    std::vector<double> dir(c->d);
    for (double& x : dir) x = rng.normal();
    const double norm = l2_norm(dir);
    const double r = rng.uniform();
    for (double& x : dir) x = norm > 1e-12 ? x / norm * r : 0.0;
    f = spin_dual(std::move(dir));
  } else if (const auto* c = std::get_if<PsdCone>(&cone)) {
    f = trace_form(detail::gram_sample(c->n, rng));
  } else if (const auto* c = std::get_if<CopositiveCone>(&cone)) {
    std::vector<std::vector<double>> vs(1 + rng.uniform_int(0, 2));
    for (auto& v : vs) v = detail::abs_normals(c->n, rng);
    f = cp_form(std::move(vs));
  } else if (std::holds_alternative<LexCone>(cone)) {
    f = rng.uniform() < 0.5 ? lex_first() : covector({std::abs(rng.normal()) + 0.1, 0.0});
  } else if (const auto* c = std::get_if<RayCone>(&cone)) {
    std::vector<double> w(c->n);
    for (double& x : w) x = rng.normal();
    double along = dot(w, c->direction);
    if (along < 0.0) {
      for (double& x : w) x = -x;
      along = -along;
    }
    if (along < 0.1 * l2_norm(w) + 1e-6) {
      for (int i = 0; i < c->n; ++i) w[i] += (0.2 * l2_norm(w) + 0.1) * c->direction[i];
    }
    f = covector(std::move(w));
  } else {
    const auto& gc = std::get<GridCone>(cone);
    const int pick = static_cast<int>(rng.uniform_int(0, 2));
    if (pick == 0) {
      f = trapezoid(gc.grid);
    } else if (pick == 1) {
      f = point_eval(gc.grid, static_cast<int>(rng.uniform_int(0, gc.grid.size() - 1)));
    } else {
      // nonnegative mix of the integral and a point evaluation
      auto w = gc.grid.trapezoid_weights();
      const double a = std::abs(rng.normal());
      const double b = std::abs(rng.normal()) + 0.1;
      for (double& x : w) x *= a;
      w[rng.uniform_int(0, gc.grid.size() - 1)] += b;
      f = covector(std::move(w));
    }
  }
  if (self_check_samples > 0)
    detail::self_check_dual(cone, f, rng.split(rng.next_u64()), self_check_samples);
  return f;
}

struct SeparatingFunctional {
  Functional f;
  /// Set only for the lexicographic x = 0, y < 0 face, where the non-closed
  /// cone admits no strict separator and a limit direction is reported.
  bool approximate = false;
};

/// For an exterior point, a dual functional that is strictly negative on it.
inline SeparatingFunctional separating_functional(const ConeSpec& cone, const Point& p) {
  if (classify(cone, p, 1e-9).cls != PointClass::Exterior)
    raise(Errc::NotExterior, "separating_functional needs an exterior point");

  SeparatingFunctional out;
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    const auto& x = std::get<Coordinates>(p).values;
    const int worst = static_cast<int>(std::min_element(x.begin(), x.end()) - x.begin());
    std::vector<double> e(c->n, 0.0);
    e[worst] = 1.0;
    out.f = covector(std::move(e));
  } else if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    const auto& x = std::get<Coordinates>(p).values;
    std::vector<double> head(x.begin(), x.end() - 1);
    const double norm = l2_norm(head);
    if (norm > 1e-12)
      for (double& v : head) v = -v / norm;
    else
      head.assign(c->d, 0.0);
    out.f = spin_dual(std::move(head));
  } else if (std::holds_alternative<PsdCone>(cone)) {
    const Spectrum sp = sym_eig(std::get<SymMat>(p));
    out.f = trace_form(SymMat::outer(sp.eigenvectors.front()));
  } else if (std::holds_alternative<CopositiveCone>(cone)) {
    out.f = cp_form({simplex_quadratic_min(std::get<SymMat>(p)).argmin});
  } else if (std::holds_alternative<LexCone>(cone)) {
    const auto& x = std::get<Coordinates>(p).values;
    if (x[0] < 0.0) {
      out.f = covector({1.0, 0.0});
    } else {
      // x = 0, y < 0: only the limit direction (0, 1) separates; it is not in K'
      out.f = covector({0.0, 1.0});
      out.approximate = true;
    }
  } else if (const auto* c = std::get_if<RayCone>(&cone)) {
    const auto& x = std::get<Coordinates>(p).values;
    const double along = dot(x, c->direction);
    std::vector<double> off(c->n);
    for (int i = 0; i < c->n; ++i) off[i] = x[i] - along * c->direction[i];
    const double off_norm = l2_norm(off);
    if (off_norm > 1e-9) {
      for (double& v : off) v = -v / off_norm;
      out.f = covector(std::move(off));
    } else {
      out.f = covector(c->direction);
    }
  } else {
    const auto& g = std::get<GridFunction>(p);
    const int worst =
        static_cast<int>(std::min_element(g.values.begin(), g.values.end()) - g.values.begin());
    out.f = point_eval(std::get<GridCone>(cone).grid, worst);
  }

  if (eval(out.f, p) >= 0.0) raise(Errc::NoSeparator, "separator is not negative on the input");
  if (!out.approximate) {
    RngStream check(0x5e9a7a7eull);
    detail::self_check_dual(cone, out.f, check, 100);
  }
  return out;
}

// --- extremals -----------------------------------------------------------------

/// Extremal test per family. For the grid cone this is a statement about the
/// discretized cone (single-node support), not about C[0,1] itself.
inline bool is_extremal(const ConeSpec& cone, const Point& p, double tol = 1e-9) {
  if (std::holds_alternative<CopositiveCone>(cone))
    raise(Errc::Unsupported, "no tractable extremal characterization for the copositive cone");
  if (classify(cone, p, tol).cls == PointClass::Exterior)
    raise(Errc::PreconditionViolated, "extremal test needs a cone member");

  if (std::holds_alternative<OrthantCone>(cone)) {
    const auto& x = std::get<Coordinates>(p).values;
    int big = 0;
    for (double v : x)
      if (v > tol) ++big;
    return big == 1;
  }
  if (std::holds_alternative<LorentzCone>(cone)) {
    const auto& x = std::get<Coordinates>(p).values;
    std::vector<double> head(x.begin(), x.end() - 1);
    return std::abs(x.back() - l2_norm(head)) <= tol && l2_norm(x) > tol;
  }
  if (std::holds_alternative<PsdCone>(cone)) {
    const Spectrum sp = sym_eig(std::get<SymMat>(p));
    const int n = static_cast<int>(sp.eigenvalues.size());
    const double top = sp.eigenvalues[n - 1];
    if (top <= tol) return false;
    return n == 1 || sp.eigenvalues[n - 2] <= tol * top;
  }
  if (std::holds_alternative<LexCone>(cone)) {
    const auto& x = std::get<Coordinates>(p).values;
    return x[0] == 0.0 && x[1] >= 0.0;
  }
  if (std::holds_alternative<RayCone>(cone)) return l2_norm(p) > tol;
  const auto& g = std::get<GridFunction>(p);
  int big = 0;
  for (double v : g.values)
    if (v > tol) ++big;
  return big == 1;
}

/// Random nonzero extremal. Unsupported where is_extremal is.
inline Point sample_extremal(const ConeSpec& cone, RngStream& rng) {
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    std::vector<double> v(c->n, 0.0);
    v[rng.uniform_int(0, c->n - 1)] = std::abs(rng.normal()) + 0.1;
    return Coordinates{std::move(v)};
  }
  if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    std::vector<double> v(c->d + 1);
    double norm_sq = 0.0;
    for (int i = 0; i < c->d; ++i) {
      v[i] = rng.normal();
      norm_sq += v[i] * v[i];
    }
    v.back() = std::sqrt(norm_sq);
    return Coordinates{std::move(v)};
  }
  if (const auto* c = std::get_if<PsdCone>(&cone)) {
    std::vector<double> v(c->n);
    for (double& x : v) x = rng.normal();
    return SymMat::outer(v);
  }
  if (std::holds_alternative<LexCone>(cone))
    return Coordinates{{0.0, std::abs(rng.normal()) + 0.1}};
  if (const auto* c = std::get_if<RayCone>(&cone)) {
    std::vector<double> v = c->direction;
    const double lambda = std::abs(rng.normal()) + 0.1;
    for (double& x : v) x *= lambda;
    return Coordinates{std::move(v)};
  }
  if (const auto* c = std::get_if<GridCone>(&cone)) {
    std::vector<double> v(c->grid.size(), 0.0);
    v[rng.uniform_int(0, c->grid.size() - 1)] = std::abs(rng.normal()) + 0.1;
    return GridFunction{c->grid, std::move(v)};
  }
  raise(Errc::Unsupported, "no extremal sampler for this cone");
}

// --- incomparable elements -------------------------------------------------------

/// A point p with p and -p both exterior, i.e. incomparable to 0. Tries a
/// deterministic construction per family before falling back to search.
inline Point find_incomparable(const ConeSpec& cone, RngStream& rng, long budget = 1000) {
  if (std::holds_alternative<LexCone>(cone))
    raise(Errc::TotalOrder, "the lexicographic order is total: K u (-K) = R^2");

  const auto both_exterior = [&](const Point& p) {
    return classify(cone, p, 1e-9).cls == PointClass::Exterior &&
           classify(cone, scale(p, -1.0), 1e-9).cls == PointClass::Exterior;
  };

  std::optional<Point> fallback;
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    if (c->n < 2) raise(Errc::PreconditionViolated, "need ambient dimension >= 2");
    std::vector<double> v(c->n, 0.0);
    v[0] = 1.0;
    v[1] = -1.0;
    fallback = Coordinates{std::move(v)};
  } else if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    std::vector<double> v(c->d + 1, 0.0);
    v[0] = 1.0;
    fallback = Coordinates{std::move(v)};
  } else if (const auto* c = std::get_if<PsdCone>(&cone)) {
    if (c->n < 2) raise(Errc::PreconditionViolated, "need ambient dimension >= 2");
    std::vector<double> d(c->n, 0.0);
    d[0] = 1.0;
    d[1] = -1.0;
    fallback = SymMat::diag(d);
  } else if (const auto* c = std::get_if<CopositiveCone>(&cone)) {
    if (c->n < 2) raise(Errc::PreconditionViolated, "need ambient dimension >= 2");
    std::vector<double> d(c->n, 0.0);
    d[0] = 1.0;
    d[1] = -1.0;
    fallback = SymMat::diag(d);
  } else if (const auto* c = std::get_if<RayCone>(&cone)) {
    if (c->n < 2) raise(Errc::TotalOrder, "a ray in R^1 orders the whole line");
    for (int i = 0; i < c->n; ++i) {
      std::vector<double> v(c->n, 0.0);
      v[i] = 1.0;
      const double along = dot(v, c->direction);
      for (int j = 0; j < c->n; ++j) v[j] -= along * c->direction[j];
      if (l2_norm(v) > 1e-6) {
        const double norm = l2_norm(v);
        for (double& x : v) x /= norm;
        fallback = Coordinates{std::move(v)};
        break;
      }
    }
  } else if (const auto* c = std::get_if<GridCone>(&cone)) {
    std::vector<double> v(c->grid.size(), 0.0);
    v[0] = 1.0;
    v[1] = -1.0;
    fallback = GridFunction{c->grid, std::move(v)};
  }

  if (fallback && both_exterior(*fallback)) return *fallback;
  for (long i = 0; i < budget; ++i) {
    Point p = sample_ambient(cone, rng);
    if (both_exterior(p)) return p;
  }
  raise(Errc::BudgetExhausted, "no incomparable element found within budget");
}

// --- zero dual pairings ------------------------------------------------------------

struct DualZeroPair {
  Point u;
  Functional f;
};

/// Explicit (u, f) with u in K \ {0}, f in K' \ {0} and f(u) = 0.
inline DualZeroPair dual_zero_pair(const ConeSpec& cone) {
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    if (c->n < 2) raise(Errc::PreconditionViolated, "orthant pairing needs n >= 2");
    std::vector<double> u(c->n, 0.0), f(c->n, 0.0);
    u[0] = 1.0;
    f[1] = 1.0;
    return {Coordinates{std::move(u)}, covector(std::move(f))};
  }
  if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    std::vector<double> u(c->d + 1, 0.0), xhat(c->d, 0.0);
    u[0] = 1.0;
    u.back() = 1.0;
    xhat[0] = -1.0;
    return {Coordinates{std::move(u)}, spin_dual(std::move(xhat))};
  }
  if (const auto* c = std::get_if<PsdCone>(&cone)) {
    if (c->n < 2) raise(Errc::PreconditionViolated, "psd pairing needs n >= 2");
    std::vector<double> e1(c->n, 0.0), e2(c->n, 0.0);
    e1[0] = 1.0;
    e2[1] = 1.0;
    return {SymMat::outer(e1), trace_form(SymMat::outer(e2))};
  }
  if (const auto* c = std::get_if<GridCone>(&cone)) {
    std::vector<double> hat(c->grid.size(), 0.0);
    hat[0] = 1.0;
    return {GridFunction{c->grid, std::move(hat)}, point_eval(c->grid, c->grid.size() - 1)};
  }
  raise(Errc::Unsupported, "no explicit zero pairing for this cone family");
}

// --- candidate generators used by the witness searches ------------------------------

/// Boundary points with simple structure, deterministic candidates first.
inline std::vector<Point> boundary_candidates(const ConeSpec& cone, RngStream& rng, int sampled) {
  std::vector<Point> out;
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    for (int i = 0; i < c->n; ++i) {
      std::vector<double> e(c->n, 0.0);
      e[i] = 1.0;
      out.push_back(Coordinates{e});
      if (c->n > 1) {
        std::vector<double> rest(c->n, 1.0);
        rest[i] = 0.0;
        out.push_back(Coordinates{rest});
      }
    }
  } else if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    for (int i = 0; i < c->d; ++i) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> v(c->d + 1, 0.0);
        v[i] = sign;
        v.back() = 1.0;
        out.push_back(Coordinates{std::move(v)});
      }
    }
  } else if (const auto* c = std::get_if<PsdCone>(&cone)) {
    for (int i = 0; i < c->n; ++i) {
      std::vector<double> e(c->n, 0.0);
      e[i] = 1.0;
      out.push_back(SymMat::outer(e));
    }
    for (int i = 0; i < c->n; ++i)
      for (int j = i + 1; j < c->n; ++j) {
        std::vector<double> e(c->n, 0.0);
        e[i] = e[j] = 1.0;
        out.push_back(SymMat::outer(e));
      }
  } else if (const auto* c = std::get_if<CopositiveCone>(&cone)) {
    if (c->n > 1) {
      for (int i = 0; i < c->n; ++i) {
        std::vector<double> e(c->n, 0.0);
        e[i] = 1.0;
        out.push_back(SymMat::outer(e));
      }
    }
  } else if (std::holds_alternative<LexCone>(cone)) {
    out.push_back(Coordinates{{0.0, 1.0}});
  } else if (const auto* c = std::get_if<GridCone>(&cone)) {
    const int m = c->grid.size();
    for (int i = 0; i < m; ++i) {
      std::vector<double> hat(m, 0.0);
      hat[i] = 1.0;
      out.push_back(GridFunction{c->grid, hat});
      std::vector<double> rest(m, 1.0);
      rest[i] = 0.0;
      out.push_back(GridFunction{c->grid, std::move(rest)});
    }
  }
  if (!std::holds_alternative<RayCone>(cone) && !std::holds_alternative<LexCone>(cone)) {
    for (int i = 0; i < sampled; ++i) out.push_back(sample_point(cone, Region::Boundary, rng));
  }
  return out;
}

/// Extremal candidates for the witness machinery, deterministic ones first.
inline std::vector<Point> extremal_candidates(const ConeSpec& cone, RngStream& rng, int sampled) {
  std::vector<Point> out;
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    for (int i = 0; i < c->n; ++i) {
      std::vector<double> e(c->n, 0.0);
      e[i] = 1.0;
      out.push_back(Coordinates{std::move(e)});
    }
  } else if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    for (int i = 0; i < c->d; ++i) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> v(c->d + 1, 0.0);
        v[i] = sign;
        v.back() = 1.0;
        out.push_back(Coordinates{std::move(v)});
      }
    }
    for (int i = 0; i < sampled; ++i) out.push_back(sample_extremal(cone, rng));
  } else if (const auto* c = std::get_if<PsdCone>(&cone)) {
    for (int i = 0; i < c->n; ++i) {
      std::vector<double> e(c->n, 0.0);
      e[i] = 1.0;
      out.push_back(SymMat::outer(e));
    }
    for (int i = 0; i < sampled; ++i) out.push_back(sample_extremal(cone, rng));
  } else if (std::holds_alternative<LexCone>(cone)) {
    out.push_back(Coordinates{{0.0, 1.0}});
  } else if (const auto* c = std::get_if<RayCone>(&cone)) {
    out.push_back(Coordinates{c->direction});
  } else if (const auto* c = std::get_if<GridCone>(&cone)) {
    for (int i = 0; i < c->grid.size(); ++i) {
      std::vector<double> hat(c->grid.size(), 0.0);
      hat[i] = 1.0;
      out.push_back(GridFunction{c->grid, std::move(hat)});
    }
  }
  return out;
}

}  // namespace conewit
