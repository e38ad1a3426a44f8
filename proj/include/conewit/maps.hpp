#pragma once

#include <cmath>
#include <memory>
#include <variant>
#include <vector>

#include "conewit/errors.hpp"
#include "conewit/numerics.hpp"
#include "conewit/point.hpp"

namespace conewit {

// ---------------------------------------------------------------------------
// Positive linear functionals, kept in structured form so dual-cone
// membership is visible from the representation wherever possible.
// ---------------------------------------------------------------------------

struct DenseCovector {
  std::vector<double> values;
};

/// f(x, alpha) = alpha + <x, xhat> with ||xhat|| <= 1; dual to the Lorentz cone.
struct SpinDual {
  std::vector<double> xhat;
};

/// f(A) = tr(B A) with B positive semidefinite; dual to the PSD cone.
struct TraceForm {
  SymMat b;
};

/// f(A) = sum_i v_i^T A v_i with entrywise nonnegative v_i; dual to the
/// copositive cone (a completely positive form).
struct CPForm {
  std::vector<std::vector<double>> vs;
};

/// Trapezoid-rule integral over a grid; exact for piecewise-linear data.
struct TrapezoidIntegral {
  Grid grid;
};

struct PointEvaluation {
  Grid grid;
  int node = 0;
};

/// f(x, y) = x on the lexicographic plane.
struct LexFirstCoord {};

struct ComposedFunctional;

using Functional = std::variant<DenseCovector, SpinDual, TraceForm, CPForm, TrapezoidIntegral,
                                PointEvaluation, LexFirstCoord, ComposedFunctional>;

// ---------------------------------------------------------------------------
// Structured invertible linear maps. Everything except DenseMap carries a
// closed-form inverse.
// ---------------------------------------------------------------------------

struct Identity {};

/// x_j -> diag_j * x_j routed to output slot perm_j (a monomial matrix).
struct PermDiag {
  std::vector<int> perm;
  std::vector<double> diag;
};

/// (x, alpha) -> rho * (Q x, alpha) with Q orthogonal, rho > 0.
struct SpinAuto {
  std::vector<std::vector<double>> q;
  double rho = 1.0;
};

/// A -> M A M^T; the inverse factor is precomputed at construction.
struct Congruence {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> m_inv;
};

struct DenseMap {
  std::vector<std::vector<double>> m;
};

/// Lower-triangular map on the lexicographic plane: (x, y) -> (a x, c x + d y).
struct LexTriangular {
  double a = 1.0, c = 0.0, d = 1.0;
};

struct RankOnePerturbed;

using LinearMap = std::variant<Identity, PermDiag, SpinAuto, Congruence, DenseMap, LexTriangular,
                               RankOnePerturbed>;

/// Fallback representation of f composed with a map when the composition has
/// no structured form; evaluates f(S x) directly.
struct ComposedFunctional {
  std::shared_ptr<const Functional> base;
  std::shared_ptr<const LinearMap> map;
};

/// T(x) = S x + f(x) u. Inverse via x = S^{-1} y - lambda S^{-1} u with
/// lambda = f(S^{-1} y) / (1 + f(S^{-1} u)).
struct RankOnePerturbed {
  std::shared_ptr<const LinearMap> inner;
  Functional f;
  Point u;
};

// --- validated constructors -------------------------------------------------

inline Functional covector(std::vector<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) raise(Errc::NonFinite, "covector entry not finite");
  return DenseCovector{std::move(values)};
}

inline Functional spin_dual(std::vector<double> xhat) {
  if (l2_norm(xhat) > 1.0 + 1e-12) raise(Errc::PreconditionViolated, "spin dual needs ||xhat|| <= 1");
  return SpinDual{std::move(xhat)};
}

inline Functional trace_form(SymMat b) {
  const double floor = -1e-10 * (1.0 + b.max_abs());
  if (min_eigenvalue(b) < floor) raise(Errc::PreconditionViolated, "trace form needs B >= 0");
  return TraceForm{std::move(b)};
}

inline Functional cp_form(std::vector<std::vector<double>> vs) {
  if (vs.empty()) raise(Errc::PreconditionViolated, "cp form needs at least one vector");
  for (const auto& v : vs)
    for (double x : v)
      if (x < -1e-12) raise(Errc::PreconditionViolated, "cp form vectors must be nonnegative");
  return CPForm{std::move(vs)};
}

inline Functional trapezoid(Grid g) { return TrapezoidIntegral{std::move(g)}; }

inline Functional point_eval(Grid g, int node) {
  if (node < 0 || node >= g.size()) raise(Errc::ShapeMismatch, "evaluation node out of range");
  return PointEvaluation{std::move(g), node};
}

inline Functional lex_first() { return LexFirstCoord{}; }

inline LinearMap identity_map() { return Identity{}; }

inline LinearMap perm_diag(std::vector<int> perm, std::vector<double> diag) {
  if (perm.size() != diag.size()) raise(Errc::ShapeMismatch, "perm/diag size mismatch");
  std::vector<char> seen(perm.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(perm.size()) || seen[p])
      raise(Errc::PreconditionViolated, "perm is not a permutation");
    seen[p] = 1;
  }
  for (double d : diag)
    if (!(d > 0.0)) raise(Errc::PreconditionViolated, "diagonal entries must be positive");
  return PermDiag{std::move(perm), std::move(diag)};
}

inline LinearMap spin_auto(std::vector<std::vector<double>> q, double rho) {
  const int d = static_cast<int>(q.size());
  for (const auto& row : q)
    if (static_cast<int>(row.size()) != d) raise(Errc::ShapeMismatch, "Q must be square");
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += q[k][i] * q[k][j];
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-10)
        raise(Errc::PreconditionViolated, "Q is not orthogonal");
    }
  }
  if (!(rho > 0.0)) raise(Errc::PreconditionViolated, "rho must be positive");
  return SpinAuto{std::move(q), rho};
}

inline LinearMap congruence(std::vector<std::vector<double>> m) {
  const int n = static_cast<int>(m.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != n) raise(Errc::ShapeMismatch, "M must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  double abs_det = 0.0;
  auto inv = detail::dense_inverse(flat, n, &abs_det);
  if (!inv || abs_det < 1e-9) raise(Errc::Singular, "congruence factor is (near) singular");
  std::vector<std::vector<double>> m_inv(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m_inv[i][j] = (*inv)[static_cast<std::size_t>(i) * n + j];
  return Congruence{std::move(m), std::move(m_inv)};
}

inline LinearMap dense_map(std::vector<std::vector<double>> m) {
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (const auto& row : m)
    if (row.size() != cols) raise(Errc::ShapeMismatch, "ragged dense matrix");
  return DenseMap{std::move(m)};
}

inline LinearMap lex_triangular(double a, double c, double d) {
  if (std::abs(a) < 1e-12 || std::abs(d) < 1e-12)
    raise(Errc::Singular, "triangular map must be invertible");
  return LexTriangular{a, c, d};
}

/// Structural constructor; cone-level validation lives in rank_one_perturb.
inline LinearMap rank_one(LinearMap inner, Functional f, Point u) {
  return RankOnePerturbed{std::make_shared<const LinearMap>(std::move(inner)), std::move(f),
                          std::move(u)};
}

inline Functional composed_pullback(Functional f, LinearMap s) {
  return ComposedFunctional{std::make_shared<const Functional>(std::move(f)),
                            std::make_shared<const LinearMap>(std::move(s))};
}

// --- evaluation ---------------------------------------------------------------

Point apply(const LinearMap& t, const Point& p);

inline double eval(const Functional& f, const Point& p) {
  if (const auto* dc = std::get_if<DenseCovector>(&f)) {
    if (const auto* cp = std::get_if<Coordinates>(&p)) {
      if (cp->values.size() != dc->values.size()) raise(Errc::ShapeMismatch, "covector length");
      return dot(dc->values, cp->values);
    }
    if (const auto* gp = std::get_if<GridFunction>(&p)) {
      if (gp->values.size() != dc->values.size()) raise(Errc::ShapeMismatch, "covector length");
      return dot(dc->values, gp->values);
    }
    raise(Errc::ShapeMismatch, "covector applies to coordinates");
  }
  if (const auto* sd = std::get_if<SpinDual>(&f)) {
    const auto* cp = std::get_if<Coordinates>(&p);
    if (!cp || cp->values.size() != sd->xhat.size() + 1)
      raise(Errc::ShapeMismatch, "spin dual expects (x, alpha)");
    double s = cp->values.back();
    for (std::size_t i = 0; i < sd->xhat.size(); ++i) s += cp->values[i] * sd->xhat[i];
    return s;
  }
  if (const auto* tf = std::get_if<TraceForm>(&f)) {
    const auto* mp = std::get_if<SymMat>(&p);
    if (!mp || mp->n() != tf->b.n()) raise(Errc::ShapeMismatch, "trace form expects a matching matrix");
    double s = 0.0;
    for (int i = 0; i < mp->n(); ++i)
      for (int j = 0; j < mp->n(); ++j) s += tf->b.at(i, j) * mp->at(i, j);
    return s;
  }
  if (const auto* cf = std::get_if<CPForm>(&f)) {
    const auto* mp = std::get_if<SymMat>(&p);
    if (!mp) raise(Errc::ShapeMismatch, "cp form expects a matrix");
    double s = 0.0;
    for (const auto& v : cf->vs) {
      if (static_cast<int>(v.size()) != mp->n()) raise(Errc::ShapeMismatch, "cp form vector length");
      s += mp->quad_form(v);
    }
    return s;
  }
  if (const auto* ti = std::get_if<TrapezoidIntegral>(&f)) {
    const auto* gp = std::get_if<GridFunction>(&p);
    if (!gp || !(gp->grid == ti->grid)) raise(Errc::ShapeMismatch, "trapezoid grid mismatch");
    return dot(ti->grid.trapezoid_weights(), gp->values);
  }
  if (const auto* pe = std::get_if<PointEvaluation>(&f)) {
    const auto* gp = std::get_if<GridFunction>(&p);
    if (!gp || !(gp->grid == pe->grid)) raise(Errc::ShapeMismatch, "evaluation grid mismatch");
    return gp->values[pe->node];
  }
  if (std::holds_alternative<LexFirstCoord>(f)) {
    const auto* cp = std::get_if<Coordinates>(&p);
    if (!cp || cp->values.size() != 2) raise(Errc::ShapeMismatch, "lex functional expects R^2");
    return cp->values[0];
  }
  const auto& comp = std::get<ComposedFunctional>(f);
  return eval(*comp.base, conewit::apply(*comp.map, p));
}

namespace detail {

inline std::vector<double> mat_vec(const std::vector<std::vector<double>>& m,
                                   const std::vector<double>& x) {
  std::vector<double> y(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += m[i][j] * x[j];
    y[i] = s;
  }
  return y;
}

inline SymMat congruence_apply(const std::vector<std::vector<double>>& m, const SymMat& a) {
  const int n = a.n();
  // rows of M*A
  std::vector<std::vector<double>> ma(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double mik = m[i][k];
      if (mik == 0.0) continue;
      for (int j = 0; j < n; ++j) ma[i][j] += mik * a.at(k, j);
    }
  SymMat out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += ma[i][k] * m[j][k];
      out.set(i, j, s);
    }
  return out;
}

inline std::vector<double> apply_coordlike(const LinearMap& t, const std::vector<double>& x);

}  // namespace detail

inline Point apply(const LinearMap& t, const Point& p) {
  if (std::holds_alternative<Identity>(t)) return p;
  if (const auto* pd = std::get_if<PermDiag>(&t)) {
    const std::vector<double>* in = nullptr;
    if (const auto* cp = std::get_if<Coordinates>(&p)) in = &cp->values;
    if (const auto* gp = std::get_if<GridFunction>(&p)) in = &gp->values;
    if (!in || in->size() != pd->perm.size()) raise(Errc::ShapeMismatch, "perm-diag size");
    std::vector<double> out(in->size(), 0.0);
    for (std::size_t j = 0; j < in->size(); ++j) out[pd->perm[j]] = pd->diag[j] * (*in)[j];
    if (const auto* gp = std::get_if<GridFunction>(&p)) return GridFunction{gp->grid, std::move(out)};
    return Coordinates{std::move(out)};
  }
  if (const auto* sa = std::get_if<SpinAuto>(&t)) {
    const auto* cp = std::get_if<Coordinates>(&p);
    if (!cp || cp->values.size() != sa->q.size() + 1) raise(Errc::ShapeMismatch, "spin map size");
    std::vector<double> head(cp->values.begin(), cp->values.end() - 1);
    std::vector<double> out = detail::mat_vec(sa->q, head);
    for (double& v : out) v *= sa->rho;
    out.push_back(sa->rho * cp->values.back());
    return Coordinates{std::move(out)};
  }
  if (const auto* cg = std::get_if<Congruence>(&t)) {
    const auto* mp = std::get_if<SymMat>(&p);
    if (!mp || mp->n() != static_cast<int>(cg->m.size())) raise(Errc::ShapeMismatch, "congruence size");
    return detail::congruence_apply(cg->m, *mp);
  }
  if (const auto* dm = std::get_if<DenseMap>(&t)) {
    const std::vector<double>* in = nullptr;
    if (const auto* cp = std::get_if<Coordinates>(&p)) in = &cp->values;
    if (const auto* gp = std::get_if<GridFunction>(&p)) in = &gp->values;
    if (!in || dm->m.empty() || in->size() != dm->m.front().size())
      raise(Errc::ShapeMismatch, "dense map size");
    auto out = detail::mat_vec(dm->m, *in);
    if (const auto* gp = std::get_if<GridFunction>(&p); gp && out.size() == gp->values.size())
      return GridFunction{gp->grid, std::move(out)};
    return Coordinates{std::move(out)};
  }
  if (const auto* lt = std::get_if<LexTriangular>(&t)) {
    const auto* cp = std::get_if<Coordinates>(&p);
    if (!cp || cp->values.size() != 2) raise(Errc::ShapeMismatch, "triangular map expects R^2");
    return Coordinates{{lt->a * cp->values[0], lt->c * cp->values[0] + lt->d * cp->values[1]}};
  }
  const auto& rp = std::get<RankOnePerturbed>(t);
  return add(conewit::apply(*rp.inner, p), scale(rp.u, eval(rp.f, p)));
}

inline bool supports_apply_inverse(const LinearMap& t) {
  if (std::holds_alternative<DenseMap>(t)) return false;
  if (const auto* rp = std::get_if<RankOnePerturbed>(&t)) return supports_apply_inverse(*rp->inner);
  return true;
}

inline Point apply_inverse(const LinearMap& t, const Point& y) {
  if (std::holds_alternative<Identity>(t)) return y;
  if (const auto* pd = std::get_if<PermDiag>(&t)) {
    const std::vector<double>* in = nullptr;
    if (const auto* cp = std::get_if<Coordinates>(&y)) in = &cp->values;
    if (const auto* gp = std::get_if<GridFunction>(&y)) in = &gp->values;
    if (!in || in->size() != pd->perm.size()) raise(Errc::ShapeMismatch, "perm-diag size");
    std::vector<double> out(in->size(), 0.0);
    for (std::size_t j = 0; j < in->size(); ++j) out[j] = (*in)[pd->perm[j]] / pd->diag[j];
    if (const auto* gp = std::get_if<GridFunction>(&y)) return GridFunction{gp->grid, std::move(out)};
    return Coordinates{std::move(out)};
  }
  if (const auto* sa = std::get_if<SpinAuto>(&t)) {
    const auto* cp = std::get_if<Coordinates>(&y);
    if (!cp || cp->values.size() != sa->q.size() + 1) raise(Errc::ShapeMismatch, "spin map size");
    const int d = static_cast<int>(sa->q.size());
    std::vector<double> out(d + 1, 0.0);
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += sa->q[k][i] * cp->values[k];  // Q^T
      out[i] = s / sa->rho;
    }
    out[d] = cp->values[d] / sa->rho;
    return Coordinates{std::move(out)};
  }
  if (const auto* cg = std::get_if<Congruence>(&t)) {
    const auto* mp = std::get_if<SymMat>(&y);
    if (!mp || mp->n() != static_cast<int>(cg->m.size())) raise(Errc::ShapeMismatch, "congruence size");
    return detail::congruence_apply(cg->m_inv, *mp);
  }
  if (std::holds_alternative<DenseMap>(t))
    raise(Errc::Unsupported, "dense maps have no closed-form inverse");
  if (const auto* lt = std::get_if<LexTriangular>(&t)) {
    const auto* cp = std::get_if<Coordinates>(&y);
    if (!cp || cp->values.size() != 2) raise(Errc::ShapeMismatch, "triangular map expects R^2");
    const double x0 = cp->values[0] / lt->a;
    return Coordinates{{x0, (cp->values[1] - lt->c * x0) / lt->d}};
  }
  const auto& rp = std::get<RankOnePerturbed>(t);
  const Point sy = apply_inverse(*rp.inner, y);
  const Point su = apply_inverse(*rp.inner, rp.u);
  const double denom = 1.0 + eval(rp.f, su);
  if (std::abs(denom) < 1e-12) raise(Errc::Singular, "rank-one denominator vanished");
  const double lambda = eval(rp.f, sy) / denom;
  return sub(sy, scale(su, lambda));
}

// --- pullback and scaling ----------------------------------------------------

namespace detail {

/// Coordinate dimension of functionals that act on coordinate-like points;
/// -1 for the matrix-space forms.
inline int covector_dimension(const Functional& f) {
  if (const auto* dc = std::get_if<DenseCovector>(&f)) return static_cast<int>(dc->values.size());
  if (const auto* sd = std::get_if<SpinDual>(&f)) return static_cast<int>(sd->xhat.size()) + 1;
  if (const auto* ti = std::get_if<TrapezoidIntegral>(&f)) return ti->grid.size();
  if (const auto* pe = std::get_if<PointEvaluation>(&f)) return pe->grid.size();
  if (std::holds_alternative<LexFirstCoord>(f)) return 2;
  return -1;
}

inline const Grid* functional_grid(const Functional& f) {
  if (const auto* ti = std::get_if<TrapezoidIntegral>(&f)) return &ti->grid;
  if (const auto* pe = std::get_if<PointEvaluation>(&f)) return &pe->grid;
  return nullptr;
}

}  // namespace detail

/// f composed with S. Structured whenever the composition stays inside the
/// family (coordinate functionals become dense covectors, trace forms pull
/// back through congruences); otherwise wraps f . S for direct evaluation.
inline Functional pullback(const Functional& f, const LinearMap& s) {
  if (std::holds_alternative<Identity>(s)) return f;

  if (const auto* tf = std::get_if<TraceForm>(&f)) {
    if (const auto* cg = std::get_if<Congruence>(&s)) {
      // tr(B * M A M^T) = tr((M^T B M) A)
      const int n = tf->b.n();
      std::vector<std::vector<double>> mt(n, std::vector<double>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mt[i][j] = cg->m[j][i];
      return TraceForm{detail::congruence_apply(mt, tf->b)};
    }
    return composed_pullback(f, s);
  }
  if (std::holds_alternative<CPForm>(f) || std::holds_alternative<ComposedFunctional>(f))
    return composed_pullback(f, s);

  const int n = detail::covector_dimension(f);
  if (n < 0) return composed_pullback(f, s);
  const Grid* g = detail::functional_grid(f);
  std::vector<double> c(n, 0.0);
  for (int k = 0; k < n; ++k) {
    std::vector<double> basis(n, 0.0);
    basis[k] = 1.0;
    Point e = g ? Point(GridFunction{*g, std::move(basis)}) : Point(Coordinates{std::move(basis)});
    c[k] = eval(f, conewit::apply(s, e));
  }
  return DenseCovector{std::move(c)};
}

/// c * f for c >= 0, reshaped into a representable form where the variant has
/// no scale knob of its own.
inline Functional scale_functional(const Functional& f, double c) {
  if (c < 0.0) raise(Errc::Unsupported, "negative scaling leaves the dual cone");
  if (const auto* dc = std::get_if<DenseCovector>(&f)) {
    auto v = dc->values;
    for (double& x : v) x *= c;
    return DenseCovector{std::move(v)};
  }
  if (const auto* sd = std::get_if<SpinDual>(&f)) {
    std::vector<double> v = sd->xhat;
    for (double& x : v) x *= c;
    v.push_back(c);
    return DenseCovector{std::move(v)};
  }
  if (const auto* tf = std::get_if<TraceForm>(&f)) return TraceForm{c * tf->b};
  if (const auto* cf = std::get_if<CPForm>(&f)) {
    auto vs = cf->vs;
    const double r = std::sqrt(c);
    for (auto& v : vs)
      for (double& x : v) x *= r;
    return CPForm{std::move(vs)};
  }
  if (const auto* ti = std::get_if<TrapezoidIntegral>(&f)) {
    auto w = ti->grid.trapezoid_weights();
    for (double& x : w) x *= c;
    return DenseCovector{std::move(w)};
  }
  if (const auto* pe = std::get_if<PointEvaluation>(&f)) {
    std::vector<double> v(pe->grid.size(), 0.0);
    v[pe->node] = c;
    return DenseCovector{std::move(v)};
  }
  if (std::holds_alternative<LexFirstCoord>(f)) return DenseCovector{{c, 0.0}};
  const auto& comp = std::get<ComposedFunctional>(f);
  return ComposedFunctional{
      std::make_shared<const Functional>(scale_functional(*comp.base, c)), comp.map};
}

}  // namespace conewit
