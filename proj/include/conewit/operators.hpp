#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "conewit/cone.hpp"
#include "conewit/maps.hpp"

namespace conewit {

/// Which hypotheses of the non-positive-inverse arguments the construction
/// satisfies. None is needed for positivity + invertibility; they only decide
/// which non-positive-inverse arguments apply.
struct PerturbationHypotheses {
  bool u_interior = false;
  /// Some extremal v has f(v) > 0 with u off the ray through S(v).
  bool f_positive_on_extremal = false;
  /// |f(u)| <= 1e-9, the pairing the scaled-family construction wants.
  bool f_u_paired_zero = false;
};

struct RankOnePerturbation {
  LinearMap map;
  PerturbationHypotheses hypotheses;
};

namespace detail {

inline bool functional_is_nonzero(const ConeSpec& cone, const Functional& f, RngStream rng) {
  if (std::abs(eval(f, canonical_cone_point(cone))) > 1e-12) return true;
  for (int i = 0; i < 64; ++i)
    if (std::abs(eval(f, sample_point(cone, Region::Cone, rng))) > 1e-12) return true;
  return false;
}

inline bool functional_in_dual(const ConeSpec& cone, const Functional& f, RngStream rng,
                               int samples) {
  const double floor = -1e-10 * functional_scale(cone, f);
  for (int i = 0; i < samples; ++i)
    if (eval(f, sample_point(cone, Region::Cone, rng)) < floor) return false;
  return true;
}

inline bool map_preserves_cone(const ConeSpec& cone, const LinearMap& s, RngStream rng,
                               int samples, double tol) {
  for (int i = 0; i < samples; ++i) {
    const Point x = sample_point(cone, Region::Cone, rng);
    if (margin(cone, conewit::apply(s, x)) < -tol) return false;
  }
  return true;
}

/// u within distance tol of the ray R+ * v (projection residual test).
inline bool on_nonneg_ray(const Point& u, const Point& v, double tol = 1e-6) {
  const double vv = inner(v, v);
  if (vv < 1e-18) return l2_norm(u) <= tol;
  const double t = inner(u, v) / vv;
  if (t < -tol) return false;
  const Point residual = sub(u, scale(v, std::max(t, 0.0)));
  return l2_norm(residual) <= tol * (1.0 + l2_norm(u));
}

}  // namespace detail

/// Builds T = S + f(.)u after checking the construction hypotheses:
/// u in K \ {0}, f in K' \ {0} (sampled), and S a sampled automorphism.
/// The witness-argument hypotheses are evaluated and attached, not enforced;
/// invertibility needs none of them.
inline RankOnePerturbation rank_one_perturb(const ConeSpec& cone, LinearMap s, Functional f,
                                            Point u, RngStream rng, int validation_samples = 100) {
  if (margin(cone, u) < -1e-9 || l2_norm(u) <= 1e-9)
    raise(Errc::NotInCone, "u must be a nonzero cone member");
  if (!detail::functional_is_nonzero(cone, f, rng.split(1)))
    raise(Errc::NotPositiveFunctional, "f vanishes on the cone");
  if (!detail::functional_in_dual(cone, f, rng.split(2), validation_samples))
    raise(Errc::NotPositiveFunctional, "f is negative somewhere on the cone");
  if (!supports_apply_inverse(s)) raise(Errc::NotAutomorphism, "S has no closed-form inverse");
  if (!detail::map_preserves_cone(cone, s, rng.split(3), validation_samples, 1e-9))
    raise(Errc::NotAutomorphism, "S does not map the cone into itself");
  {
    RngStream inv_rng = rng.split(4);
    for (int i = 0; i < validation_samples; ++i) {
      const Point x = sample_point(cone, Region::Cone, inv_rng);
      if (margin(cone, apply_inverse(s, x)) < -1e-9)
        raise(Errc::NotAutomorphism, "S^{-1} does not map the cone into itself");
    }
  }

  RankOnePerturbation out;
  out.hypotheses.u_interior = classify(cone, u, 1e-9).cls == PointClass::Interior;
  out.hypotheses.f_u_paired_zero = std::abs(eval(f, u)) <= 1e-9;
  if (!std::holds_alternative<CopositiveCone>(cone)) {
    RngStream ext_rng = rng.split(5);
    for (const Point& v : extremal_candidates(cone, ext_rng, 16)) {
      if (eval(f, v) > 1e-9 && !detail::on_nonneg_ray(u, conewit::apply(s, v))) {
        out.hypotheses.f_positive_on_extremal = true;
        break;
      }
    }
  }
  out.map = rank_one(std::move(s), std::move(f), std::move(u));
  return out;
}

/// T_n = S + n (f . S)(.) u, the scaled family used for the Archimedean
/// escalation argument. With f(u) = 0 its inverse reduces to
/// T_n^{-1}(y) = S^{-1} y - n f(y) S^{-1} u.
inline RankOnePerturbation scaled_family(const ConeSpec& cone, const LinearMap& s,
                                         const Functional& f, const Point& u, long n,
                                         RngStream rng, int validation_samples = 100) {
  if (n < 1) raise(Errc::PreconditionViolated, "family index must be positive");
  Functional pulled = scale_functional(pullback(f, s), static_cast<double>(n));
  RankOnePerturbation out =
      rank_one_perturb(cone, s, std::move(pulled), u, rng, validation_samples);
  out.hypotheses.f_u_paired_zero = std::abs(eval(f, u)) <= 1e-9;
  return out;
}

/// Random member of a generating automorphism subfamily for the cone. For the
/// copositive cone only the identity is produced.
inline LinearMap sample_automorphism(const ConeSpec& cone, RngStream& rng) {
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    std::vector<int> perm(c->n);
    for (int i = 0; i < c->n; ++i) perm[i] = i;
    for (int i = c->n - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    std::vector<double> diag(c->n);
    for (double& d : diag) d = std::exp(0.5 * rng.normal());
    return perm_diag(std::move(perm), std::move(diag));
  }
  if (const auto* c = std::get_if<LorentzCone>(&cone)) {
    // Gram-Schmidt on a gaussian matrix gives the orthogonal block
    const int d = c->d;
    std::vector<std::vector<double>> q(d, std::vector<double>(d));
    for (int col = 0; col < d; ++col) {
      std::vector<double> v(d);
      for (double& x : v) x = rng.normal();
      for (int prev = 0; prev < col; ++prev) {
        double proj = 0.0;
        for (int r = 0; r < d; ++r) proj += q[r][prev] * v[r];
        for (int r = 0; r < d; ++r) v[r] -= proj * q[r][prev];
      }
      double norm = l2_norm(v);
      if (norm < 1e-6) {
        v.assign(d, 0.0);
        v[col] = 1.0;
        norm = 1.0;
      }
      for (int r = 0; r < d; ++r) q[r][col] = v[r] / norm;
    }
    return spin_auto(std::move(q), std::exp(0.5 * rng.normal()));
  }
  if (const auto* c = std::get_if<PsdCone>(&cone)) {
    // well-conditioned factor: I plus a modest gaussian bump, redrawn if needed
    const int n = c->n;
    for (int tries = 0; tries < 100; ++tries) {
      std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
      for (int i = 0; i < n; ++i) {
        m[i][i] = 1.0;
        for (int j = 0; j < n; ++j) m[i][j] += 0.3 * rng.normal();
      }
      try {
        return congruence(std::move(m));
      } catch (const Error&) {
        continue;
      }
    }
    raise(Errc::Singular, "could not draw a well-conditioned congruence");
  }
  if (std::holds_alternative<CopositiveCone>(cone)) return identity_map();
  if (std::holds_alternative<LexCone>(cone)) {
    return lex_triangular(std::exp(0.5 * rng.normal()), rng.normal(),
                          std::exp(0.5 * rng.normal()));
  }
  if (const auto* c = std::get_if<RayCone>(&cone)) {
    // scale lambda along the ray, mu on the complement:
    // T = mu I + (lambda - mu) <., d> d, itself a rank-one perturbation
    const double lambda = std::exp(0.5 * rng.normal());
    const double mu = std::exp(0.5 * rng.normal());
    std::vector<int> perm(c->n);
    std::vector<double> diag(c->n, mu);
    for (int i = 0; i < c->n; ++i) perm[i] = i;
    std::vector<double> fvec = c->direction;
    for (double& v : fvec) v *= lambda - mu;
    return rank_one(perm_diag(std::move(perm), std::move(diag)), covector(std::move(fvec)),
                    Coordinates{c->direction});
  }
  const auto& c = std::get<GridCone>(cone);
  const int m = c.grid.size();
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  if (c.grid.is_symmetric() && rng.uniform() < 0.5) {
    for (int i = 0; i < m; ++i) perm[i] = m - 1 - i;
  }
  std::vector<double> diag(m);
  for (double& d : diag) d = std::exp(0.5 * rng.normal());
  return perm_diag(std::move(perm), std::move(diag));
}

struct PositivityCheck {
  bool positive = true;
  std::optional<Point> counterexample;
  long samples_used = 0;
};

/// Sampled falsifier for T[K] subset of K: it can certify failure with a
/// counterexample but never proves positivity. Every fourth draw comes from
/// the boundary, where positivity fails first.
inline PositivityCheck is_positive_map(const LinearMap& t, const ConeSpec& cone, RngStream& rng,
                                       long samples, double tol = 1e-9) {
  if (samples < 1) raise(Errc::PreconditionViolated, "need at least one sample");
  PositivityCheck out;
  const bool boundary_ok = is_closed(cone);
  for (long i = 0; i < samples; ++i) {
    ++out.samples_used;
    const Region region =
        (boundary_ok && i % 4 == 3) ? Region::Boundary : Region::Cone;
    Point x = sample_point(cone, region, rng);
    if (margin(cone, conewit::apply(t, x)) < -tol) {
      out.positive = false;
      out.counterexample = std::move(x);
      return out;
    }
  }
  return out;
}

/// max over gaussian samples y of |T(T^{-1} y) - y|_inf / (1 + |y|_inf).
inline double inverse_residual(const LinearMap& t, const ConeSpec& cone, RngStream& rng,
                               long samples) {
  if (!supports_apply_inverse(t)) raise(Errc::Unsupported, "map has no closed-form inverse");
  double worst = 0.0;
  for (long i = 0; i < samples; ++i) {
    const Point y = sample_ambient(cone, rng);
    const Point back = conewit::apply(t, apply_inverse(t, y));
    worst = std::max(worst, inf_norm(sub(back, y)) / (1.0 + inf_norm(y)));
  }
  return worst;
}

/// Companion residual in the other composition order, on cone samples.
inline double forward_backward_residual(const LinearMap& t, const ConeSpec& cone, RngStream& rng,
                                        long samples) {
  if (!supports_apply_inverse(t)) raise(Errc::Unsupported, "map has no closed-form inverse");
  double worst = 0.0;
  for (long i = 0; i < samples; ++i) {
    const Point x = sample_ambient(cone, rng);
    const Point back = apply_inverse(t, conewit::apply(t, x));
    worst = std::max(worst, inf_norm(sub(back, x)) / (1.0 + inf_norm(x)));
  }
  return worst;
}

}  // namespace conewit
