#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "conewit/cone.hpp"
#include "conewit/maps.hpp"
#include "conewit/operators.hpp"

namespace conewit {

// Witness tolerances are asymmetric on purpose: membership of y is accepted
// down to -1e-9 while exteriority of x must clear -1e-6, so a reported
// witness cannot be a rounding artifact.
inline constexpr double kWitnessMemberTol = 1e-9;
inline constexpr double kWitnessExteriorTol = 1e-6;

// --- boundary crossing ------------------------------------------------------------

/// Crossing parameter of the segment (1-t) u + t v with the cone boundary.
struct CrossingResult {
  double c = 0.0;
  Point point;
  MembershipVerdict verdict_at_c;
};

/// Bisection along g(t) = (1-t) u + t v from an interior point to an exterior
/// one. Convexity of the (closed) cone makes the membership split monotone in
/// t, so the sign of the margin steers the bisection.
inline CrossingResult boundary_crossing(const ConeSpec& cone, const Point& u, const Point& v,
                                        double tol = 1e-10) {
  if (std::holds_alternative<LexCone>(cone))
    raise(Errc::Unsupported, "the lexicographic cone is not closed");
  const double mu = margin(cone, u);
  const double mv = margin(cone, v);
  if (classify(cone, u, 1e-9).cls != PointClass::Interior ||
      classify(cone, v, 1e-9).cls != PointClass::Exterior)
    raise(Errc::BadEndpoints, "need interior u and exterior v");

  const auto at = [&](double t) { return add(scale(u, 1.0 - t), scale(v, t)); };
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (margin(cone, at(mid)) > 0.0 ? lo : hi) = mid;
  }

  CrossingResult out;
  out.c = 0.5 * (lo + hi);
  out.point = at(out.c);
  const double band = std::max(1e-12, 10.0 * tol * (std::abs(mu) + std::abs(mv)));
  out.verdict_at_c = classify(cone, out.point, band);
  return out;
}

// --- witness reports --------------------------------------------------------------

enum class WitnessStrategy { Direct, BoundaryFunctional, Extremal, Scaling };

inline const char* strategy_name(WitnessStrategy s) {
  switch (s) {
    case WitnessStrategy::Direct: return "direct";
    case WitnessStrategy::BoundaryFunctional: return "boundary-functional";
    case WitnessStrategy::Extremal: return "extremal";
    case WitnessStrategy::Scaling: return "scaling";
  }
  return "?";
}

struct WitnessAttempts {
  long direct = 0;
  long boundary_functional = 0;
  long extremal = 0;
  long scaling = 0;
  long total() const { return direct + boundary_functional + extremal + scaling; }
};

/// Outcome of a non-positive-inverse search. When found, witness_y lies in K,
/// preimage_x = T^{-1}(witness_y) lies strictly outside, and the forward
/// application reproduces witness_y.
struct WitnessReport {
  bool found = false;
  std::optional<Point> witness_y;
  std::optional<Point> preimage_x;
  double y_margin = 0.0;
  double x_margin = 0.0;
  WitnessStrategy strategy = WitnessStrategy::Direct;
  WitnessAttempts attempts;
  std::optional<long> scaling_n;
};

/// Verifies a candidate y independently of how it was produced: y must be in
/// the cone, its preimage strictly exterior, and T(preimage) must reproduce y.
inline std::optional<WitnessReport> witness_from_candidate(const LinearMap& t, const ConeSpec& cone,
                                                           const Point& y,
                                                           WitnessStrategy strategy) {
  const double ym = margin(cone, y);
  if (ym < -kWitnessMemberTol) return std::nullopt;
  Point x = apply_inverse(t, y);
  const double xm = margin(cone, x);
  if (!(xm < -kWitnessExteriorTol)) return std::nullopt;
  const Point forward = conewit::apply(t, x);
  if (inf_norm(sub(forward, y)) > 1e-9 * (1.0 + inf_norm(y))) return std::nullopt;
  WitnessReport r;
  r.found = true;
  r.witness_y = y;
  r.preimage_x = std::move(x);
  r.y_margin = ym;
  r.x_margin = xm;
  r.strategy = strategy;
  return r;
}

// --- boundary-functional search ------------------------------------------------------

/// A boundary point where f is strictly positive. This realizes the existence
/// claim behind the interior-perturbation argument; search failure is
/// reported as BudgetExhausted, never as a refutation.
inline Point boundary_functional_witness(const ConeSpec& cone, const Functional& f, RngStream& rng,
                                         long budget) {
  if (!has_interior(cone))
    raise(Errc::BudgetExhausted, "cone has empty interior; no boundary point can promote");
  const double fscale = std::max(std::abs(eval(f, canonical_interior(cone))), 1e-9);
  const double threshold = 1e-6 * fscale;

  long used = 0;
  RngStream cand_rng = rng.split(1);
  for (const Point& x : boundary_candidates(cone, cand_rng, static_cast<int>(std::min<long>(budget, 32)))) {
    if (++used > budget) break;
    if (classify(cone, x, 1e-9).cls != PointClass::Boundary) continue;
    if (eval(f, x) > threshold) return x;
  }
  if (is_closed(cone)) {
    RngStream seg_rng = rng.split(2);
    while (used++ < budget) {
      const Point u = sample_point(cone, Region::Interior, seg_rng);
      const Point v = sample_point(cone, Region::Exterior, seg_rng);
      const CrossingResult cr = boundary_crossing(cone, u, v, 1e-12);
      if (eval(f, cr.point) > threshold) return cr.point;
    }
  }
  raise(Errc::BudgetExhausted, "no boundary point with positive pairing found");
}

/// True when T maps the given boundary point strictly inside, which certifies
/// that T is not an automorphism (automorphisms preserve the boundary).
inline bool interior_promotion_check(const LinearMap& t, const ConeSpec& cone, const Point& x) {
  const auto* rp = std::get_if<RankOnePerturbed>(&t);
  if (!rp || classify(cone, rp->u, 1e-9).cls != PointClass::Interior)
    raise(Errc::PreconditionViolated, "need a rank-one perturbation with interior u");
  if (classify(cone, x, 1e-9).cls != PointClass::Boundary)
    raise(Errc::PreconditionViolated, "promotion check needs a boundary point");
  return classify(cone, conewit::apply(t, x), 1e-9).cls == PointClass::Interior;
}

namespace detail {

inline int span_dimension(const ConeSpec& cone) {
  if (const auto* c = std::get_if<OrthantCone>(&cone)) return c->n;
  if (const auto* c = std::get_if<LorentzCone>(&cone)) return c->d + 1;
  if (const auto* c = std::get_if<PsdCone>(&cone)) return c->n * (c->n + 1) / 2;
  if (const auto* c = std::get_if<CopositiveCone>(&cone)) return c->n * (c->n + 1) / 2;
  if (std::holds_alternative<LexCone>(cone)) return 2;
  if (std::holds_alternative<RayCone>(cone)) return 1;
  return std::get<GridCone>(cone).grid.size();
}

}  // namespace detail

// --- extremal witness ---------------------------------------------------------------

struct ExtremalWitness {
  Point v;
  WitnessReport report;
};

/// Finds an extremal v with f(v) > 0 and u off the ray through S(v), then
/// certifies that T(v) = S(v) + f(v) u left the extremal set. The membership
/// witness is y := S(v): if its preimage v - lambda S^{-1}u stayed in the
/// cone, extremality of v would force u back onto the ray.
inline ExtremalWitness extremal_witness(const ConeSpec& cone, const LinearMap& s,
                                        const Functional& f, const Point& u, RngStream& rng,
                                        long budget) {
  if (std::holds_alternative<CopositiveCone>(cone))
    raise(Errc::Unsupported, "extremal tests are unsupported for the copositive cone");
  if (detail::span_dimension(cone) < 2)
    raise(Errc::PreconditionViolated, "cone span must have dimension >= 2");

  const LinearMap t = rank_one(s, f, u);
  const double fscale = std::max(std::abs(eval(f, canonical_cone_point(cone))), 1e-9);

  bool saw_pairing = false;
  long used = 0;
  RngStream cand_rng = rng.split(1);
  for (const Point& v : extremal_candidates(cone, cand_rng, static_cast<int>(std::min<long>(budget, 64)))) {
    if (++used > budget) break;
    if (std::abs(eval(f, v)) <= 1e-9 * fscale) continue;
    saw_pairing = true;
    const Point sv = conewit::apply(s, v);
    if (detail::on_nonneg_ray(u, sv)) continue;

    ExtremalWitness out;
    out.v = v;
    const Point tv = conewit::apply(t, v);
    bool left_extremal = false;
    if (classify(cone, tv, 1e-9).cls != PointClass::Exterior)
      left_extremal = !is_extremal(cone, tv, 1e-9);
    if (auto r = witness_from_candidate(t, cone, sv, WitnessStrategy::Extremal);
        r && left_extremal) {
      out.report = std::move(*r);
      out.report.attempts.extremal = used;
      return out;
    }
    out.report.found = false;
    out.report.attempts.extremal = used;
    return out;
  }
  if (!saw_pairing)
    raise(Errc::NoExtremalWithPositivePairing, "f vanishes on every extremal candidate");
  ExtremalWitness out;
  out.v = canonical_cone_point(cone);
  out.report.found = false;
  out.report.attempts.extremal = used;
  return out;
}

// --- the strategy cascade -------------------------------------------------------------

/// Searches for y in K whose preimage under T is strictly outside K.
/// Cheapest strategies first: direct sampling, then the boundary-functional
/// construction, then the extremal argument, then pairing-guided candidates.
/// found = false after the full budget is a search failure, not a proof.
inline WitnessReport nonpositive_inverse_witness(const LinearMap& t, const ConeSpec& cone,
                                                 RngStream& rng, long budget = 10000) {
  if (!supports_apply_inverse(t)) raise(Errc::Unsupported, "map has no closed-form inverse");
  WitnessAttempts attempts;

  // direct: canonical point first, then cone samples with boundary mixed in
  {
    RngStream direct_rng = rng.split(1);
    for (long i = 0; i < budget; ++i) {
      ++attempts.direct;
      Point y = (i == 0) ? canonical_cone_point(cone)
                         : sample_point(cone, (is_closed(cone) && i % 3 == 2) ? Region::Boundary
                                                                              : Region::Cone,
                                        direct_rng);
      if (auto r = witness_from_candidate(t, cone, y, WitnessStrategy::Direct)) {
        r->attempts = attempts;
        return *r;
      }
    }
  }

  const auto* rp = std::get_if<RankOnePerturbed>(&t);

  // boundary functional: x0 on the boundary with f(x0) > 0, then walk the
  // preimage segment x0 - eps*w for cone directions w until it exits while
  // T(x0 - eps*w) is still inside
  if (rp && has_interior(cone) && is_closed(cone)) {
    RngStream bf_rng = rng.split(2);
    const double fscale = std::max(std::abs(eval(rp->f, canonical_interior(cone))), 1e-9);
    std::vector<Point> starts;
    RngStream cand_rng = bf_rng.split(0);
    for (const Point& x : boundary_candidates(cone, cand_rng, 16)) {
      if (classify(cone, x, 1e-9).cls == PointClass::Boundary &&
          eval(rp->f, x) > 1e-6 * fscale)
        starts.push_back(x);
      if (starts.size() >= 24) break;
    }
    RngStream dir_rng = bf_rng.split(1);
    std::vector<Point> dirs{rp->u};
    dirs.push_back(sample_point(cone, Region::Interior, dir_rng));
    dirs.push_back(sample_point(cone, Region::Cone, dir_rng));
    const long cap = std::max<long>(budget / 4, 32);
    for (const Point& x0 : starts) {
      for (const Point& w : dirs) {
        if (attempts.boundary_functional >= cap) break;
        ++attempts.boundary_functional;
        double eps = 1.0;
        for (int halving = 0; halving < 60; ++halving, eps *= 0.5) {
          const Point x_out = sub(x0, scale(w, eps));
          if (!(margin(cone, x_out) < -kWitnessExteriorTol)) break;  // shrinking further only helps y
          const Point y = conewit::apply(t, x_out);
          if (margin(cone, y) < 0.0) continue;
          if (auto r = witness_from_candidate(t, cone, y, WitnessStrategy::BoundaryFunctional)) {
            r->attempts = attempts;
            return *r;
          }
        }
      }
    }
  }

  // extremal: y = S(v) for an extremal v with positive pairing and u off-ray
  if (rp && !std::holds_alternative<CopositiveCone>(cone) && detail::span_dimension(cone) >= 2) {
    RngStream ex_rng = rng.split(3);
    const double fscale = std::max(std::abs(eval(rp->f, canonical_cone_point(cone))), 1e-9);
    for (const Point& v : extremal_candidates(cone, ex_rng, 32)) {
      if (attempts.extremal >= std::max<long>(budget / 4, 32)) break;
      ++attempts.extremal;
      if (std::abs(eval(rp->f, v)) <= 1e-9 * fscale) continue;
      const Point sv = conewit::apply(*rp->inner, v);
      if (detail::on_nonneg_ray(rp->u, sv)) continue;
      if (auto r = witness_from_candidate(t, cone, sv, WitnessStrategy::Extremal)) {
        r->attempts = attempts;
        return *r;
      }
    }
  }

  // scaling-style: pairing-guided candidates, the n = 1 shadow of the
  // escalation search
  if (rp) {
    RngStream sc_rng = rng.split(4);
    std::vector<Point> cands = extremal_candidates(cone, sc_rng, 16);
    {
      RngStream more = sc_rng.split(7);
      auto extra = boundary_candidates(cone, more, 8);
      cands.insert(cands.end(), extra.begin(), extra.end());
    }
    for (const Point& y : cands) {
      if (attempts.scaling >= std::max<long>(budget / 4, 32)) break;
      ++attempts.scaling;
      if (eval(rp->f, y) <= 1e-9) continue;
      if (auto r = witness_from_candidate(t, cone, y, WitnessStrategy::Scaling)) {
        r->attempts = attempts;
        return *r;
      }
    }
  }

  WitnessReport out;
  out.found = false;
  out.attempts = attempts;
  return out;
}

// --- scaled-family escalation ------------------------------------------------------------

struct ScalingSearch {
  std::optional<long> n;
  WitnessReport report;
};

/// Smallest n such that T_n = S + n (f . S)(.) u has a verified non-positive
/// inverse, using a fixed y with f(y) > 0 and the explicit inverse
/// T_n^{-1}(y) = S^{-1} y - n f(y) S^{-1} u. Requires the zero pairing
/// f(u) = 0 that makes the family formula exact.
inline ScalingSearch smallest_scaling_n(const ConeSpec& cone, const LinearMap& s,
                                        const Functional& f, const Point& u, RngStream& rng,
                                        long n_max = 64) {
  if (std::abs(eval(f, u)) > 1e-9)
    raise(Errc::PreconditionViolated, "scaling search needs f(u) = 0");

  const double fscale = std::max(std::abs(eval(f, canonical_cone_point(cone))), 1e-9);
  std::optional<Point> y;
  RngStream cand_rng = rng.split(1);
  std::vector<Point> cands = extremal_candidates(cone, cand_rng, 8);
  cands.push_back(canonical_cone_point(cone));
  for (const Point& c : cands) {
    if (eval(f, c) > 1e-9 * fscale) {
      y = c;
      break;
    }
  }
  ScalingSearch out;
  if (!y) {
    out.report.found = false;
    return out;
  }

  const Point su = apply_inverse(s, u);
  const Point sy = apply_inverse(s, *y);
  const double fy = eval(f, *y);
  for (long n = 1; n <= n_max; ++n) {
    ++out.report.attempts.scaling;
    const Point x = sub(sy, scale(su, static_cast<double>(n) * fy));
    if (!(margin(cone, x) < -kWitnessExteriorTol)) continue;
    const RankOnePerturbation tn = scaled_family(cone, s, f, u, n, rng.split(2), 50);
    if (auto r = witness_from_candidate(tn.map, cone, *y, WitnessStrategy::Scaling)) {
      r->attempts = out.report.attempts;
      r->scaling_n = n;
      out.report = std::move(*r);
      out.n = n;
      return out;
    }
  }
  out.report.found = false;  // reported, not asserted impossible
  return out;
}

// --- 2x2 monomial-plus-rank-one decomposition ---------------------------------------------

/// Feasibility certificate of one permutation case: rank-one consistency
/// pins `required_product`, positivity of the diagonal caps it strictly by
/// `strict_bound`; the case is feasible iff required < bound.
struct CaseCertificate {
  bool feasible = false;
  double required_product = 0.0;
  double strict_bound = 0.0;
};

struct GridScan2x2 {
  double min_residual = 0.0;
  bool swapped = false;
  double d1 = 0.0, d2 = 0.0;
};

struct Decomposition2x2 {
  bool feasible = false;
  bool swapped = false;
  std::array<double, 2> diag{{0.0, 0.0}};
  std::array<double, 2> u{{0.0, 0.0}};
  std::array<double, 2> v{{0.0, 0.0}};
  double reconstruction_error = 0.0;
  CaseCertificate identity_case;
  CaseCertificate swap_case;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Brute-force feasibility scan over (d1, d2) in (0, 10]^2 at step 0.01 for
/// both permutations. The residual is zero exactly when M - P D is entrywise
/// nonnegative and rank one.
inline GridScan2x2 grid_scan_2x2(const Mat2& m) {
  GridScan2x2 best;
  best.min_residual = 1e300;
  for (int swap_case = 0; swap_case < 2; ++swap_case) {
    for (int i = 1; i <= 1000; ++i) {
      const double d1 = 0.01 * i;
      for (int j = 1; j <= 1000; ++j) {
        const double d2 = 0.01 * j;
        double r00 = m[0][0], r01 = m[0][1], r10 = m[1][0], r11 = m[1][1];
        if (swap_case == 0) {
          r00 -= d1;
          r11 -= d2;
        } else {
          r01 -= d2;
          r10 -= d1;
        }
        double neg = 0.0;
        neg = std::max(neg, -r00);
        neg = std::max(neg, -r01);
        neg = std::max(neg, -r10);
        neg = std::max(neg, -r11);
        const double scale = 1.0 + std::max(std::max(std::abs(r00), std::abs(r01)),
                                            std::max(std::abs(r10), std::abs(r11)));
        const double residual = std::max(neg, std::abs(r00 * r11 - r01 * r10) / scale);
        if (residual < best.min_residual) {
          best.min_residual = residual;
          best.swapped = swap_case == 1;
          best.d1 = d1;
          best.d2 = d2;
        }
      }
    }
  }
  return best;
}

namespace detail {

/// Nonnegative rank-one factorization of an entrywise-nonnegative 2x2 matrix
/// with (near) zero determinant.
inline void factor_rank_one(double r00, double r01, double r10, double r11,
                            std::array<double, 2>& u, std::array<double, 2>& v) {
  const double entries[4] = {r00, r01, r10, r11};
  int bi = 0;
  for (int k = 1; k < 4; ++k)
    if (entries[k] > entries[bi]) bi = k;
  if (entries[bi] <= 0.0) {
    u = {0.0, 0.0};
    v = {0.0, 0.0};
    return;
  }
  const int pi = bi / 2, pj = bi % 2;
  const double pivot = entries[bi];
  const double col[2] = {pj == 0 ? r00 : r01, pj == 0 ? r10 : r11};
  const double row[2] = {pi == 0 ? r00 : r10, pi == 0 ? r01 : r11};
  const double s = std::sqrt(pivot);
  u = {col[0] / s, col[1] / s};
  v = {row[0] / s, row[1] / s};
}

}  // namespace detail

/// Decides whether a nonnegative invertible 2x2 matrix splits as PD + u v^T
/// with P a permutation, D a positive diagonal and u, v entrywise >= 0,
/// producing either the factors or per-case infeasibility certificates backed
/// by a grid scan.
inline Decomposition2x2 decompose_2x2(const Mat2& m) {
  for (const auto& row : m)
    for (double x : row)
      if (x < 0.0) raise(Errc::NotNonnegative, "matrix must be entrywise nonnegative");
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (std::abs(det) < 1e-12) raise(Errc::Singular, "matrix must be invertible");

  Decomposition2x2 out;

  // identity case: R = M - diag(d), off-diagonal entries of R are fixed
  out.identity_case.required_product = m[0][1] * m[1][0];
  out.identity_case.strict_bound = m[0][0] * m[1][1];
  out.identity_case.feasible =
      out.identity_case.required_product < out.identity_case.strict_bound;

  // swap case: R = M - antidiag(d), diagonal entries of R are fixed
  out.swap_case.required_product = m[0][0] * m[1][1];
  out.swap_case.strict_bound = m[0][1] * m[1][0];
  out.swap_case.feasible = out.swap_case.required_product < out.swap_case.strict_bound;

  const auto finish = [&](bool swapped, double d1, double d2) {
    out.feasible = true;
    out.swapped = swapped;
    out.diag = {d1, d2};
    double r00 = m[0][0], r01 = m[0][1], r10 = m[1][0], r11 = m[1][1];
    if (!swapped) {
      r00 -= d1;
      r11 -= d2;
    } else {
      r01 -= d2;
      r10 -= d1;
    }
    detail::factor_rank_one(r00, r01, r10, r11, out.u, out.v);
    double err = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double pd = 0.0;
        if (!swapped) {
          pd = (i == j) ? (i == 0 ? d1 : d2) : 0.0;
        } else {
          pd = (i == 0 && j == 1) ? d2 : (i == 1 && j == 0 ? d1 : 0.0);
        }
        err = std::max(err, std::abs(m[i][j] - pd - out.u[i] * out.v[j]));
      }
    out.reconstruction_error = err;
  };

  if (out.identity_case.feasible) {
    const double c = out.identity_case.required_product;
    if (c > 0.0) {
      const double r00 = 0.5 * (c / m[1][1] + m[0][0]);
      finish(false, m[0][0] - r00, m[1][1] - c / r00);
    } else if (m[0][1] == 0.0 && m[1][0] == 0.0) {
      finish(false, m[0][0], m[1][1]);
    } else if (m[0][1] == 0.0) {
      finish(false, m[0][0], 0.5 * m[1][1]);  // residue keeps row 0 zero
    } else {
      finish(false, 0.5 * m[0][0], m[1][1]);  // residue keeps row 1 zero
    }
    return out;
  }
  if (out.swap_case.feasible) {
    const double c = out.swap_case.required_product;
    if (c > 0.0) {
      const double r01 = 0.5 * (c / m[1][0] + m[0][1]);
      finish(true, m[1][0] - c / r01, m[0][1] - r01);
    } else if (m[0][0] == 0.0 && m[1][1] == 0.0) {
      finish(true, m[1][0], m[0][1]);
    } else if (m[0][0] == 0.0) {
      finish(true, 0.5 * m[1][0], m[0][1]);  // residue keeps row 0 zero
    } else {
      finish(true, m[1][0], 0.5 * m[0][1]);  // residue keeps row 1 zero
    }
    return out;
  }

  // both permutation cases fail only when det(M) = 0, which the invertibility
  // guard excludes; callers probing near-singular inputs can grid_scan_2x2
  out.feasible = false;
  return out;
}

}  // namespace conewit
