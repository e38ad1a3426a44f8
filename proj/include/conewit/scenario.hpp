#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "conewit/cone.hpp"
#include "conewit/operators.hpp"
#include "conewit/report.hpp"
#include "conewit/witness.hpp"

namespace conewit {

// --- assertion helpers -----------------------------------------------------------

inline Assertion assert_close(const std::string& name, double measured, double expected,
                              double tol) {
  return make_assertion(name, std::abs(measured - expected) <= tol, fmt_double(expected),
                        fmt_double(measured));
}

inline Assertion assert_le(const std::string& name, double measured, double bound) {
  return make_assertion(name, measured <= bound, "<= " + fmt_double(bound), fmt_double(measured));
}

inline Assertion assert_lt(const std::string& name, double measured, double bound) {
  return make_assertion(name, measured < bound, "< " + fmt_double(bound), fmt_double(measured));
}

inline Assertion assert_gt(const std::string& name, double measured, double bound) {
  return make_assertion(name, measured > bound, "> " + fmt_double(bound), fmt_double(measured));
}

inline Assertion assert_true(const std::string& name, bool ok, const std::string& measured) {
  return make_assertion(name, ok, "true", measured);
}

inline Assertion assert_points_close(const std::string& name, const Point& measured,
                                     const Point& expected, double tol) {
  const double diff = inf_norm(sub(measured, expected));
  return make_assertion(name, diff <= tol, fmt_point(expected),
                        fmt_point(measured) + " (|diff|=" + fmt_double(diff) + ")");
}

// --- scenario definition -----------------------------------------------------------

struct ExpectPositive {
  long samples = 2000;
};
struct ExpectInverseResidual {
  double bound = 1e-9;
  long samples = 100;
};
struct ExpectWitness {
  bool found = true;
};
struct ExpectMargin {
  std::string label;
  Point p;
  double value = 0.0;
  double tol = 1e-12;
};
struct ExpectClass {
  std::string label;
  Point p;
  PointClass cls = PointClass::Interior;
};
struct ExpectEval {
  std::string label;
  Point p;
  double value = 0.0;
  double tol = 1e-12;
};
struct ExpectApply {
  std::string label;
  Point p;
  Point image;
  double tol = 1e-12;
};
struct ExpectApplyInverse {
  std::string label;
  Point y;
  Point preimage;
  double tol = 1e-12;
};
/// The candidate y must verify as a witness: y in K, T^{-1} y strictly outside.
struct ExpectWitnessAt {
  std::string label;
  Point y;
};

using Expectation = std::variant<ExpectPositive, ExpectInverseResidual, ExpectWitness, ExpectMargin,
                                 ExpectClass, ExpectEval, ExpectApply, ExpectApplyInverse,
                                 ExpectWitnessAt>;

/// A (cone, S, f, u) configuration plus machine-checkable expectations.
struct Scenario {
  std::string name;
  ConeSpec cone;
  LinearMap s = identity_map();
  Functional f = lex_first();
  Point u = Coordinates{{1.0, 0.0}};
  long budget = 10000;
  double tol = 1e-9;
  std::vector<Expectation> expectations;
};

/// Builds T from the scenario data (validating the construction hypotheses)
/// and evaluates every expectation. Construction failures become failing
/// assertions rather than exceptions.
inline Report run_scenario(const Scenario& sc, std::uint64_t seed) {
  Report report;
  report.seed = seed;
  ScenarioResult result;
  result.scenario = sc.name;
  RngStream rng = RngStream(seed).split(0xc0fe);

  RankOnePerturbation built;
  try {
    built = rank_one_perturb(sc.cone, sc.s, sc.f, sc.u, rng.split(1));
  } catch (const Error& e) {
    result.assertions.push_back(make_assertion("operator-construction", false, "valid", e.what()));
    report.results.push_back(std::move(result));
    return report;
  }
  const LinearMap& t = built.map;

  long expectation_index = 0;
  for (const Expectation& e : sc.expectations) {
    RngStream erng = rng.split(100 + expectation_index++);
    if (const auto* ep = std::get_if<ExpectPositive>(&e)) {
      const PositivityCheck chk = is_positive_map(t, sc.cone, erng, ep->samples, sc.tol);
      result.assertions.push_back(
          assert_true("positive-map", chk.positive,
                      chk.positive ? "positive over " + std::to_string(chk.samples_used) + " samples"
                                   : "counterexample " + fmt_point(*chk.counterexample)));
    } else if (const auto* er = std::get_if<ExpectInverseResidual>(&e)) {
      const double fwd = inverse_residual(t, sc.cone, erng, er->samples);
      const double bwd = forward_backward_residual(t, sc.cone, erng, er->samples);
      result.assertions.push_back(assert_le("inverse-residual", fwd, er->bound));
      result.assertions.push_back(assert_le("inverse-residual-reverse", bwd, er->bound));
    } else if (const auto* ew = std::get_if<ExpectWitness>(&e)) {
      const WitnessReport w = nonpositive_inverse_witness(t, sc.cone, erng, sc.budget);
      result.assertions.push_back(assert_true(
          ew->found ? "witness-found" : "witness-not-found", w.found == ew->found,
          w.found ? std::string("found via ") + strategy_name(w.strategy) + " (x_margin " +
                        fmt_double(w.x_margin) + ")"
                  : "not found after " + std::to_string(w.attempts.total()) + " attempts"));
    } else if (const auto* em = std::get_if<ExpectMargin>(&e)) {
      result.assertions.push_back(
          assert_close("margin:" + em->label, margin(sc.cone, em->p), em->value, em->tol));
    } else if (const auto* ec = std::get_if<ExpectClass>(&e)) {
      const MembershipVerdict v = classify(sc.cone, ec->p, sc.tol);
      result.assertions.push_back(make_assertion("classify:" + ec->label, v.cls == ec->cls,
                                                 class_name(ec->cls), class_name(v.cls)));
    } else if (const auto* ee = std::get_if<ExpectEval>(&e)) {
      result.assertions.push_back(
          assert_close("eval:" + ee->label, eval(sc.f, ee->p), ee->value, ee->tol));
    } else if (const auto* ea = std::get_if<ExpectApply>(&e)) {
      result.assertions.push_back(
          assert_points_close("apply:" + ea->label, conewit::apply(t, ea->p), ea->image, ea->tol));
    } else if (const auto* ei = std::get_if<ExpectApplyInverse>(&e)) {
      result.assertions.push_back(assert_points_close("apply-inverse:" + ei->label,
                                                      apply_inverse(t, ei->y), ei->preimage,
                                                      ei->tol));
    } else {
      const auto& ey = std::get<ExpectWitnessAt>(e);
      const auto w = witness_from_candidate(t, sc.cone, ey.y, WitnessStrategy::Direct);
      result.assertions.push_back(assert_true(
          "witness-at:" + ey.label, w.has_value(),
          w ? "x_margin " + fmt_double(w->x_margin) + ", y_margin " + fmt_double(w->y_margin)
            : "candidate did not verify"));
    }
  }
  report.results.push_back(std::move(result));
  return report;
}

// --- property suites ---------------------------------------------------------------

namespace detail {

inline std::string cone_label(const ConeSpec& cone) {
  if (const auto* c = std::get_if<OrthantCone>(&cone))
    return "orthant:" + std::to_string(c->n);
  if (const auto* c = std::get_if<LorentzCone>(&cone))
    return "lorentz:" + std::to_string(c->d);
  if (const auto* c = std::get_if<PsdCone>(&cone)) return "psd:" + std::to_string(c->n);
  if (const auto* c = std::get_if<CopositiveCone>(&cone))
    return "copositive:" + std::to_string(c->n);
  if (std::holds_alternative<LexCone>(cone)) return "lex";
  if (const auto* c = std::get_if<RayCone>(&cone)) return "ray:" + std::to_string(c->n);
  return "grid:" + std::to_string(std::get<GridCone>(cone).grid.size());
}

/// Family-specific direction that no multiple of the boundary point u_b can
/// dominate; exercises the converse of the order-unit characterization.
inline std::optional<Point> order_unit_counterexample(const ConeSpec& cone, const Point& u_b) {
  if (const auto* c = std::get_if<OrthantCone>(&cone)) {
    const auto& v = std::get<Coordinates>(u_b).values;
    for (int i = 0; i < c->n; ++i)
      if (v[i] <= 1e-9) {
        std::vector<double> e(c->n, 0.0);
        e[i] = 1.0;
        return Point(Coordinates{std::move(e)});
      }
    return std::nullopt;
  }
  if (std::holds_alternative<LorentzCone>(cone)) {
    auto v = std::get<Coordinates>(u_b).values;
    std::vector<double> head(v.begin(), v.end() - 1);
    if (l2_norm(head) < 1e-9) return std::nullopt;
    for (double& x : head) x = -x;
    head.push_back(v.back());
    return Point(Coordinates{std::move(head)});
  }
  if (std::holds_alternative<PsdCone>(cone)) {
    const Spectrum sp = sym_eig(std::get<SymMat>(u_b));
    if (sp.eigenvalues.front() > 1e-9) return std::nullopt;
    return Point(SymMat::outer(sp.eigenvectors.front()));
  }
  if (std::holds_alternative<CopositiveCone>(cone)) {
    const SimplexMin sm = simplex_quadratic_min(std::get<SymMat>(u_b));
    if (sm.value > 1e-9) return std::nullopt;
    return Point(SymMat::outer(sm.argmin));
  }
  if (const auto* c = std::get_if<GridCone>(&cone)) {
    const auto& v = std::get<GridFunction>(u_b).values;
    for (int i = 0; i < c->grid.size(); ++i)
      if (v[i] <= 1e-9) {
        std::vector<double> hat(c->grid.size(), 0.0);
        hat[i] = 1.0;
        return Point(GridFunction{c->grid, std::move(hat)});
      }
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

/// Binds the order-theoretic propositions to sampled assertions for one cone:
/// duality of sampled functionals, extremal preservation under automorphisms,
/// the order-unit battery, the Archimedean implication, the cone axioms, and
/// margin homogeneity. Sections that do not apply to a family are recorded as
/// skipped rather than silently dropped.
inline Report run_property_suite(const ConeSpec& cone, std::uint64_t seed) {
  Report report;
  report.seed = seed;
  const std::string label = detail::cone_label(cone);
  RngStream rng = RngStream(seed).split(0x9e0);
  const bool lex = std::holds_alternative<LexCone>(cone);
  const bool ray = std::holds_alternative<RayCone>(cone);
  const bool copositive = std::holds_alternative<CopositiveCone>(cone);

  const auto skipped = [&](const std::string& section, const std::string& why) {
    ScenarioResult r;
    r.scenario = "properties/" + label + "/" + section;
    r.assertions.push_back(make_assertion("skipped", true, "n/a", why));
    return r;
  };

  // region sampling consistency
  {
    ScenarioResult r;
    r.scenario = "properties/" + label + "/region-sampling";
    RngStream srng = rng.split(1);
    for (Region region : {Region::Cone, Region::Interior, Region::Boundary, Region::Exterior}) {
      if (region == Region::Interior && !has_interior(cone)) continue;
      long bad = 0;
      const long count = 1000;
      for (long i = 0; i < count; ++i) {
        const Point p = sample_point(cone, region, srng);
        const PointClass c = classify(cone, p, 1e-9).cls;
        const bool ok = region == Region::Cone
                            ? c != PointClass::Exterior
                            : (region == Region::Interior   ? c == PointClass::Interior
                               : region == Region::Boundary ? c == PointClass::Boundary
                                                            : c == PointClass::Exterior);
        if (!ok) ++bad;
      }
      r.assertions.push_back(make_assertion(std::string("region-") + region_name(region), bad == 0,
                                            "0 mismatches",
                                            std::to_string(bad) + " mismatches of 1000"));
    }
    report.results.push_back(std::move(r));
  }

  // duality: sampled duals nonnegative on the cone, separators strictly negative
  if (lex) {
    report.results.push_back(skipped("duality", "non-closed cone: strict separation can fail"));
  } else {
    ScenarioResult r;
    r.scenario = "properties/" + label + "/duality";
    RngStream drng = rng.split(2);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Functional f = sample_dual(cone, drng, 0);
      const double floor = -1e-10 * detail::functional_scale(cone, f);
      for (int i = 0; i < 100; ++i) {
        const double v = eval(f, sample_point(cone, Region::Cone, drng));
        if (v < floor) worst = std::min(worst, v);
      }
    }
    r.assertions.push_back(
        assert_true("duals-nonnegative-on-cone", worst == 0.0, fmt_double(worst)));
    long separated = 0;
    const long count = 100;
    for (long i = 0; i < count; ++i) {
      const Point p = sample_point(cone, Region::Exterior, drng);
      const SeparatingFunctional sep = separating_functional(cone, p);
      if (eval(sep.f, p) < 0.0) ++separated;
    }
    r.assertions.push_back(make_assertion("separators-strictly-negative", separated == count,
                                          std::to_string(count), std::to_string(separated)));
    report.results.push_back(std::move(r));
  }

  // extremal preservation under sampled automorphisms
  if (copositive || ray) {
    report.results.push_back(
        skipped("extremal-preservation", copositive ? "extremal test unsupported"
                                                    : "one-dimensional span"));
  } else {
    ScenarioResult r;
    r.scenario = "properties/" + label + "/extremal-preservation";
    RngStream erng = rng.split(3);
    long ok = 0;
    const long count = 100;
    for (long i = 0; i < count; ++i) {
      const LinearMap s = sample_automorphism(cone, erng);
      const Point ext = sample_extremal(cone, erng);
      const Point member = sample_point(cone, Region::Cone, erng);
      const bool a = is_extremal(cone, ext, 1e-9) && is_extremal(cone, conewit::apply(s, ext), 1e-9);
      bool b = true;
      if (!is_extremal(cone, member, 1e-9)) b = !is_extremal(cone, conewit::apply(s, member), 1e-9);
      if (a && b) ++ok;
    }
    r.assertions.push_back(make_assertion("preserved-both-ways", ok == count,
                                          std::to_string(count), std::to_string(ok)));
    report.results.push_back(std::move(r));
  }

  // order-unit battery
  if (lex || ray) {
    report.results.push_back(
        skipped("order-unit", lex ? "exact-rule interior; band arguments do not apply"
                                  : "empty interior"));
  } else {
    ScenarioResult r;
    r.scenario = "properties/" + label + "/order-unit";
    RngStream orng = rng.split(4);

    {  // (i) forward: interior points dominate everything by doubling search
      long dominated = 0;
      const long count = 100;
      const Point u = sample_point(cone, Region::Interior, orng);
      for (long i = 0; i < count; ++i) {
        const Point x = sample_ambient(cone, orng);
        double lambda = 1.0;
        bool found = false;
        while (lambda <= 1e6) {
          if (leq(cone, x, scale(u, lambda), 1e-9)) {
            found = true;
            break;
          }
          lambda *= 2.0;
        }
        if (found) ++dominated;
      }
      r.assertions.push_back(make_assertion("order-unit-forward", dominated == count,
                                            std::to_string(count), std::to_string(dominated)));
    }
    {  // (i) converse on boundary points
      long defeated = 0, tried = 0;
      for (long i = 0; i < 50; ++i) {
        const Point ub = sample_point(cone, Region::Boundary, orng);
        const auto bad = detail::order_unit_counterexample(cone, ub);
        if (!bad) continue;
        ++tried;
        bool dominated = false;
        double lambda = 1.0;
        while (lambda <= 1e6) {
          if (leq(cone, *bad, scale(ub, lambda), 1e-9)) {
            dominated = true;
            break;
          }
          lambda *= 2.0;
        }
        if (!dominated) ++defeated;
      }
      r.assertions.push_back(make_assertion("order-unit-converse-on-boundary", defeated == tried,
                                            std::to_string(tried), std::to_string(defeated)));
    }
    {  // (ii) strict pairing with interior points
      long positive = 0;
      const long count = 20;
      const Point u = sample_point(cone, Region::Interior, orng);
      for (long i = 0; i < count; ++i)
        if (eval(sample_dual(cone, orng, 0), u) > 0.0) ++positive;
      r.assertions.push_back(make_assertion("interior-pairing-positive", positive == count,
                                            std::to_string(count), std::to_string(positive)));
    }
    {  // (iii) dominating an interior point keeps you interior
      long ok = 0;
      const long count = 50;
      for (long i = 0; i < count; ++i) {
        const Point u = sample_point(cone, Region::Interior, orng);
        const Point v = add(u, sample_point(cone, Region::Cone, orng));
        if (classify(cone, v, 1e-9).cls == PointClass::Interior) ++ok;
      }
      r.assertions.push_back(make_assertion("dominating-interior-stays-interior", ok == count,
                                            std::to_string(count), std::to_string(ok)));
    }
    {  // (iv) positive scalings of interior points
      long ok = 0, total = 0;
      for (long i = 0; i < 20; ++i) {
        const Point u = sample_point(cone, Region::Interior, orng);
        for (double alpha : {0.5, 2.0, 10.0}) {
          ++total;
          if (classify(cone, scale(u, alpha), 1e-9).cls == PointClass::Interior) ++ok;
        }
      }
      r.assertions.push_back(make_assertion("scaled-interior-stays-interior", ok == total,
                                            std::to_string(total), std::to_string(ok)));
    }
    {  // (v) automorphisms preserve interiority both ways
      long ok = 0;
      const long count = 50;
      for (long i = 0; i < count; ++i) {
        const LinearMap s = sample_automorphism(cone, orng);
        const Point ui = sample_point(cone, Region::Interior, orng);
        const Point ub = sample_point(cone, Region::Boundary, orng);
        const bool fwd = classify(cone, conewit::apply(s, ui), 1e-9).cls == PointClass::Interior;
        const bool bnd = classify(cone, conewit::apply(s, ub), 1e-9).cls != PointClass::Interior;
        if (fwd && bnd) ++ok;
      }
      r.assertions.push_back(make_assertion("automorphism-preserves-interior", ok == count,
                                            std::to_string(count), std::to_string(ok)));
    }
    report.results.push_back(std::move(r));
  }

  // Archimedean implication (closed cones)
  if (lex) {
    report.results.push_back(skipped("archimedean", "requires a closed cone"));
  } else {
    ScenarioResult r;
    r.scenario = "properties/" + label + "/archimedean";
    RngStream arng = rng.split(5);
    const long spot[] = {1, 2, 5, 10, 100, 1000, 10000};
    long nonvacuous = 0, violations = 0;
    for (long i = 0; i < 200; ++i) {
      // half the draws are built to satisfy the hypothesis
      const bool constructed = i % 2 == 0;
      const Point y = sample_point(cone, Region::Cone, arng);
      const Point x =
          constructed ? scale(sample_point(cone, Region::Cone, arng), -1.0) : sample_ambient(cone, arng);
      bool hypothesis = true;
      for (long n : spot) {
        if (!leq(cone, scale(x, static_cast<double>(n)), y, 1e-9)) {
          hypothesis = false;
          break;
        }
      }
      if (!hypothesis) continue;
      ++nonvacuous;
      if (margin(cone, scale(x, -1.0)) < -1e-6) ++violations;
    }
    r.assertions.push_back(make_assertion("archimedean-implication", violations == 0,
                                          "0 violations",
                                          std::to_string(violations) + " of " +
                                              std::to_string(nonvacuous) + " non-vacuous"));
    r.assertions.push_back(
        assert_gt("archimedean-nonvacuous-cases", static_cast<double>(nonvacuous), 0.0));
    report.results.push_back(std::move(r));
  }

  // cone axioms on samples
  {
    ScenarioResult r;
    r.scenario = "properties/" + label + "/cone-axioms";
    RngStream crng = rng.split(6);
    long closed_ok = 0, pointed_ok = 0;
    const long count = 1000;
    for (long i = 0; i < count; ++i) {
      const Point a = sample_point(cone, Region::Cone, crng);
      const Point b = sample_point(cone, Region::Cone, crng);
      const double lambda = std::abs(crng.normal()) * 2.0;
      if (in_cone(cone, add(a, b), 1e-9) && in_cone(cone, scale(a, lambda), 1e-9)) ++closed_ok;
      if (l2_norm(a) > 1e-9 && !in_cone(cone, scale(a, -1.0), 1e-9)) ++pointed_ok;
    }
    r.assertions.push_back(make_assertion("closed-under-addition-and-scaling", closed_ok == count,
                                          std::to_string(count), std::to_string(closed_ok)));
    r.assertions.push_back(make_assertion("pointed", pointed_ok == count, std::to_string(count),
                                          std::to_string(pointed_ok)));
    report.results.push_back(std::move(r));
  }

  // margin homogeneity
  if (lex) {
    report.results.push_back(skipped("homogeneity", "lexicographic margin is quantized"));
  } else {
    ScenarioResult r;
    r.scenario = "properties/" + label + "/homogeneity";
    RngStream hrng = rng.split(7);
    double worst = 0.0;
    for (long i = 0; i < 100; ++i) {
      const Point p = (i % 2 == 0) ? sample_point(cone, Region::Cone, hrng)
                                   : sample_ambient(cone, hrng);
      const double m = margin(cone, p);
      for (double lambda : {0.5, 2.0, 10.0}) {
        const double scaled = margin(cone, scale(p, lambda));
        const double rel = std::abs(scaled - lambda * m) / (1.0 + std::abs(lambda * m));
        worst = std::max(worst, rel);
      }
    }
    r.assertions.push_back(assert_le("degree-one-homogeneity", worst, 1e-9));
    report.results.push_back(std::move(r));
  }

  report.sort();
  return report;
}

}  // namespace conewit
