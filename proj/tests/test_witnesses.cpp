#include <doctest.h>

#include <cmath>
#include <functional>

#include <conewit/witness.hpp>

using namespace conewit;

namespace {
Errc thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::Unsupported;
}
}  // namespace

TEST_CASE("bisection recovers the analytic crossings") {
  {
    // second coordinate 1 - 2t vanishes at t = 1/2
    const CrossingResult cr =
        boundary_crossing(make_orthant(2), coords({1.0, 1.0}), coords({2.0, -1.0}));
    CHECK(std::abs(cr.c - 0.5) <= 1e-9);
    CHECK(inf_norm(sub(cr.point, coords({1.5, 0.0}))) <= 1e-8);
    CHECK(cr.verdict_at_c.cls == PointClass::Boundary);
  }
  {
    // solve 1 - t = 2t
    const CrossingResult cr =
        boundary_crossing(make_lorentz(1), coords({0.0, 1.0}), coords({2.0, 0.0}));
    CHECK(std::abs(cr.c - 1.0 / 3.0) <= 1e-9);
    CHECK(inf_norm(sub(cr.point, coords({2.0 / 3.0, 2.0 / 3.0}))) <= 1e-8);
  }
  {
    // eigenvalue 1 - 2t
    const CrossingResult cr = boundary_crossing(make_psd(2), Point(SymMat::identity(2)),
                                                Point(SymMat::diag({1.0, -1.0})));
    CHECK(std::abs(cr.c - 0.5) <= 1e-9);
  }
}

TEST_CASE("bisection endpoint and family guards") {
  CHECK(thrown_code([] {
          boundary_crossing(make_orthant(2), coords({1.0, -1.0}), coords({2.0, -1.0}));
        }) == Errc::BadEndpoints);
  CHECK(thrown_code([] {
          boundary_crossing(make_orthant(2), coords({1.0, 1.0}), coords({2.0, 2.0}));
        }) == Errc::BadEndpoints);
  CHECK(thrown_code([] {
          boundary_crossing(make_lex(), coords({1.0, 0.0}), coords({-1.0, 0.0}));
        }) == Errc::Unsupported);
}

TEST_CASE("crossing sandwich on random segments") {
  RngStream rng(12);
  for (const ConeSpec& cone :
       {make_orthant(3), make_lorentz(2), make_psd(2), make_copositive(2),
        make_grid_cone(Grid({0.0, 0.5, 1.0}))}) {
    for (int i = 0; i < 20; ++i) {
      const Point u = sample_point(cone, Region::Interior, rng);
      const Point v = sample_point(cone, Region::Exterior, rng);
      const double tol = 1e-10;
      const CrossingResult cr = boundary_crossing(cone, u, v, tol);
      const auto at = [&](double t) { return add(scale(u, 1.0 - t), scale(v, t)); };
      CHECK(margin(cone, at(cr.c - 10.0 * tol)) > -tol);
      CHECK(margin(cone, at(cr.c + 10.0 * tol)) < tol);
    }
  }
}

TEST_CASE("boundary points with positive pairing are found deterministically") {
  RngStream rng(13);
  {
    const Point x = boundary_functional_witness(make_orthant(3), covector({1.0, 1.0, 1.0}), rng, 1000);
    CHECK(classify(make_orthant(3), x, 1e-9).cls == PointClass::Boundary);
    CHECK(eval(covector({1.0, 1.0, 1.0}), x) > 1e-6);
  }
  {
    const Functional f = spin_dual({1.0, 0.0});
    const Point x = boundary_functional_witness(make_lorentz(2), f, rng, 1000);
    CHECK(classify(make_lorentz(2), x, 1e-9).cls == PointClass::Boundary);
    CHECK(eval(f, x) > 1e-6);
  }
  // the ray cone is flagged before any search happens
  CHECK(thrown_code([&] {
          boundary_functional_witness(make_ray(3, {1.0, 0.0, 0.0}), covector({1.0, 0.0, 0.0}),
                                      rng, 1000);
        }) == Errc::BudgetExhausted);
}

TEST_CASE("interior promotion certifies non-automorphisms") {
  // interior u: the all-ones perturbation pushes e1 strictly inside
  const LinearMap t =
      rank_one(identity_map(), covector({1.0, 1.0, 1.0}), coords({1.0, 1.0, 1.0}));
  CHECK(interior_promotion_check(t, make_orthant(3), coords({1.0, 0.0, 0.0})));
  // boundary u: the doubling map keeps e2 on the boundary, precondition fails
  const LinearMap ctrl =
      rank_one(identity_map(), covector({1.0, 0.0, 0.0}), coords({1.0, 0.0, 0.0}));
  CHECK(thrown_code([&] {
          interior_promotion_check(ctrl, make_orthant(3), coords({0.0, 1.0, 0.0}));
        }) == Errc::PreconditionViolated);
  // non-boundary test point
  CHECK(thrown_code([&] {
          interior_promotion_check(t, make_orthant(3), coords({1.0, 1.0, 1.0}));
        }) == Errc::PreconditionViolated);
  // spin factor: the boundary point (xhat, 1) promotes strictly inside
  const LinearMap spin =
      rank_one(identity_map(), spin_dual({1.0, 0.0}), coords({0.0, 0.0, 1.0}));
  CHECK(interior_promotion_check(spin, make_lorentz(2), coords({1.0, 0.0, 1.0})));
}

TEST_CASE("extremal witness on the worked instances") {
  RngStream rng(14);
  {
    // orthant: v = e1, T(v) = e1 + e2 has two positive coordinates
    const ExtremalWitness w =
        extremal_witness(make_orthant(3), identity_map(), covector({1.0, 0.0, 0.0}),
                         coords({0.0, 1.0, 0.0}), rng, 1000);
    CHECK(w.report.found);
    CHECK(std::get<Coordinates>(w.v).values == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(!is_extremal(make_orthant(3),
                       conewit::apply(rank_one(identity_map(), covector({1.0, 0.0, 0.0}),
                                               coords({0.0, 1.0, 0.0})),
                                      w.v),
                       1e-9));
  }
  {
    // lorentz: v = (xhat, 1), image margin strictly positive by the strict
    // triangle inequality
    const ExtremalWitness w =
        extremal_witness(make_lorentz(2), identity_map(), spin_dual({1.0, 0.0}),
                         coords({0.0, 1.0, 1.0}), rng, 1000);
    CHECK(w.report.found);
    CHECK(w.report.x_margin < -1e-6);
  }
  // lexicographic first-coordinate functional vanishes on every extremal
  CHECK(thrown_code([&] {
          extremal_witness(make_lex(), identity_map(), lex_first(), coords({1.0, 0.0}), rng, 100);
        }) == Errc::NoExtremalWithPositivePairing);
  CHECK(thrown_code([&] {
          extremal_witness(make_copositive(2), identity_map(),
                           cp_form({{1.0, 1.0}}), Point(SymMat::identity(2)), rng, 100);
        }) == Errc::Unsupported);
  CHECK(thrown_code([&] {
          extremal_witness(make_ray(2, {1.0, 0.0}), identity_map(), covector({1.0, 0.0}),
                           coords({1.0, 0.0}), rng, 100);
        }) == Errc::PreconditionViolated);
}

TEST_CASE("witness verification is independent of the search path") {
  // candidate that fails the membership side
  const LinearMap t = rank_one(identity_map(), covector({1.0, 1.0}), coords({0.0, 1.0}));
  CHECK(!witness_from_candidate(t, make_orthant(2), coords({-1.0, 0.0}), WitnessStrategy::Direct));
  // candidate whose preimage stays inside
  CHECK(!witness_from_candidate(t, make_orthant(2), coords({0.0, 1.0}), WitnessStrategy::Direct));
  // the classic witness verifies
  const auto w = witness_from_candidate(t, make_orthant(2), coords({1.0, 0.0}),
                                        WitnessStrategy::Direct);
  REQUIRE(w.has_value());
  CHECK(w->x_margin == -0.5);
  CHECK(w->y_margin == 0.0);
  CHECK(inf_norm(sub(conewit::apply(t, *w->preimage_x), *w->witness_y)) <= 1e-15);
}

TEST_CASE("witness search succeeds across families with interior u") {
  RngStream rng(15);
  for (const ConeSpec& cone :
       {make_orthant(4), make_lorentz(2), make_psd(3), make_copositive(2),
        make_grid_cone(Grid({0.0, 0.25, 0.5, 0.75, 1.0}))}) {
    const LinearMap s = sample_automorphism(cone, rng);
    const Functional f = sample_dual(cone, rng, 100);
    const Point u = sample_point(cone, Region::Interior, rng);
    const auto t = rank_one_perturb(cone, s, f, u, rng.split(1));
    RngStream wrng = rng.split(2);
    const WitnessReport w = nonpositive_inverse_witness(t.map, cone, wrng, 10000);
    CHECK(w.found);
    CHECK(w.y_margin >= -1e-9);
    CHECK(w.x_margin < -1e-6);
    REQUIRE(w.witness_y.has_value());
    CHECK(inf_norm(sub(conewit::apply(t.map, *w.preimage_x), *w.witness_y)) <=
          1e-9 * (1.0 + inf_norm(*w.witness_y)));
  }
}

TEST_CASE("negative controls exhaust the budget without a witness") {
  RngStream rng(16);
  {
    const LinearMap t =
        rank_one(identity_map(), covector({1.0, 0.0, 0.0}), coords({1.0, 0.0, 0.0}));
    RngStream wrng = rng.split(1);
    const WitnessReport w = nonpositive_inverse_witness(t, make_orthant(3), wrng, 3000);
    CHECK(!w.found);
    CHECK(w.attempts.direct == 3000);
  }
  {
    const ConeSpec ray = make_ray(3, {1.0, 2.0, 2.0});
    RngStream srng = rng.split(2);
    const LinearMap s = sample_automorphism(ray, srng);
    RngStream wrng = rng.split(3);
    const WitnessReport w = nonpositive_inverse_witness(s, ray, wrng, 3000);
    CHECK(!w.found);
  }
}

TEST_CASE("smallest scaling index on the canonical pairings") {
  RngStream rng(17);
  {
    const ConeSpec cone = make_orthant(3);
    const auto pair = dual_zero_pair(cone);
    const ScalingSearch s = smallest_scaling_n(cone, identity_map(), pair.f, pair.u, rng, 64);
    REQUIRE(s.n.has_value());
    CHECK(*s.n == 1);
    CHECK(s.report.found);
    CHECK(s.report.scaling_n == 1);
    CHECK(s.report.x_margin == -1.0);
  }
  {
    const ConeSpec cone = make_psd(2);
    const auto pair = dual_zero_pair(cone);
    const ScalingSearch s = smallest_scaling_n(cone, identity_map(), pair.f, pair.u, rng, 64);
    REQUIRE(s.n.has_value());
    CHECK(*s.n == 1);
    CHECK(s.report.x_margin == doctest::Approx(-1.0).epsilon(1e-12));
  }
  {
    // scaling f down rescales the witness margin but not the index
    const ConeSpec cone = make_orthant(3);
    const auto pair = dual_zero_pair(cone);
    const ScalingSearch s = smallest_scaling_n(cone, identity_map(),
                                               scale_functional(pair.f, 0.1), pair.u, rng, 64);
    REQUIRE(s.n.has_value());
    CHECK(*s.n == 1);
    CHECK(s.report.x_margin == doctest::Approx(-0.1).epsilon(1e-12));
  }
  // nonzero pairing violates the precondition
  CHECK(thrown_code([&] {
          smallest_scaling_n(make_orthant(2), identity_map(), covector({1.0, 0.0}),
                             coords({1.0, 0.0}), rng, 8);
        }) == Errc::PreconditionViolated);
}

TEST_CASE("2x2 decomposition: certificates and factors") {
  {
    const Decomposition2x2 d = decompose_2x2({{{1.0, 3.0}, {2.0, 4.0}}});
    // identity case: rank-one consistency forces 6 against the strict bound 4
    CHECK(!d.identity_case.feasible);
    CHECK(d.identity_case.required_product == 6.0);
    CHECK(d.identity_case.strict_bound == 4.0);
    // swap case: 4 < 6, and the resulting factors reconstruct the matrix
    CHECK(d.swap_case.feasible);
    CHECK(d.feasible);
    CHECK(d.swapped);
    CHECK(d.diag[0] > 0.0);
    CHECK(d.diag[1] > 0.0);
    CHECK(d.u[0] >= 0.0);
    CHECK(d.u[1] >= 0.0);
    CHECK(d.v[0] >= 0.0);
    CHECK(d.v[1] >= 0.0);
    CHECK(d.reconstruction_error <= 1e-12);
  }
  {
    const Decomposition2x2 d = decompose_2x2({{{2.0, 2.0}, {1.0, 3.0}}});
    CHECK(d.feasible);
    CHECK(!d.swapped);
    CHECK(d.reconstruction_error <= 1e-12);
  }
  {
    const Decomposition2x2 d = decompose_2x2({{{2.0, 0.0}, {0.0, 1.0}}});
    CHECK(d.feasible);
    CHECK(!d.swapped);
    CHECK(d.reconstruction_error <= 1e-12);
  }
  {
    // antidiagonal: identity case infeasible (1 against the bound 0), swap
    // case trivially feasible with D alone
    const Decomposition2x2 d = decompose_2x2({{{0.0, 1.0}, {1.0, 0.0}}});
    CHECK(!d.identity_case.feasible);
    CHECK(d.identity_case.required_product == 1.0);
    CHECK(d.identity_case.strict_bound == 0.0);
    CHECK(d.feasible);
    CHECK(d.swapped);
    CHECK(d.reconstruction_error == 0.0);
  }
  CHECK(thrown_code([] { decompose_2x2({{{1.0, -1.0}, {0.0, 1.0}}}); }) == Errc::NotNonnegative);
  CHECK(thrown_code([] { decompose_2x2({{{1.0, 1.0}, {1.0, 1.0}}}); }) == Errc::Singular);
}

TEST_CASE("2x2 decomposition round-trips constructed instances") {
  RngStream rng(18);
  for (int trial = 0; trial < 100; ++trial) {
    const bool swapped = rng.uniform() < 0.5;
    const double d1 = 0.2 + 2.0 * rng.uniform();
    const double d2 = 0.2 + 2.0 * rng.uniform();
    const double u0 = rng.uniform(), u1 = rng.uniform();
    const double v0 = rng.uniform(), v1 = rng.uniform();
    Mat2 m{};
    m[0][0] = (swapped ? 0.0 : d1) + u0 * v0;
    m[0][1] = (swapped ? d2 : 0.0) + u0 * v1;
    m[1][0] = (swapped ? d1 : 0.0) + u1 * v0;
    m[1][1] = (swapped ? 0.0 : d2) + u1 * v1;
    if (std::abs(m[0][0] * m[1][1] - m[0][1] * m[1][0]) < 1e-6) continue;
    const Decomposition2x2 d = decompose_2x2(m);
    CHECK(d.feasible);
    CHECK(d.reconstruction_error <= 1e-9);
  }
}

TEST_CASE("grid scan locates the feasible point of the golden matrix") {
  const GridScan2x2 scan = grid_scan_2x2({{{1.0, 3.0}, {2.0, 4.0}}});
  CHECK(scan.min_residual <= 1e-9);
  CHECK(scan.swapped);
  CHECK(scan.d1 == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(scan.d2 == doctest::Approx(0.5).epsilon(1e-9));
}
