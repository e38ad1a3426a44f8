#include <doctest.h>

#include <cmath>
#include <vector>

#include <conewit/numerics.hpp>
#include <conewit/rng.hpp>
#include <conewit/suites.hpp>

using namespace conewit;

namespace {

SymMat random_sym(int n, RngStream& rng) {
  SymMat a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, rng.normal());
  return a;
}

double reconstruction_residual(const SymMat& a, const Spectrum& sp) {
  const int n = a.n();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += sp.eigenvectors[k][i] * sp.eigenvalues[k] * sp.eigenvectors[k][j];
      worst = std::max(worst, std::abs(s - a.at(i, j)));
    }
  }
  return worst;
}

double orthonormality_residual(const Spectrum& sp) {
  const int n = static_cast<int>(sp.eigenvalues.size());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = dot(sp.eigenvectors[i], sp.eigenvectors[j]) - (i == j ? 1.0 : 0.0);
      worst = std::max(worst, std::abs(d));
    }
  return worst;
}

}  // namespace

TEST_CASE("eigenvalues of simple matrices") {
  const Spectrum id = sym_eig(SymMat::identity(2));
  CHECK(id.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));

  const Spectrum d = sym_eig(SymMat::diag({-0.5, 1.0, 1.0}));
  CHECK(d.eigenvalues[0] == -0.5);
  CHECK(d.eigenvalues[1] == 1.0);
  CHECK(d.eigenvalues[2] == 1.0);

  // roots of the characteristic polynomial x^2 - 2x - 8
  const double tr = 2.0, det = 1.0 - 9.0;
  const double disc = std::sqrt(tr * tr - 4.0 * det);
  const double lo = (tr - disc) / 2.0, hi = (tr + disc) / 2.0;
  CHECK(lo == -2.0);
  CHECK(hi == 4.0);
  const Spectrum s = sym_eig(SymMat::from_rows({{1.0, 3.0}, {3.0, 1.0}}));
  CHECK(s.eigenvalues[0] == doctest::Approx(lo).epsilon(1e-14));
  CHECK(s.eigenvalues[1] == doctest::Approx(hi).epsilon(1e-14));
}

TEST_CASE("eigen decomposition residuals stay below 1e-10 on 500 random matrices") {
  RngStream rng(2024);
  double worst_rec = 0.0, worst_orth = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 7));
    const SymMat a = random_sym(n, rng);
    const Spectrum sp = sym_eig(a);
    worst_rec = std::max(worst_rec, reconstruction_residual(a, sp) / (1.0 + a.max_abs()));
    worst_orth = std::max(worst_orth, orthonormality_residual(sp));
    for (std::size_t k = 1; k < sp.eigenvalues.size(); ++k)
      CHECK(sp.eigenvalues[k - 1] <= sp.eigenvalues[k]);
  }
  CHECK(worst_rec <= 1e-10);
  CHECK(worst_orth <= 1e-10);
}

TEST_CASE("shifting by c*I shifts the spectrum") {
  RngStream rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
    const SymMat a = random_sym(n, rng);
    const double c = 3.0 * rng.normal();
    SymMat shifted = a;
    for (int i = 0; i < n; ++i) shifted.set(i, i, a.at(i, i) + c);
    const Spectrum sa = sym_eig(a);
    const Spectrum sb = sym_eig(shifted);
    for (int k = 0; k < n; ++k)
      CHECK(std::abs(sa.eigenvalues[k] + c - sb.eigenvalues[k]) <= 1e-10 * (1.0 + a.max_abs()));
  }
}

TEST_CASE("non-finite entries are rejected") {
  SymMat a(2);
  a.set(0, 1, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(sym_eig(a), Error);
  try {
    sym_eig(a);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFinite);
  }
}

TEST_CASE("simplex minimum on the worked 2x2 instances") {
  {
    // q(t) = -t^2/2 + (1-t)^2 decreases toward t = 1
    const SimplexMin m = simplex_quadratic_min(SymMat::diag({-0.5, 1.0}));
    CHECK(m.value == -0.5);
    CHECK(m.argmin[0] == 1.0);
    CHECK(m.argmin[1] == 0.0);
  }
  {
    // minimize t^2 + (1-t)^2
    const SimplexMin m = simplex_quadratic_min(SymMat::identity(2));
    CHECK(m.value == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.argmin[0] == doctest::Approx(0.5).epsilon(1e-14));
  }
  {
    // 2t(1-t) vanishes at the endpoints
    const SimplexMin m = simplex_quadratic_min(SymMat::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(m.value == 0.0);
    const bool vertex = (m.argmin[0] == 1.0 && m.argmin[1] == 0.0) ||
                        (m.argmin[0] == 0.0 && m.argmin[1] == 1.0);
    CHECK(vertex);
  }
}

TEST_CASE("simplex argmin invariants hold on random instances") {
  RngStream rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 4));
    const SymMat a = random_sym(n, rng);
    const SimplexMin m = simplex_quadratic_min(a);
    double sum = 0.0;
    for (double x : m.argmin) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(std::abs(a.quad_form(m.argmin) - m.value) <= 1e-10);
  }
}

TEST_CASE("face enumeration matches the grid oracle") {
  RngStream rng(55);
  double worst_gap = 0.0, worst_onesided = -1e300;
  for (int trial = 0; trial < 30; ++trial) {
    const SymMat a = random_sym(4, rng);
    const double face = simplex_quadratic_min(a).value;
    const double grid = simplex_grid_min(a, 200).value;
    const double oracle = independent_simplex_min(a, 200);
    worst_gap = std::max(worst_gap, std::abs(face - oracle));
    worst_onesided = std::max(worst_onesided, face - grid);
  }
  CHECK(worst_gap <= 1e-6);
  CHECK(worst_onesided <= 1e-9);  // the exact minimum never exceeds the grid minimum
}

TEST_CASE("dimension guard on the simplex oracle") {
  CHECK_THROWS_AS(simplex_quadratic_min(SymMat::identity(13)), Error);
  try {
    simplex_quadratic_min(SymMat::identity(13));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionTooLarge);
  }
}
