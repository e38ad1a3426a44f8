#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <vector>

#include "conewit/errors.hpp"

namespace conewit {

/// Dense real symmetric matrix. The upper triangle is authoritative; `set`
/// writes both mirror entries so symmetry holds exactly as stored.
class SymMat {
 public:
  SymMat() = default;

  explicit SymMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 1) raise(Errc::ShapeMismatch, "SymMat dimension must be >= 1");
  }

  /// Builds from full rows; the upper triangle wins, the lower is mirrored.
  static SymMat from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    SymMat m(n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        raise(Errc::ShapeMismatch, "SymMat rows must be square");
      for (int j = i; j < n; ++j) m.set(i, j, rows[i][j]);
    }
    m.check_finite();
    return m;
  }

  static SymMat identity(int n) {
    SymMat m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
  }

  static SymMat diag(const std::vector<double>& d) {
    SymMat m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n(); ++i) m.set(i, i, d[i]);
    return m;
  }

  /// Symmetric rank-one matrix v v^T.
  static SymMat outer(const std::vector<double>& v) {
    SymMat m(static_cast<int>(v.size()));
    for (int i = 0; i < m.n(); ++i)
      for (int j = i; j < m.n(); ++j) m.set(i, j, v[i] * v[j]);
    return m;
  }

  int n() const { return n_; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  void set(int i, int j, double v) {
    a_[static_cast<std::size_t>(i) * n_ + j] = v;
    a_[static_cast<std::size_t>(j) * n_ + i] = v;
  }

  void check_finite() const {
    for (double v : a_)
      if (!std::isfinite(v)) raise(Errc::NonFinite, "SymMat entry is not finite");
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += at(i, i);
    return t;
  }

  std::vector<double> matvec(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int j = 0; j < n_; ++j) s += at(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  double quad_form(const std::vector<double>& x) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      double row = 0.0;
      for (int j = 0; j < n_; ++j) row += at(i, j) * x[j];
      s += x[i] * row;
    }
    return s;
  }

  friend SymMat operator+(const SymMat& a, const SymMat& b) {
    if (a.n_ != b.n_) raise(Errc::ShapeMismatch, "SymMat sizes differ");
    SymMat r(a.n_);
    for (std::size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] + b.a_[k];
    return r;
  }

  friend SymMat operator-(const SymMat& a, const SymMat& b) {
    if (a.n_ != b.n_) raise(Errc::ShapeMismatch, "SymMat sizes differ");
    SymMat r(a.n_);
    for (std::size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] - b.a_[k];
    return r;
  }

  friend SymMat operator*(double c, const SymMat& a) {
    SymMat r(a.n_);
    for (std::size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = c * a.a_[k];
    return r;
  }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

/// Eigendecomposition of a symmetric matrix: eigenvalues ascending, matching
/// orthonormal eigenvectors as columns (eigenvectors[k] pairs with
/// eigenvalues[k]).
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
};

/// Minimum of x^T A x over the standard simplex, with its minimizer.
struct SimplexMin {
  double value = 0.0;
  std::vector<double> argmin;
};

namespace detail {

/// Gaussian elimination with partial pivoting on a row-major square system.
/// Returns nullopt when some pivot falls below `pivot_tol`.
inline std::optional<std::vector<double>> gauss_solve(std::vector<double> a, std::vector<double> b,
                                                      int n, double pivot_tol = 1e-12) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
          std::abs(a[static_cast<std::size_t>(piv) * n + col]))
        piv = r;
    if (std::abs(a[static_cast<std::size_t>(piv) * n + col]) < pivot_tol) return std::nullopt;
    if (piv != col) {
      for (int c = 0; c < n; ++c)
        std::swap(a[static_cast<std::size_t>(piv) * n + c], a[static_cast<std::size_t>(col) * n + c]);
      std::swap(b[piv], b[col]);
    }
    const double d = a[static_cast<std::size_t>(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double factor = a[static_cast<std::size_t>(r) * n + col] / d;
      if (factor == 0.0) continue;
      for (int c = col; c < n; ++c)
        a[static_cast<std::size_t>(r) * n + c] -= factor * a[static_cast<std::size_t>(col) * n + c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[static_cast<std::size_t>(r) * n + c] * x[c];
    x[r] = s / a[static_cast<std::size_t>(r) * n + r];
  }
  return x;
}

/// Inverse of a dense square matrix (row-major). Also reports |det| so the
/// caller can reject near-singular inputs.
inline std::optional<std::vector<double>> dense_inverse(std::vector<double> a, int n,
                                                        double* abs_det = nullptr) {
  std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
          std::abs(a[static_cast<std::size_t>(piv) * n + col]))
        piv = r;
    const double p = a[static_cast<std::size_t>(piv) * n + col];
    if (std::abs(p) < 1e-14) return std::nullopt;
    if (piv != col) {
      det = -det;
      for (int c = 0; c < n; ++c) {
        std::swap(a[static_cast<std::size_t>(piv) * n + c], a[static_cast<std::size_t>(col) * n + c]);
        std::swap(inv[static_cast<std::size_t>(piv) * n + c], inv[static_cast<std::size_t>(col) * n + c]);
      }
    }
    det *= a[static_cast<std::size_t>(col) * n + col];
    const double d = a[static_cast<std::size_t>(col) * n + col];
    for (int c = 0; c < n; ++c) {
      a[static_cast<std::size_t>(col) * n + c] /= d;
      inv[static_cast<std::size_t>(col) * n + c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = a[static_cast<std::size_t>(r) * n + col];
      if (factor == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[static_cast<std::size_t>(r) * n + c] -= factor * a[static_cast<std::size_t>(col) * n + c];
        inv[static_cast<std::size_t>(r) * n + c] -= factor * inv[static_cast<std::size_t>(col) * n + c];
      }
    }
  }
  if (abs_det) *abs_det = std::abs(det);
  return inv;
}

}  // namespace detail

/// Cyclic Jacobi eigensolver. Sized for the small matrices this library deals
/// in (n <= 12); stops when the off-diagonal Frobenius mass drops below
/// 1e-14 * ||A||_F, hard cap 100 sweeps.
inline Spectrum sym_eig(const SymMat& a) {
  a.check_finite();
  const int n = a.n();
  std::vector<std::vector<double>> b(n, std::vector<double>(n));
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    v[i][i] = 1.0;
    for (int j = 0; j < n; ++j) b[i][j] = a.at(i, j);
  }
  double norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm += b[i][j] * b[i][j];
  norm = std::sqrt(norm);
  const double stop = 1e-14 * std::max(norm, 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * b[i][j] * b[i][j];
    if (std::sqrt(off) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(b[p][q]) <= stop / (n * n)) continue;
        const double tau = (b[q][q] - b[p][p]) / (2.0 * b[p][q]);
        const double t = (tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau)));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double bkp = b[k][p], bkq = b[k][q];
          b[k][p] = c * bkp - s * bkq;
          b[k][q] = s * bkp + c * bkq;
        }
        for (int k = 0; k < n; ++k) {
          const double bpk = b[p][k], bqk = b[q][k];
          b[p][k] = c * bpk - s * bqk;
          b[q][k] = s * bpk + c * bqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return b[i][i] < b[j][j]; });

  Spectrum sp;
  sp.eigenvalues.resize(n);
  sp.eigenvectors.assign(n, std::vector<double>(n));
  for (int k = 0; k < n; ++k) {
    sp.eigenvalues[k] = b[order[k]][order[k]];
    for (int r = 0; r < n; ++r) sp.eigenvectors[k][r] = v[r][order[k]];
  }
  return sp;
}

inline double min_eigenvalue(const SymMat& a) { return sym_eig(a).eigenvalues.front(); }

/// Exact minimum of x^T A x over the standard simplex by face enumeration:
/// every support set J gets its stationarity system A_J x_J = mu * 1,
/// sum(x_J) = 1; candidates with x_J >= 0 compete with the vertices.
/// Deterministic by construction, which the grid-oracle comparisons rely on.
inline SimplexMin simplex_quadratic_min(const SymMat& a) {
  a.check_finite();
  const int n = a.n();
  if (n > 12) raise(Errc::DimensionTooLarge, "simplex oracle supports n <= 12");

  SimplexMin best;
  best.value = a.at(0, 0);
  best.argmin.assign(n, 0.0);
  best.argmin[0] = 1.0;
  for (int i = 1; i < n; ++i) {
    if (a.at(i, i) < best.value) {
      best.value = a.at(i, i);
      best.argmin.assign(n, 0.0);
      best.argmin[i] = 1.0;
    }
  }

  std::vector<int> support;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if ((mask & (mask - 1)) == 0) continue;  // singletons are the vertices above
    support.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) support.push_back(i);
    const int k = static_cast<int>(support.size());

    std::vector<double> sys(static_cast<std::size_t>(k) * k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sys[static_cast<std::size_t>(r) * k + c] = a.at(support[r], support[c]);
    auto z = detail::gauss_solve(sys, std::vector<double>(k, 1.0), k);
    if (!z) continue;  // singular face: its vertices are already covered
    const double total = std::accumulate(z->begin(), z->end(), 0.0);
    if (std::abs(total) < 1e-12) continue;

    bool feasible = true;
    for (double& zi : *z) {
      zi /= total;
      if (zi < -1e-12) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;

    std::vector<double> x(n, 0.0);
    double sum = 0.0;
    for (int r = 0; r < k; ++r) {
      x[support[r]] = std::max(0.0, (*z)[r]);
      sum += x[support[r]];
    }
    for (double& xi : x) xi /= sum;
    const double value = a.quad_form(x);
    if (value < best.value) {
      best.value = value;
      best.argmin = x;
    }
  }
  return best;
}

}  // namespace conewit
