#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "conewit/errors.hpp"
#include "conewit/numerics.hpp"

namespace conewit {

/// Strictly increasing node set backing piecewise-linear grid functions.
class Grid {
 public:
  Grid() = default;

  explicit Grid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) raise(Errc::ShapeMismatch, "grid needs at least 2 nodes");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      if (!(nodes_[i] < nodes_[i + 1]))
        raise(Errc::ShapeMismatch, "grid nodes must be strictly increasing");
      if (!std::isfinite(nodes_[i])) raise(Errc::NonFinite, "grid node not finite");
    }
  }

  const std::vector<double>& nodes() const { return nodes_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// Trapezoid quadrature weights; exact for piecewise-linear node data.
  std::vector<double> trapezoid_weights() const {
    const int m = size();
    std::vector<double> w(m, 0.0);
    w[0] = (nodes_[1] - nodes_[0]) / 2.0;
    w[m - 1] = (nodes_[m - 1] - nodes_[m - 2]) / 2.0;
    for (int i = 1; i + 1 < m; ++i) w[i] = (nodes_[i + 1] - nodes_[i - 1]) / 2.0;
    return w;
  }

  /// New grid with every interval split into `k` equal parts.
  Grid refine(int k) const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(size() - 1) * k + 1);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      for (int j = 0; j < k; ++j)
        out.push_back(nodes_[i] + (nodes_[i + 1] - nodes_[i]) * j / static_cast<double>(k));
    }
    out.push_back(nodes_.back());
    return Grid(std::move(out));
  }

  /// True when the node set is symmetric about the interval midpoint.
  bool is_symmetric(double tol = 1e-12) const {
    const double lo = nodes_.front(), hi = nodes_.back();
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (std::abs(nodes_[i] + nodes_[nodes_.size() - 1 - i] - lo - hi) > tol) return false;
    return true;
  }

  friend bool operator==(const Grid& a, const Grid& b) { return a.nodes_ == b.nodes_; }

 private:
  std::vector<double> nodes_;
};

struct Coordinates {
  std::vector<double> values;
};

/// Node values of a piecewise-linear function on `grid`.
struct GridFunction {
  Grid grid;
  std::vector<double> values;
};

using Point = std::variant<Coordinates, SymMat, GridFunction>;

inline Point coords(std::vector<double> v) { return Coordinates{std::move(v)}; }

inline Point grid_fn(Grid g, std::vector<double> v) {
  if (static_cast<int>(v.size()) != g.size())
    raise(Errc::ShapeMismatch, "grid function node count mismatch");
  return GridFunction{std::move(g), std::move(v)};
}

/// Linear interpolation of a grid function at an arbitrary abscissa.
inline double interpolate(const GridFunction& f, double t) {
  const auto& nodes = f.grid.nodes();
  if (t <= nodes.front()) return f.values.front();
  if (t >= nodes.back()) return f.values.back();
  std::size_t hi = 1;
  while (nodes[hi] < t) ++hi;
  const double w = (t - nodes[hi - 1]) / (nodes[hi] - nodes[hi - 1]);
  return (1.0 - w) * f.values[hi - 1] + w * f.values[hi];
}

namespace detail {

inline void require_same_shape(const Point& a, const Point& b) {
  if (a.index() != b.index()) raise(Errc::ShapeMismatch, "point kinds differ");
  if (const auto* ca = std::get_if<Coordinates>(&a)) {
    if (ca->values.size() != std::get<Coordinates>(b).values.size())
      raise(Errc::ShapeMismatch, "coordinate lengths differ");
  } else if (const auto* ma = std::get_if<SymMat>(&a)) {
    if (ma->n() != std::get<SymMat>(b).n()) raise(Errc::ShapeMismatch, "matrix sizes differ");
  } else {
    const auto& ga = std::get<GridFunction>(a);
    const auto& gb = std::get<GridFunction>(b);
    if (!(ga.grid == gb.grid)) raise(Errc::ShapeMismatch, "grids differ");
  }
}

}  // namespace detail

inline Point add(const Point& a, const Point& b) {
  detail::require_same_shape(a, b);
  if (const auto* ca = std::get_if<Coordinates>(&a)) {
    auto out = ca->values;
    const auto& vb = std::get<Coordinates>(b).values;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += vb[i];
    return Coordinates{std::move(out)};
  }
  if (const auto* ma = std::get_if<SymMat>(&a)) return *ma + std::get<SymMat>(b);
  auto ga = std::get<GridFunction>(a);
  const auto& gb = std::get<GridFunction>(b);
  for (std::size_t i = 0; i < ga.values.size(); ++i) ga.values[i] += gb.values[i];
  return ga;
}

inline Point scale(const Point& p, double c) {
  if (const auto* cp = std::get_if<Coordinates>(&p)) {
    auto out = cp->values;
    for (double& v : out) v *= c;
    return Coordinates{std::move(out)};
  }
  if (const auto* mp = std::get_if<SymMat>(&p)) return c * (*mp);
  auto g = std::get<GridFunction>(p);
  for (double& v : g.values) v *= c;
  return g;
}

inline Point sub(const Point& a, const Point& b) { return add(a, scale(b, -1.0)); }

inline double inf_norm(const Point& p) {
  if (const auto* cp = std::get_if<Coordinates>(&p)) {
    double m = 0.0;
    for (double v : cp->values) m = std::max(m, std::abs(v));
    return m;
  }
  if (const auto* mp = std::get_if<SymMat>(&p)) return mp->max_abs();
  double m = 0.0;
  for (double v : std::get<GridFunction>(p).values) m = std::max(m, std::abs(v));
  return m;
}

inline double l2_norm_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double l2_norm(const std::vector<double>& v) { return std::sqrt(l2_norm_sq(v)); }

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Euclidean inner product matching the point's natural Hilbert structure
/// (Frobenius for matrices, nodewise for grid functions).
inline double inner(const Point& a, const Point& b) {
  detail::require_same_shape(a, b);
  if (const auto* ca = std::get_if<Coordinates>(&a)) return dot(ca->values, std::get<Coordinates>(b).values);
  if (const auto* ma = std::get_if<SymMat>(&a)) {
    const auto& mb = std::get<SymMat>(b);
    double s = 0.0;
    for (int i = 0; i < ma->n(); ++i)
      for (int j = 0; j < ma->n(); ++j) s += ma->at(i, j) * mb.at(i, j);
    return s;
  }
  return dot(std::get<GridFunction>(a).values, std::get<GridFunction>(b).values);
}

inline double l2_norm(const Point& p) { return std::sqrt(inner(p, p)); }

inline void check_finite(const Point& p) {
  if (const auto* cp = std::get_if<Coordinates>(&p)) {
    for (double v : cp->values)
      if (!std::isfinite(v)) raise(Errc::NonFinite, "point coordinate not finite");
  } else if (const auto* mp = std::get_if<SymMat>(&p)) {
    mp->check_finite();
  } else {
    for (double v : std::get<GridFunction>(p).values)
      if (!std::isfinite(v)) raise(Errc::NonFinite, "grid value not finite");
  }
}

}  // namespace conewit
