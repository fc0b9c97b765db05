#pragma once

// Brute-force polytope utilities for the small polytopes that appear here
// (simplices, the square, the bipartite no-signaling polytope).

#include <gptkit/core.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

namespace gptkit::polytope {

namespace detail {

inline bool next_combination(std::vector<Index>& idx, Index n) {
  const Index k = static_cast<Index>(idx.size());
  Index i = k - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

inline double binomial(Index n, Index k) {
  double r = 1.0;
  for (Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace detail

/// Vertices of {x : A x <= b}, by solving every square subsystem of tight rows.
/// Assumes a bounded polytope; `max_subsets` guards against runaway enumeration.
inline std::vector<Vector> enumerate_vertices(const Matrix& a, const Vector& b, double tolerance = 1e-9,
                                              double max_subsets = 5e6) {
  const Index m = a.rows();
  const Index n = a.cols();
  require_same_size(b.size(), m, "enumerate_vertices");
  std::vector<Vector> out;
  if (n == 0) return out;
  if (m < n) return out;
  if (detail::binomial(m, n) > max_subsets) throw DomainError("enumerate_vertices: too many row subsets");
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  Matrix sub(n, n);
  Vector rhs(n);
  do {
    for (Index r = 0; r < n; ++r) {
      sub.row(r) = a.row(idx[static_cast<std::size_t>(r)]);
      rhs(r) = b(idx[static_cast<std::size_t>(r)]);
    }
    Eigen::FullPivLU<Matrix> lu(sub);
    if (!lu.isInvertible()) continue;
    Vector x = lu.solve(rhs);
    x = x.array() + 0.0;  // no signed zeros
    if (((a * x) - b).maxCoeff() > tolerance) continue;
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Vector& y) { return (y - x).cwiseAbs().maxCoeff() <= 1e-7; });
    if (!seen) out.push_back(std::move(x));
  } while (detail::next_combination(idx, m));
  std::sort(out.begin(), out.end(), [](const Vector& x, const Vector& y) {
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
  });
  return out;
}

/// Vertices of the effect polytope {w : 0 <= w.v <= 1 for all vertices v}.
inline std::vector<Vector> effect_polytope_vertices(const std::vector<StateVector>& vertices) {
  const Index n = static_cast<Index>(vertices.size());
  const Index dim = vertices.front().size();
  Matrix a(2 * n, dim);
  Vector b(2 * n);
  for (Index i = 0; i < n; ++i) {
    a.row(i) = vertices[static_cast<std::size_t>(i)].coords().transpose();
    b(i) = 1.0;
    a.row(n + i) = -vertices[static_cast<std::size_t>(i)].coords().transpose();
    b(n + i) = 0.0;
  }
  return enumerate_vertices(a, b);
}

/// Facet functionals of conv(vertices): extreme rays of {w : w.v >= 0},
/// normalized so that max over the vertices equals one.
inline std::vector<Vector> facet_effects(const std::vector<StateVector>& vertices) {
  const Index n = static_cast<Index>(vertices.size());
  const Index dim = vertices.front().size();
  Matrix v(n, dim);
  for (Index i = 0; i < n; ++i) v.row(i) = vertices[static_cast<std::size_t>(i)].coords().transpose();
  std::vector<Vector> out;
  if (dim < 2) return out;
  std::vector<Index> idx(static_cast<std::size_t>(dim - 1));
  std::iota(idx.begin(), idx.end(), Index{0});
  if (n < dim - 1) return out;
  do {
    Matrix sub(dim - 1, dim);
    for (Index r = 0; r < dim - 1; ++r) sub.row(r) = v.row(idx[static_cast<std::size_t>(r)]);
    Eigen::FullPivLU<Matrix> lu(sub);
    if (lu.rank() != dim - 1) continue;
    Vector w = lu.kernel().col(0);
    Vector vals = v * w;
    if (vals.maxCoeff() <= 1e-9) {
      w = -w;
      vals = -vals;
    }
    if (vals.minCoeff() < -1e-9) continue;
    w /= vals.maxCoeff();
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Vector& y) { return (y - w).cwiseAbs().maxCoeff() <= 1e-7; });
    if (!seen) out.push_back(w);
  } while (detail::next_combination(idx, n));
  return out;
}

inline bool in_hull(const std::vector<Vector>& points, const Vector& x, double tolerance = tol::feasibility) {
  return gptkit::detail::hull_l1_distance(points, x) <= tolerance;
}

/// True when points[k] is not a convex combination of the remaining points.
inline bool is_extreme(const std::vector<Vector>& points, std::size_t k, double tolerance = tol::feasibility) {
  std::vector<Vector> others;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i != k) others.push_back(points[i]);
  }
  if (others.empty()) return true;
  return !in_hull(others, points[k], tolerance);
}

}  // namespace gptkit::polytope
