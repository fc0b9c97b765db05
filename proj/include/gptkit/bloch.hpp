#pragma once

// Bloch pictures of generalized bits: centred coordinates for one gbit and the
// [alpha, beta, C] triple for two.

#include <gptkit/composite.hpp>
#include <gptkit/core.hpp>

#include <cmath>

namespace gptkit {

struct BlochVector {
  Vector v;

  double norm() const { return v.norm(); }
};

/// psi_hat^i = 2 (p(x_i) - mu^i).
inline BlochVector to_bloch(const StateVector& psi, const StateVector& mu) {
  require_same_size(psi.size(), mu.size(), "to_bloch");
  const Index d = psi.dim();
  return {2.0 * (psi.coords().tail(d) - mu.coords().tail(d))};
}

inline StateVector from_bloch(const BlochVector& b, const StateVector& mu) {
  require_same_size(b.v.size(), mu.dim(), "from_bloch");
  return StateVector::from_fiducials(mu.coords().tail(mu.dim()) + b.v / 2.0);
}

/// Maximally mixed gbit in the ball representation: every fiducial at 1/2.
inline StateVector ball_center(Index d2) { return StateVector::from_fiducials(Vector::Constant(d2, 0.5)); }

struct TwoGbitBloch {
  Vector alpha;
  Vector beta;
  Matrix C;

  Index d2() const { return alpha.size(); }

  double squared_norm() const { return alpha.squaredNorm() + beta.squaredNorm() + (C.transpose() * C).trace(); }

  double inner(const TwoGbitBloch& o) const {
    return alpha.dot(o.alpha) + beta.dot(o.beta) + (C.transpose() * o.C).trace();
  }

  Vector flatten() const {
    Vector out(alpha.size() + beta.size() + C.size());
    out << alpha, beta, Eigen::Map<const Vector>(C.data(), C.size());
    return out;
  }

  bool within_entry_bounds(double tolerance = tol::feasibility) const {
    return alpha.cwiseAbs().maxCoeff() <= 1.0 + tolerance && beta.cwiseAbs().maxCoeff() <= 1.0 + tolerance &&
           C.cwiseAbs().maxCoeff() <= 1.0 + tolerance;
  }
};

inline Index gbit_dim_from_joint(Index joint_size) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(joint_size))));
  if (n * n != joint_size || n < 2) throw DimensionError("two-gbit state: size is not (d2+1)^2");
  return n - 1;
}

/// alpha^i = 2p(x_i) - 1, beta^j = 2p(y_j) - 1,
/// C^{ij} = 4p(x_i, y_j) - 2p(x_i) - 2p(y_j) + 1.
inline TwoGbitBloch two_gbit_bloch(const StateVector& psi_ab) {
  const Index d = gbit_dim_from_joint(psi_ab.size());
  const Index n = d + 1;
  const Vector& p = psi_ab.coords();
  TwoGbitBloch b{Vector(d), Vector(d), Matrix(d, d)};
  for (Index i = 1; i <= d; ++i) b.alpha(i - 1) = 2.0 * p(i * n) - 1.0;
  for (Index j = 1; j <= d; ++j) b.beta(j - 1) = 2.0 * p(j) - 1.0;
  for (Index i = 1; i <= d; ++i) {
    for (Index j = 1; j <= d; ++j) b.C(i - 1, j - 1) = 4.0 * p(i * n + j) - 2.0 * p(i * n) - 2.0 * p(j) + 1.0;
  }
  return b;
}

/// C^{ij} from the four joint outcome probabilities of the fiducial pair:
/// p(x,y) - p(x,not y) - p(not x,y) + p(not x,not y).
inline Matrix correlation_from_tables(const CorrelationTable& t) {
  Matrix c(t.d_a, t.d_b);
  for (Index i = 0; i < t.d_a; ++i) {
    for (Index j = 0; j < t.d_b; ++j) {
      const auto& tab = t.at(i, j);
      c(i, j) = tab[0][0] - tab[0][1] - tab[1][0] + tab[1][1];
    }
  }
  return c;
}

inline StateVector from_two_gbit_bloch(const TwoGbitBloch& b) {
  const Index d = b.d2();
  if (b.beta.size() != d || b.C.rows() != d || b.C.cols() != d) throw DimensionError("two-gbit Bloch: shape mismatch");
  const Index n = d + 1;
  Vector p(n * n);
  p(0) = 1.0;
  for (Index i = 1; i <= d; ++i) p(i * n) = (1.0 + b.alpha(i - 1)) / 2.0;
  for (Index j = 1; j <= d; ++j) p(j) = (1.0 + b.beta(j - 1)) / 2.0;
  for (Index i = 1; i <= d; ++i) {
    for (Index j = 1; j <= d; ++j) p(i * n + j) = (b.C(i - 1, j - 1) + 2.0 * p(i * n) + 2.0 * p(j) - 1.0) / 4.0;
  }
  return StateVector(std::move(p));
}

inline TwoGbitBloch product_bloch(const Vector& a, const Vector& b) { return {a, b, a * b.transpose()}; }

/// |alpha|^2 + |beta|^2 + tr(C^T C) == 3, the norm shared by all pure states.
inline bool pure_norm_check(const TwoGbitBloch& b, double tolerance = tol::feasibility) {
  return std::abs(b.squared_norm() - 3.0) <= tolerance;
}

/// Pure states on the ball spanned by the poles (x, x) and (-x, -x), in polar
/// coordinates u in [0, pi), v in [0, 2 pi).
inline TwoGbitBloch equator_state(double u, double v) {
  TwoGbitBloch b{Vector::Zero(3), Vector::Zero(3), Matrix::Zero(3, 3)};
  b.alpha(0) = std::cos(u);
  b.beta(0) = std::cos(u);
  b.C(0, 0) = 1.0;
  b.C(1, 1) = std::sin(u) * std::cos(v);
  b.C(1, 2) = std::sin(u) * std::sin(v);
  b.C(2, 1) = std::sin(u) * std::sin(v);
  b.C(2, 2) = -std::sin(u) * std::cos(v);
  return b;
}

/// Antisymmetric-branch equator states [0, 0, diag(1, R_+(v))].
inline TwoGbitBloch antisymmetric_equator_state(double v) {
  TwoGbitBloch b{Vector::Zero(3), Vector::Zero(3), Matrix::Zero(3, 3)};
  b.C(0, 0) = 1.0;
  b.C(1, 1) = std::cos(v);
  b.C(1, 2) = std::sin(v);
  b.C(2, 1) = -std::sin(v);
  b.C(2, 2) = std::cos(v);
  return b;
}

/// Reflection of A's third Bloch axis, tau (x) I.
inline TwoGbitBloch partial_transpose_equivalence(const TwoGbitBloch& b) {
  if (b.d2() < 3) throw DimensionError("partial_transpose_equivalence: needs d2 >= 3");
  TwoGbitBloch out = b;
  out.alpha(2) = -out.alpha(2);
  out.C.row(2) = -out.C.row(2);
  return out;
}

/// [G_A alpha, G_B beta, G_A C G_B^T] for orthogonal G_A, G_B.
inline TwoGbitBloch local_action(const Matrix& g_a, const Matrix& g_b, const TwoGbitBloch& b,
                                 double tolerance = 1e-9) {
  if (!is_orthogonal(g_a, tolerance) || !is_orthogonal(g_b, tolerance)) {
    throw DomainError("local_action: maps must be orthogonal");
  }
  require_same_size(g_a.cols(), b.alpha.size(), "local_action");
  require_same_size(g_b.cols(), b.beta.size(), "local_action");
  return {g_a * b.alpha, g_b * b.beta, g_a * b.C * g_b.transpose()};
}

/// Standard-representation matrix of a Bloch rotation G: p -> 1/2 + G (p - 1/2).
inline LinearMap ball_map(const Matrix& g) {
  const Index d = g.rows();
  Matrix m = Matrix::Zero(d + 1, d + 1);
  m(0, 0) = 1.0;
  m.bottomRightCorner(d, d) = g;
  m.bottomLeftCorner(d, 1) = 0.5 * (Vector::Ones(d) - g * Vector::Ones(d));
  return LinearMap(std::move(m));
}

}  // namespace gptkit
