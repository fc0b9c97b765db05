#pragma once

// Hermitian picture of gbits and quantum slices: Pauli and generalized
// Gell-Mann bases, the map L and its tensor powers, SU(2) -> SO(3).

#include <gptkit/bloch.hpp>
#include <gptkit/core.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace gptkit {

using HermitianMatrix = CMatrix;
using SpecialUnitary = CMatrix;

/// (sigma^1, sigma^2, sigma^3).
inline const std::array<CMatrix, 3>& paulis() {
  static const std::array<CMatrix, 3> s = [] {
    std::array<CMatrix, 3> out{CMatrix(2, 2), CMatrix(2, 2), CMatrix(2, 2)};
    out[0] << 0, 1, 1, 0;
    out[1] << 0, Complex(0, -1), Complex(0, 1), 0;
    out[2] << 1, 0, 0, -1;
    return out;
  }();
  return s;
}

/// Basis with L[psi] = sum_j psi_j B_j: B_0 = (I - s1 - s2 - s3)/2, B_i = s_i.
inline std::vector<CMatrix> l_basis() {
  const auto& s = paulis();
  const CMatrix id = CMatrix::Identity(2, 2);
  return {(id - s[0] - s[1] - s[2]) / 2.0, s[0], s[1], s[2]};
}

/// Generalized Gell-Mann matrices for dimension c, normalized tr(l_j l_k) = 2 delta_jk.
/// Order: symmetric off-diagonal, antisymmetric off-diagonal (pairs j < k),
/// then diagonal. For c = 2 this is (s1, s2, s3).
inline std::vector<CMatrix> gell_mann(int c) {
  if (c < 2) throw DomainError("gell_mann: c must be at least 2");
  std::vector<CMatrix> out;
  for (int j = 0; j < c; ++j) {
    for (int k = j + 1; k < c; ++k) {
      CMatrix sym = CMatrix::Zero(c, c);
      sym(j, k) = sym(k, j) = 1.0;
      CMatrix asym = CMatrix::Zero(c, c);
      asym(j, k) = Complex(0, -1);
      asym(k, j) = Complex(0, 1);
      out.push_back(sym);
      out.push_back(asym);
    }
  }
  for (int l = 1; l < c; ++l) {
    CMatrix d = CMatrix::Zero(c, c);
    const double f = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) d(j, j) = f;
    d(l, l) = -f * l;
    out.push_back(d);
  }
  return out;
}

/// Fiducial outcome k reads (1 + tr(rho l_k) / s_k) / 2 with s_k the largest
/// |eigenvalue| of l_k, so rho = psi_0 I/c + (1/2) sum_k s_k (2 psi_k - psi_0) l_k.
inline std::vector<CMatrix> quantum_basis(int c) {
  const auto gm = gell_mann(c);
  std::vector<CMatrix> basis;
  CMatrix b0 = CMatrix::Identity(c, c) / static_cast<double>(c);
  std::vector<CMatrix> scaled;
  for (const auto& l : gm) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(l);
    const double s = es.eigenvalues().cwiseAbs().maxCoeff();
    b0 -= 0.5 * s * l;
    scaled.push_back(s * l);
  }
  basis.push_back(b0);
  for (auto& m : scaled) basis.push_back(std::move(m));
  return basis;
}

inline bool is_hermitian(const CMatrix& h, double tolerance = tol::identity) {
  return h.rows() == h.cols() && (h - h.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

/// L[psi] = psi^0 (I - s1 - s2 - s3)/2 + sum_i psi^i s_i.
inline HermitianMatrix l_map(const StateVector& psi) {
  if (psi.size() != 4) throw DimensionError("l_map: expects a gbit with d2 = 3");
  const auto b = l_basis();
  HermitianMatrix out = CMatrix::Zero(2, 2);
  for (Index j = 0; j < 4; ++j) out += psi[j] * b[static_cast<std::size_t>(j)];
  return out;
}

/// L applied on each of m tensor factors (m <= 3).
inline HermitianMatrix l_map_tensor(const StateVector& psi, int m) {
  if (m < 1 || m > 3) throw DomainError("l_map_tensor: m must be 1, 2 or 3");
  Index n = 1;
  for (int k = 0; k < m; ++k) n *= 4;
  if (psi.size() != n) throw DimensionError("l_map_tensor: state size is not 4^m");
  const auto b = l_basis();
  const Index dim = Index{1} << m;
  HermitianMatrix out = CMatrix::Zero(dim, dim);
  for (Index idx = 0; idx < n; ++idx) {
    if (psi[idx] == 0.0) continue;
    CMatrix term = CMatrix::Identity(1, 1);
    Index rest = idx;
    Index place = n / 4;
    for (int k = 0; k < m; ++k) {
      term = kron(term, b[static_cast<std::size_t>(rest / place)]);
      rest %= place;
      place /= 4;
    }
    out += psi[idx] * term;
  }
  return out;
}

/// (1/4)(I + sum a_i s_i (x) I + sum b_j I (x) s_j + sum C_ij s_i (x) s_j).
inline HermitianMatrix two_gbit_image(const TwoGbitBloch& b) {
  if (b.d2() != 3) throw DimensionError("two_gbit_image: expects d2 = 3");
  const auto& s = paulis();
  const CMatrix id = CMatrix::Identity(2, 2);
  HermitianMatrix out = CMatrix::Identity(4, 4);
  for (int i = 0; i < 3; ++i) {
    out += b.alpha(i) * kron(s[i], id);
    out += b.beta(i) * kron(id, s[i]);
    for (int j = 0; j < 3; ++j) out += b.C(i, j) * kron(s[i], s[j]);
  }
  return out / 4.0;
}

struct IsometryResult {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// tr(L2[psi] L2[psi']) against 1/4 + (1/4)(a.a' + b.b' + tr(C^T C')).
inline IsometryResult isometry_check(const StateVector& psi, const StateVector& psi2) {
  const HermitianMatrix a = l_map_tensor(psi, 2);
  const HermitianMatrix b = l_map_tensor(psi2, 2);
  return {(a * b).trace().real(), 0.25 + 0.25 * two_gbit_bloch(psi).inner(two_gbit_bloch(psi2))};
}

inline bool is_special_unitary(const CMatrix& u, double tolerance = tol::identity) {
  return u.rows() == u.cols() && unitarity_residual(u) <= tolerance &&
         std::abs(u.determinant() - Complex(1.0, 0.0)) <= tolerance;
}

/// G^{ji} = (1/2) tr(s_j U s_i U^dagger).
inline Matrix su2_to_so3(const SpecialUnitary& u, double tolerance = 1e-10) {
  if (u.rows() != 2 || u.cols() != 2) throw DimensionError("su2_to_so3: expects 2x2");
  if (!is_special_unitary(u, tolerance)) throw DomainError("su2_to_so3: input is not special unitary");
  const auto& s = paulis();
  Matrix g(3, 3);
  for (int i = 0; i < 3; ++i) {
    const CMatrix rot = u * s[i] * u.adjoint();
    for (int j = 0; j < 3; ++j) g(j, i) = 0.5 * (s[j] * rot).trace().real();
  }
  return g;
}

/// exp(-i theta n.sigma / 2).
inline SpecialUnitary su2_from_axis_angle(const Vector& axis, double theta) {
  const auto& s = paulis();
  const Vector n = axis.normalized();
  CMatrix ns = n(0) * s[0] + n(1) * s[1] + n(2) * s[2];
  return std::cos(theta / 2.0) * CMatrix::Identity(2, 2) - Complex(0, 1) * std::sin(theta / 2.0) * ns;
}

/// One of the two preimages of a rotation, via its axis and angle.
inline SpecialUnitary so3_to_su2(const Matrix& g, double tolerance = 1e-9) {
  if (g.rows() != 3 || !is_orthogonal(g, tolerance) || g.determinant() < 0.0) {
    throw DomainError("so3_to_su2: input is not a rotation");
  }
  const double c = std::clamp((g.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(c);
  Vector axis(3);
  if (theta < 1e-12) return CMatrix::Identity(2, 2);
  if (std::abs(theta - std::numbers::pi) < 1e-6) {
    // Near pi the antisymmetric part vanishes; read the axis from (G + I)/2.
    const Matrix m = (g + Matrix::Identity(3, 3)) / 2.0;
    Index k = 0;
    m.diagonal().maxCoeff(&k);
    axis = m.col(k).normalized();
    const Vector w = (Vector(3) << g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1)).finished();
    if (w.dot(axis) < 0.0) axis = -axis;
  } else {
    axis << g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1);
  }
  return su2_from_axis_angle(axis, theta);
}

/// L[G psi] == U L[psi] U^dagger with G the rotation of U.
inline bool covariance_check(const SpecialUnitary& u, const StateVector& psi, double tolerance = 1e-12) {
  const Matrix g = su2_to_so3(u);
  const StateVector moved = ball_map(g).apply(psi);
  return (l_map(moved) - u * l_map(psi) * u.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

/// Two-gbit version: local rotations in Bloch form against (UA (x) UB) conjugation.
inline bool covariance_check(const SpecialUnitary& ua, const SpecialUnitary& ub, const StateVector& psi_ab,
                             double tolerance = 1e-12) {
  const TwoGbitBloch moved = local_action(su2_to_so3(ua), su2_to_so3(ub), two_gbit_bloch(psi_ab));
  const CMatrix u = kron(ua, ub);
  const CMatrix rhs = u * l_map_tensor(psi_ab, 2) * u.adjoint();
  return (two_gbit_image(moved) - rhs).cwiseAbs().maxCoeff() <= tolerance;
}

/// Haar-random unitary via QR of a complex Ginibre matrix with phase correction.
inline CMatrix haar_unitary(Index n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  for (Index j = 0; j < n; ++j) {
    const Complex d = qr.matrixQR()(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline SpecialUnitary haar_special_unitary(Index n, Rng& rng) {
  CMatrix u = haar_unitary(n, rng);
  const Complex det = u.determinant();
  return u * std::polar(1.0, -std::arg(det) / static_cast<double>(n));
}

/// Hermitian image of any state in a space with a Hermitian picture.
inline HermitianMatrix hermitian_of(const StateSpaceDescriptor& space, const StateVector& psi) {
  if (const auto* p = space.psd()) return hermitian_image(*p, psi.coords());
  if (const auto* b = space.ball(); b && b->d2 == 3) return l_map(psi);
  throw UnsupportedRepresentation("hermitian_of: space has no Hermitian picture");
}

}  // namespace gptkit
