#pragma once

#include <gptkit/types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gptkit {

template <typename Derived1, typename Derived2>
auto kron(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  using Scalar = typename Derived1::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Outcome of a numerical-rank computation.
///
/// `rank` counts singular values above `threshold_rel * sigma_max`. `gap_ratio`
/// is the ratio between the smallest retained and the largest discarded singular
/// value; when nothing is discarded the largest discarded value is replaced by
/// the floating-point noise floor `sigma_max * eps * max(rows, cols)`.
struct RankReport {
  Index rank = 0;
  double gap_ratio = 0.0;
  std::vector<double> singular_values;
};

inline RankReport numerical_rank(const Matrix& m, double threshold_rel = 1e-8) {
  RankReport r;
  if (m.size() == 0) return r;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  r.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return r;
  const double cut = threshold_rel * smax;
  while (r.rank < s.size() && s(r.rank) > cut) ++r.rank;
  const double floor_val =
      smax * std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(m.rows(), m.cols()));
  const double discarded = r.rank < s.size() ? std::max(s(r.rank), floor_val) : floor_val;
  r.gap_ratio = s(r.rank - 1) / discarded;
  return r;
}

/// Principal square root of a symmetric positive-definite matrix.
inline Matrix spd_sqrt(const Matrix& p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  if (es.info() != Eigen::Success) throw ConvergenceError("spd_sqrt: eigen decomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("spd_sqrt: matrix is not positive definite");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

inline double orthogonality_residual(const Matrix& g) {
  return (g.transpose() * g - Matrix::Identity(g.cols(), g.cols())).cwiseAbs().maxCoeff();
}

inline double unitarity_residual(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

inline bool is_orthogonal(const Matrix& g, double tolerance = tol::identity) {
  return g.rows() == g.cols() && orthogonality_residual(g) <= tolerance;
}

}  // namespace gptkit
