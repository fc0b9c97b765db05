#pragma once

// Transformation groups: Haar samplers, orbit averages, orthogonalization,
// transitivity, orbit-span ranks and the two-gbit pseudo-gates.

#include <gptkit/bloch.hpp>
#include <gptkit/composite.hpp>
#include <gptkit/core.hpp>
#include <gptkit/hermitian.hpp>
#include <gptkit/instances.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gptkit {

// --- samplers ----------------------------------------------------------------

/// Haar-random orthogonal matrix (QR of a Gaussian matrix, signs fixed by R).
inline Matrix haar_orthogonal(Index n, Rng& rng) {
  Matrix z(n, n);
  std::normal_distribution<double> g(0.0, 1.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) z(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  for (Index j = 0; j < n; ++j) {
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

/// Haar-random rotation: a Haar orthogonal matrix with its first column
/// negated when the determinant is -1.
inline Matrix haar_rotation(Index n, Rng& rng) {
  Matrix q = haar_orthogonal(n, rng);
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

/// psi -> coordinates of U rho(psi) U^dagger.
inline LinearMap conjugation_map(const PsdSliceRep& s, const CMatrix& u) {
  const Index n = static_cast<Index>(s.basis.size());
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j) {
    m.col(j) = coords_from_hermitian(s, u * s.basis[static_cast<std::size_t>(j)] * u.adjoint());
  }
  return LinearMap(std::move(m));
}

inline LinearMap sample_group_element(const GroupSpec& g, const StateSpaceDescriptor& space, Rng& rng) {
  if (g.finite()) {
    if (g.elements.empty()) throw DomainError("sample_group_element: empty group");
    std::uniform_int_distribution<std::size_t> pick(0, g.elements.size() - 1);
    return g.elements[pick(rng)];
  }
  switch (g.family) {
    case NamedFamily::SO:
    case NamedFamily::O: {
      if (!space.ball()) throw UnsupportedRepresentation("SO/O groups act on balls");
      const Index d = space.dim();
      return ball_map(g.family == NamedFamily::SO ? haar_rotation(d, rng) : haar_orthogonal(d, rng));
    }
    case NamedFamily::SUConjugation: {
      if (!space.psd()) throw UnsupportedRepresentation("SU conjugation acts on psd slices");
      return conjugation_map(*space.psd(), haar_special_unitary(space.psd()->c, rng));
    }
  }
  throw UnsupportedRepresentation("sample_group_element");
}

/// Every element of a finite group, or `n` seeded samples of a continuous one.
inline std::vector<LinearMap> group_elements(const TheoryInstance& t, std::size_t n, Rng& rng) {
  if (t.group.finite()) return t.group.elements;
  std::vector<LinearMap> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_group_element(t.group, t.sp(), rng));
  return out;
}

// --- maximally mixed state ---------------------------------------------------

struct MaximallyMixedResult {
  StateVector state;
  bool exact = false;                  // closed form or full finite orbit
  std::optional<StateVector> monte_carlo;
  double max_stderr = 0.0;             // per-coordinate standard error of the estimate
  double max_z = 0.0;                  // largest |estimate - state| / stderr
  double invariance_residual = 0.0;    // largest move of `state` under further elements
};

/// mu = integral of G(psi) dG. Closed forms for balls (centre) and psd slices
/// (I / c); exact orbit average for finite groups; Monte Carlo cross-check for
/// continuous groups.
inline MaximallyMixedResult maximally_mixed(const TheoryInstance& t, std::size_t n_samples, std::uint64_t seed) {
  Rng rng(seed);
  const auto& space = t.sp();
  const StateVector seed_state = sample_pure(space, rng);
  if (t.group.finite()) {
    Vector acc = Vector::Zero(space.ambient());
    for (const auto& g : t.group.elements) acc += g.apply(seed_state.coords());
    acc /= static_cast<double>(t.group.elements.size());
    MaximallyMixedResult r{StateVector(acc), true, std::nullopt, 0.0, 0.0, 0.0};
    for (const auto& g : t.group.elements) {
      r.invariance_residual = std::max(r.invariance_residual, (g.apply(acc) - acc).cwiseAbs().maxCoeff());
    }
    return r;
  }
  std::optional<StateVector> closed;
  if (space.ball()) closed = ball_center(space.dim());
  if (const auto* p = space.psd()) {
    closed = StateVector(coords_from_hermitian(*p, CMatrix::Identity(p->c, p->c) / static_cast<double>(p->c)));
  }
  if (n_samples < 2) throw DomainError("maximally_mixed: need at least two samples");
  Vector sum = Vector::Zero(space.ambient());
  Vector sq = Vector::Zero(space.ambient());
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Vector x = sample_group_element(t.group, space, rng).apply(seed_state.coords());
    sum += x;
    sq += x.cwiseProduct(x);
  }
  const double n = static_cast<double>(n_samples);
  const Vector mean = sum / n;
  const Vector var = ((sq / n) - mean.cwiseProduct(mean)).cwiseMax(0.0) * (n / (n - 1.0));
  const Vector se = (var / n).cwiseSqrt();
  MaximallyMixedResult r;
  r.monte_carlo = StateVector(mean);
  r.max_stderr = se.maxCoeff();
  r.state = closed ? *closed : *r.monte_carlo;
  r.exact = closed.has_value();
  for (Index k = 1; k < mean.size(); ++k) {
    if (se(k) > 0.0) r.max_z = std::max(r.max_z, std::abs(mean(k) - r.state[k]) / se(k));
  }
  double mc_move = 0.0;
  for (int i = 0; i < 100; ++i) {
    const LinearMap g = sample_group_element(t.group, space, rng);
    r.invariance_residual = std::max(r.invariance_residual, (g.apply(r.state.coords()) - r.state.coords()).cwiseAbs().maxCoeff());
    mc_move = std::max(mc_move, (g.apply(mean) - mean).cwiseAbs().maxCoeff());
  }
  if (mc_move > 10.0 * std::max(r.max_stderr, 1e-15) * std::sqrt(static_cast<double>(space.dim()))) {
    throw ConvergenceError("maximally_mixed: Monte Carlo average is not invariant within 10 standard errors");
  }
  return r;
}

struct InvariantReport {
  bool unique = false;
  std::vector<std::size_t> invariant_indices;
};

/// Which candidates are fixed by every (sampled) group element; unique when
/// exactly one is.
inline InvariantReport verify_unique_invariant(const TheoryInstance& t, const std::vector<StateVector>& candidates,
                                               std::uint64_t seed = 0, std::size_t n_elements = 100,
                                               double tolerance = tol::feasibility) {
  Rng rng(seed);
  const auto elems = group_elements(t, n_elements, rng);
  InvariantReport r;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool fixed = true;
    for (const auto& g : elems) {
      if ((g.apply(candidates[i].coords()) - candidates[i].coords()).cwiseAbs().maxCoeff() > tolerance) {
        fixed = false;
        break;
      }
    }
    if (fixed) r.invariant_indices.push_back(i);
  }
  r.unique = r.invariant_indices.size() == 1;
  return r;
}

// --- orthogonalization ---------------------------------------------------------

struct OrthogonalizeResult {
  Matrix S;
  double max_residual = 0.0;  // max over elements of |(S G S^-1)^T (S G S^-1) - I|
};

/// S = sqrt(P), P = average of G^T G. S G S^-1 is orthogonal when the
/// average is over the whole group.
inline OrthogonalizeResult orthogonalize(const std::vector<Matrix>& elements) {
  if (elements.empty()) throw DomainError("orthogonalize: no elements");
  const Index n = elements.front().rows();
  Matrix p = Matrix::Zero(n, n);
  for (const auto& g : elements) p += g.transpose() * g;
  p /= static_cast<double>(elements.size());
  p = (p + p.transpose()) / 2.0;
  OrthogonalizeResult r{spd_sqrt(p), 0.0};
  const Matrix s_inv = r.S.inverse();
  for (const auto& g : elements) r.max_residual = std::max(r.max_residual, orthogonality_residual(r.S * g * s_inv));
  return r;
}

inline OrthogonalizeResult orthogonalize(const GroupSpec& g) {
  if (!g.finite()) throw DomainError("orthogonalize: pass sampled elements for continuous groups");
  std::vector<Matrix> m;
  for (const auto& e : g.elements) m.push_back(e.matrix());
  return orthogonalize(m);
}

// --- transitivity ----------------------------------------------------------------

/// Rotation (or, when allowed, reflection) taking unit vector u to v.
inline std::optional<Matrix> aligning_orthogonal(const Vector& u, const Vector& v, bool allow_reflection) {
  const Index n = u.size();
  const Matrix id = Matrix::Identity(n, n);
  const double c = u.dot(v);
  if (allow_reflection) {
    const Vector w = u - v;
    if (w.norm() < 1e-14) return id;
    const Vector h = w.normalized();
    return Matrix(id - 2.0 * h * h.transpose());
  }
  if (c > -1.0 + 1e-9) {
    const Matrix k = v * u.transpose() - u * v.transpose();
    return Matrix(id + k + k * k / (1.0 + c));
  }
  if (n < 2) return std::nullopt;
  // Antipodal: rotate by pi in a plane containing u.
  Index j = 0;
  u.cwiseAbs().minCoeff(&j);
  Vector w = Vector::Zero(n);
  w(j) = 1.0;
  w = (w - w.dot(u) * u).normalized();
  return Matrix(id - 2.0 * u * u.transpose() - 2.0 * w * w.transpose());
}

/// Special unitary U with U a = (phase) b, for unit vectors a, b.
inline CMatrix aligning_unitary(const CVector& a, const CVector& b) {
  const Index c = a.size();
  const Complex ov = b.adjoint() * a;
  const CVector bb = std::abs(ov) > 1e-15 ? CVector(b * (ov / std::abs(ov))) : b;
  const CVector w = a - bb;
  if (w.norm() < 1e-14) return CMatrix::Identity(c, c);
  const CMatrix h = CMatrix::Identity(c, c) - 2.0 * w * w.adjoint() / w.squaredNorm();
  return h * std::polar(1.0, std::numbers::pi / static_cast<double>(c));
}

inline CVector leading_eigenvector(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  return es.eigenvectors().col(rho.rows() - 1);
}

struct TransitivityReport {
  bool pass = false;
  std::string method;
  std::size_t pairs_checked = 0;
  std::size_t orbit_size = 0;
  std::size_t pure_count = 0;
  double max_residual = 0.0;
  bool continuous_part = false;  // informational: group has a non-trivial connected part
  std::optional<std::pair<StateVector, StateVector>> witness;
};

/// Requirement 4: every pair of pure states is connected by a group element.
/// Finite groups by exact orbit enumeration, named groups by constructing the
/// connecting element for sampled pairs.
inline TransitivityReport transitivity_audit(const TheoryInstance& t, std::size_t n_pairs, std::uint64_t seed,
                                             double tolerance = 1e-9) {
  TransitivityReport r;
  const auto& space = t.sp();
  Rng rng(seed);
  if (t.group.finite()) {
    r.method = "orbit-enumeration";
    const auto& verts = space.vertex_list() ? space.vertex_list()->vertices : pure_states(space, n_pairs, rng);
    r.pure_count = verts.size();
    std::vector<char> reached(verts.size(), 0);
    for (const auto& g : t.group.elements) {
      const Vector x = g.apply(verts.front().coords());
      for (std::size_t i = 0; i < verts.size(); ++i) {
        if ((x - verts[i].coords()).cwiseAbs().maxCoeff() <= tolerance) reached[i] = 1;
      }
    }
    r.orbit_size = static_cast<std::size_t>(std::count(reached.begin(), reached.end(), 1));
    r.pass = r.orbit_size == verts.size();
    if (!r.pass) {
      const auto it = std::find(reached.begin(), reached.end(), 0);
      r.witness = std::make_pair(verts.front(), verts[static_cast<std::size_t>(it - reached.begin())]);
    }
    r.pairs_checked = verts.size();
    return r;
  }
  r.continuous_part = !(t.group.family != NamedFamily::SUConjugation && t.group.n < 2);
  r.pass = true;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const StateVector a = sample_pure(space, rng);
    const StateVector b = sample_pure(space, rng);
    std::optional<LinearMap> g;
    if (space.ball()) {
      r.method = "aligning-orthogonal";
      const bool refl = t.group.family == NamedFamily::O;
      const auto m = aligning_orthogonal(ball_to_bloch(a.coords()), ball_to_bloch(b.coords()), refl);
      if (m && (refl || m->determinant() > 0.0) && is_orthogonal(*m, 1e-10)) g = ball_map(*m);
    } else if (const auto* p = space.psd()) {
      r.method = "aligning-unitary";
      const CMatrix u = aligning_unitary(leading_eigenvector(hermitian_image(*p, a.coords())),
                                         leading_eigenvector(hermitian_image(*p, b.coords())));
      if (is_special_unitary(u, 1e-10)) g = conjugation_map(*p, u);
    } else {
      throw UnsupportedRepresentation("transitivity_audit: named group on unsupported space");
    }
    ++r.pairs_checked;
    const double res = g ? (g->apply(a.coords()) - b.coords()).cwiseAbs().maxCoeff() : 1.0;
    r.max_residual = std::max(r.max_residual, res);
    if (res > tolerance) {
      r.pass = false;
      r.witness = std::make_pair(a, b);
      return r;
    }
  }
  return r;
}

// --- orbit-span ranks --------------------------------------------------------------

enum class SeedClass { RotationLike, ReflectionLike, Generic, Vector };

inline const char* to_string(SeedClass c) {
  switch (c) {
    case SeedClass::RotationLike: return "rotation-like";
    case SeedClass::ReflectionLike: return "reflection-like";
    case SeedClass::Generic: return "generic";
    case SeedClass::Vector: return "vector";
  }
  return "?";
}

struct OrbitSpanReport {
  int d2 = 0;
  SeedClass seed_class = SeedClass::Generic;
  std::size_t samples = 0;
  Index rank = 0;
  double gap_ratio = 0.0;
  bool ambiguous = false;
  std::vector<double> singular_values;
};

inline OrbitSpanReport rank_report(int d2, SeedClass cls, const Matrix& rows) {
  const RankReport rr = numerical_rank(rows);
  return {d2, cls, static_cast<std::size_t>(rows.rows()), rr.rank, rr.gap_ratio, rr.gap_ratio < 1e3, rr.singular_values};
}

/// Rank of span{H_A C H_B^T} (or span{H a} for the vector class) with H_A, H_B
/// Haar in SO(d2 - 1).
inline OrbitSpanReport orbit_span_rank(int d2, SeedClass cls, std::size_t n_samples, std::uint64_t seed) {
  if (d2 < 3 || d2 % 2 == 0) throw DomainError("orbit_span_rank: d2 must be odd and at least 3");
  const Index n = d2 - 1;
  if (n_samples < static_cast<std::size_t>(n * n + 8)) throw DomainError("orbit_span_rank: too few samples");
  Rng rng(seed);
  Matrix c;
  switch (cls) {
    case SeedClass::RotationLike:
      c = haar_rotation(n, rng);
      break;
    case SeedClass::ReflectionLike:
      c = haar_rotation(n, rng);
      c.col(0) = -c.col(0);
      break;
    case SeedClass::Generic:
      c = Matrix::NullaryExpr(n, n, [&]() { return std::normal_distribution<double>(0.0, 1.0)(rng); });
      break;
    case SeedClass::Vector:
      c = sphere_point(n, rng);
      break;
  }
  Matrix rows(static_cast<Index>(n_samples), c.size());
  for (Index s = 0; s < rows.rows(); ++s) {
    const Matrix ha = haar_rotation(n, rng);
    const Matrix x = cls == SeedClass::Vector ? Matrix(ha * c) : Matrix(ha * c * haar_rotation(n, rng).transpose());
    rows.row(s) = Eigen::Map<const Vector>(x.data(), x.size()).transpose();
  }
  return rank_report(d2, cls, rows);
}

/// Real 6x6 form [[re U, im U], [-im U, re U]] of U in SU(3).
inline Matrix su3_real_rep(const CMatrix& u) {
  if (u.rows() != 3 || u.cols() != 3) throw DimensionError("su3_real_rep: expects 3x3");
  Matrix h(6, 6);
  h << u.real(), u.imag(), -u.imag(), u.real();
  return h;
}

struct Su3Report {
  OrbitSpanReport generic;            // full product group, generic seed
  Index subgroup_min_dim = 0;         // SO(3)-diagonal subgroup, minimum over seeds
  Index group_min_dim = 0;            // full product group, minimum over seeds
  double homomorphism_residual = 0.0;
  double orthogonality_residual = 0.0;
};

inline Su3Report su3_block_orbit_rank(std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 44) throw DomainError("su3_block_orbit_rank: too few samples");
  Rng rng(seed);
  Su3Report r;
  for (int i = 0; i < 100; ++i) {
    const CMatrix u = haar_special_unitary(3, rng);
    const CMatrix v = haar_special_unitary(3, rng);
    const Matrix hu = su3_real_rep(u);
    r.homomorphism_residual =
        std::max(r.homomorphism_residual, (su3_real_rep(u * v) - hu * su3_real_rep(v)).cwiseAbs().maxCoeff());
    r.orthogonality_residual = std::max(r.orthogonality_residual, orthogonality_residual(hu));
  }
  auto span_rank = [&](const Matrix& c, bool subgroup) {
    Matrix rows(static_cast<Index>(n_samples), 36);
    for (Index s = 0; s < rows.rows(); ++s) {
      Matrix ha, hb;
      if (subgroup) {
        const Matrix ua = haar_rotation(3, rng);
        const Matrix ub = haar_rotation(3, rng);
        ha = Matrix::Zero(6, 6);
        hb = Matrix::Zero(6, 6);
        ha.topLeftCorner(3, 3) = ha.bottomRightCorner(3, 3) = ua;
        hb.topLeftCorner(3, 3) = hb.bottomRightCorner(3, 3) = ub;
      } else {
        ha = su3_real_rep(haar_special_unitary(3, rng));
        hb = su3_real_rep(haar_special_unitary(3, rng));
      }
      const Matrix x = ha * c * hb.transpose();
      rows.row(s) = Eigen::Map<const Vector>(x.data(), 36).transpose();
    }
    return rank_report(7, SeedClass::Generic, rows);
  };
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Matrix> seeds;
  seeds.push_back(Matrix::NullaryExpr(6, 6, [&]() { return g(rng); }));
  seeds.push_back(Matrix::Identity(6, 6));
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      Matrix c = Matrix::Zero(6, 6);
      c.block(3 * bi, 3 * bj, 3, 3) = Matrix::NullaryExpr(3, 3, [&]() { return g(rng); });
      seeds.push_back(c);
    }
  }
  r.generic = span_rank(seeds.front(), false);
  r.subgroup_min_dim = r.group_min_dim = 36;
  for (const auto& c : seeds) {
    r.subgroup_min_dim = std::min(r.subgroup_min_dim, span_rank(c, true).rank);
    r.group_min_dim = std::min(r.group_min_dim, span_rank(c, false).rank);
  }
  return r;
}

// --- pseudo-gates ---------------------------------------------------------------------

struct PseudoGates {
  LinearMap swap;
  LinearMap cnot;
};

/// (V (x) V) G (V (x) V)^dagger for G in {SWAP, CNOT}, V|k> = phi_k, acting on
/// the joint coordinates of a quantum composite of two gbits.
inline PseudoGates pseudo_gate_maps(const CompositeSpace& cs, const StateVector& phi0, const StateVector& phi1) {
  const auto* joint = cs.joint->psd();
  if (!joint || joint->c != 4) throw UnsupportedRepresentation("pseudo gates need a two-qubit psd composite");
  const CVector v0 = leading_eigenvector(hermitian_of(*cs.a, phi0));
  const CVector v1 = leading_eigenvector(hermitian_of(*cs.a, phi1));
  if (std::abs(v0.dot(v1)) > 1e-9) throw DomainError("pseudo gates: phi0 and phi1 are not distinguishable");
  CMatrix v(2, 2);
  v.col(0) = v0;
  v.col(1) = v1;
  const CMatrix vv = kron(v, v);
  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  CMatrix cnot = CMatrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  return {conjugation_map(*joint, vv * swap * vv.adjoint()), conjugation_map(*joint, vv * cnot * vv.adjoint())};
}

struct PseudoGateReport {
  double swap_residual = 0.0;
  double cnot_residual = 0.0;
  double mu_residual = 0.0;
  bool pass = false;
};

/// G_swap(phi_a (x) phi_b) = phi_b (x) phi_a, G_cnot(phi_a (x) phi_b) = phi_a (x) phi_{a xor b},
/// both fixing mu_AB.
inline PseudoGateReport verify_pseudo_gates(const CompositeSpace& cs, const StateVector& phi0, const StateVector& phi1,
                                            double tolerance = 1e-12) {
  const PseudoGates g = pseudo_gate_maps(cs, phi0, phi1);
  const std::array<const StateVector*, 2> phi{&phi0, &phi1};
  PseudoGateReport r;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const StateVector in = product_state(*phi[a], *phi[b]);
      r.swap_residual = std::max(
          r.swap_residual, (g.swap.apply(in.coords()) - product_state(*phi[b], *phi[a]).coords()).cwiseAbs().maxCoeff());
      r.cnot_residual = std::max(r.cnot_residual, (g.cnot.apply(in.coords()) - product_state(*phi[a], *phi[a ^ b]).coords())
                                                      .cwiseAbs()
                                                      .maxCoeff());
    }
  }
  const auto& p = *cs.joint->psd();
  const Vector mu = coords_from_hermitian(p, CMatrix::Identity(4, 4) / 4.0);
  r.mu_residual = std::max((g.swap.apply(mu) - mu).cwiseAbs().maxCoeff(), (g.cnot.apply(mu) - mu).cwiseAbs().maxCoeff());
  r.pass = r.swap_residual <= tolerance && r.cnot_residual <= tolerance && r.mu_residual <= tolerance;
  return r;
}

}  // namespace gptkit
