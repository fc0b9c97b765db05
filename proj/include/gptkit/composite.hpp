#pragma once

// Bipartite composites on the tensor-product space R^{dA+1} (x) R^{dB+1}.
// Joint coordinate (i, j) sits at index i * (dB + 1) + j; (i, 0) and (0, j)
// are the local fiducial probabilities and (i, j) the joint ones.

#include <gptkit/core.hpp>
#include <gptkit/polytope.hpp>

#include <array>
#include <string>
#include <vector>

namespace gptkit {

struct CompositeSpace {
  SpacePtr a;
  SpacePtr b;
  SpacePtr joint;
  CompositeRule rule = CompositeRule::LocalTomographyMin;
};

enum class Side { A, B };

inline bool local_tomography_dim_check(Index d_a, Index d_b, Index d_ab) {
  if (d_a < 0 || d_b < 0 || d_ab < 0) throw DomainError("local_tomography_dim_check: negative dimension");
  return (d_ab + 1) == (d_a + 1) * (d_b + 1);
}

inline double joint_probability(const Effect& ex, const Effect& ey, const StateVector& psi_ab) {
  require_same_size(ex.size() * ey.size(), psi_ab.size(), "joint_probability");
  return kron_vec(ex.dual(), ey.dual()).dot(psi_ab.coords());
}

namespace detail {

inline Index other_size(Index joint, Index part) {
  if (part <= 0 || joint % part != 0) throw DimensionError("composite: part size does not divide joint size");
  return joint / part;
}

}  // namespace detail

/// Component extraction: psi_A = (psi_{i0})_i, psi_B = (psi_{0j})_j.
inline StateVector reduce(const StateVector& psi_ab, Side which, Index ambient_a) {
  const Index nb = detail::other_size(psi_ab.size(), ambient_a);
  const Vector& c = psi_ab.coords();
  if (which == Side::A) {
    Vector out(ambient_a);
    for (Index i = 0; i < ambient_a; ++i) out(i) = c(i * nb);
    return StateVector(std::move(out));
  }
  return StateVector(c.head(nb));
}

/// Reduction through the unit effect on the other side: (1 (x) I) psi or (I (x) 1) psi.
inline StateVector reduce_by_contraction(const StateVector& psi_ab, Side which, Index ambient_a) {
  const Index nb = detail::other_size(psi_ab.size(), ambient_a);
  Matrix contraction;
  if (which == Side::A) {
    contraction = kron(Matrix::Identity(ambient_a, ambient_a), Effect::unit(nb - 1).dual().transpose());
  } else {
    contraction = kron(Effect::unit(ambient_a - 1).dual().transpose(), Matrix::Identity(nb, nb));
  }
  return StateVector(contraction * psi_ab.coords());
}

/// Two-outcome tables p(a, b) for a pair of binary fiducial measurements.
/// Entry [a][b] with a, b in {0 = outcome, 1 = complement}.
using OutcomeTable = std::array<std::array<double, 2>, 2>;

/// Full correlation data: table (i, j) for fiducials x_i of A and y_j of B.
struct CorrelationTable {
  Index d_a = 0;
  Index d_b = 0;
  std::vector<OutcomeTable> tables;  // row-major (i, j)

  OutcomeTable& at(Index i, Index j) { return tables[static_cast<std::size_t>(i * d_b + j)]; }
  const OutcomeTable& at(Index i, Index j) const { return tables[static_cast<std::size_t>(i * d_b + j)]; }
};

inline CorrelationTable correlations_of(const StateVector& psi_ab, Index d_a, Index d_b) {
  require_same_size(psi_ab.size(), (d_a + 1) * (d_b + 1), "correlations_of");
  CorrelationTable t{d_a, d_b, std::vector<OutcomeTable>(static_cast<std::size_t>(d_a * d_b))};
  for (Index i = 1; i <= d_a; ++i) {
    for (Index j = 1; j <= d_b; ++j) {
      const Effect x = Effect::fiducial(d_a, i);
      const Effect y = Effect::fiducial(d_b, j);
      const std::array<Effect, 2> xs{x, x.complement()};
      const std::array<Effect, 2> ys{y, y.complement()};
      auto& tab = t.at(i - 1, j - 1);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) tab[a][b] = joint_probability(xs[a], ys[b], psi_ab);
      }
    }
  }
  return t;
}

struct NoSignalingReport {
  bool ok = true;
  double max_violation = 0.0;
  // Location of the worst violation: the side whose marginal moved, the local
  // fiducial index and the two remote settings that disagree (all 1-based).
  Side side = Side::A;
  Index local_index = 0;
  Index remote_setting_1 = 0;
  Index remote_setting_2 = 0;
};

/// Checks that p(x_i) does not depend on which y_j was measured, and vice versa.
inline NoSignalingReport check_no_signaling(const CorrelationTable& t, double tolerance = tol::feasibility) {
  NoSignalingReport r;
  auto consider = [&](double v, Side s, Index local, Index j1, Index j2) {
    if (v > r.max_violation) {
      r.max_violation = v;
      r.side = s;
      r.local_index = local;
      r.remote_setting_1 = j1;
      r.remote_setting_2 = j2;
    }
  };
  for (Index i = 0; i < t.d_a; ++i) {
    for (Index j = 0; j < t.d_b; ++j) {
      for (Index k = j + 1; k < t.d_b; ++k) {
        const auto& t1 = t.at(i, j);
        const auto& t2 = t.at(i, k);
        consider(std::abs((t1[0][0] + t1[0][1]) - (t2[0][0] + t2[0][1])), Side::A, i + 1, j + 1, k + 1);
      }
    }
  }
  for (Index j = 0; j < t.d_b; ++j) {
    for (Index i = 0; i < t.d_a; ++i) {
      for (Index k = i + 1; k < t.d_a; ++k) {
        const auto& t1 = t.at(i, j);
        const auto& t2 = t.at(k, j);
        consider(std::abs((t1[0][0] + t1[1][0]) - (t2[0][0] + t2[1][0])), Side::B, j + 1, i + 1, k + 1);
      }
    }
  }
  r.ok = r.max_violation <= tolerance;
  return r;
}

/// Checks the tensor-representation state against the marginals it carries:
/// p(x_i) = p(x_i, y_j) + p(x_i, not y_j) for all pairs, and symmetrically.
inline NoSignalingReport check_no_signaling(const StateVector& psi_ab, const CompositeSpace& spaces,
                                            double tolerance = tol::feasibility) {
  const Index d_a = spaces.a->dim();
  const Index d_b = spaces.b->dim();
  require_same_size(psi_ab.size(), (d_a + 1) * (d_b + 1), "check_no_signaling");
  NoSignalingReport r = check_no_signaling(correlations_of(psi_ab, d_a, d_b), tolerance);
  const StateVector ra = reduce(psi_ab, Side::A, d_a + 1);
  const StateVector rb = reduce(psi_ab, Side::B, d_a + 1);
  const CorrelationTable t = correlations_of(psi_ab, d_a, d_b);
  for (Index i = 0; i < d_a; ++i) {
    for (Index j = 0; j < d_b; ++j) {
      const auto& tab = t.at(i, j);
      const double va = std::abs(ra[i + 1] - (tab[0][0] + tab[0][1]));
      const double vb = std::abs(rb[j + 1] - (tab[0][0] + tab[1][0]));
      if (va > r.max_violation) r = {false, va, Side::A, i + 1, j + 1, j + 1};
      if (vb > r.max_violation) r = {false, vb, Side::B, j + 1, i + 1, i + 1};
    }
  }
  r.ok = r.max_violation <= tolerance;
  return r;
}

/// Maximal tensor product of two polytopes: every state positive on all
/// products of facet effects. Vertices found by enumeration.
inline std::vector<StateVector> max_tensor_vertices(const std::vector<StateVector>& va,
                                                    const std::vector<StateVector>& vb) {
  const auto fa = polytope::facet_effects(va);
  const auto fb = polytope::facet_effects(vb);
  const Index n = va.front().size() * vb.front().size();
  Matrix a(static_cast<Index>(fa.size() * fb.size()), n - 1);
  Vector b(a.rows());
  Index r = 0;
  for (const auto& f : fa) {
    for (const auto& g : fb) {
      const Vector w = kron_vec(f, g);
      a.row(r) = -w.tail(n - 1).transpose();
      b(r) = w(0);
      ++r;
    }
  }
  std::vector<StateVector> out;
  for (const auto& x : polytope::enumerate_vertices(a, b)) {
    Vector c(n);
    c(0) = 1.0;
    c.tail(n - 1) = x;
    out.emplace_back(std::move(c));
  }
  return out;
}

namespace detail {

/// Basis matrices B_j with rho(psi) = sum_j psi_j B_j for a single space that
/// admits a Hermitian picture (psd slices; the 3-ball via the Pauli map).
inline std::vector<CMatrix> hermitian_basis(const StateSpaceDescriptor& s) {
  if (const auto* p = s.psd()) return p->basis;
  if (const auto* b = s.ball(); b && b->d2 == 3) {
    CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, Complex(0, -1), Complex(0, 1), 0;
    s3 << 1, 0, 0, -1;
    const CMatrix id = CMatrix::Identity(2, 2);
    return {(id - s1 - s2 - s3) / 2.0, s1, s2, s3};
  }
  throw UnsupportedRepresentation("composite: part has no Hermitian representation");
}

}  // namespace detail

/// Joint state space for a pair of parts under `rule`.
///   vertex-list x vertex-list: products (min / classical) or the maximal
///     tensor product (max, e.g. the no-signaling polytope);
///   quantum rule: psd slice with Kronecker basis;
///   otherwise: product hull.
inline CompositeSpace make_composite(SpacePtr a, SpacePtr b, CompositeRule rule) {
  const Index dim = (a->dim() + 1) * (b->dim() + 1) - 1;
  std::vector<std::string> labels;
  for (Index i = 0; i <= a->dim(); ++i) {
    for (Index j = 0; j <= b->dim(); ++j) {
      if (i == 0 && j == 0) continue;
      const std::string la = i ? a->fiducial_labels()[static_cast<std::size_t>(i - 1)] : "";
      const std::string lb = j ? b->fiducial_labels()[static_cast<std::size_t>(j - 1)] : "";
      labels.push_back(i && j ? la + "," + lb : la + lb);
    }
  }
  SpacePtr joint;
  if (rule == CompositeRule::Quantum) {
    const auto ba = detail::hermitian_basis(*a);
    const auto bb = detail::hermitian_basis(*b);
    std::vector<CMatrix> basis;
    for (const auto& x : ba) {
      for (const auto& y : bb) basis.push_back(kron(x, y));
    }
    const int c = static_cast<int>(ba.front().rows() * bb.front().rows());
    joint = std::make_shared<StateSpaceDescriptor>(dim, make_psd_slice(c, std::move(basis)), labels);
  } else if (a->vertex_list() && b->vertex_list()) {
    const auto& va = a->vertex_list()->vertices;
    const auto& vb = b->vertex_list()->vertices;
    std::vector<StateVector> verts;
    if (rule == CompositeRule::LocalTomographyMax) {
      verts = max_tensor_vertices(va, vb);
    } else {
      for (const auto& x : va) {
        for (const auto& y : vb) verts.push_back(product_state(x, y));
      }
    }
    joint = std::make_shared<StateSpaceDescriptor>(dim, VertexListRep{std::move(verts)}, labels);
  } else {
    joint = std::make_shared<StateSpaceDescriptor>(dim, ProductHullRep{a, b}, labels);
  }
  return CompositeSpace{std::move(a), std::move(b), std::move(joint), rule};
}

}  // namespace gptkit
