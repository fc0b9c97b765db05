#pragma once

// Perfect discrimination, capacity search, tight effects and relative-interior
// tests. Polytopes go through the simplex solver; balls and psd slices use
// their closed-form effect sets.

#include <gptkit/core.hpp>
#include <gptkit/lp.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace gptkit {

namespace detail {

inline Measurement measurement_from_duals(std::vector<Vector> duals) {
  // Last effect closes the sum exactly.
  Vector last = Effect::unit(duals.front().size() - 1).dual();
  for (std::size_t a = 0; a + 1 < duals.size(); ++a) last -= duals[a];
  duals.back() = last;
  std::vector<Effect> effects;
  for (auto& d : duals) effects.emplace_back(std::move(d));
  return Measurement(std::move(effects));
}

inline bool delta_condition(const std::vector<Vector>& duals, const std::vector<StateVector>& states, double tolerance) {
  for (std::size_t a = 0; a < duals.size(); ++a) {
    for (std::size_t b = 0; b < states.size(); ++b) {
      if (std::abs(duals[a].dot(states[b].coords()) - (a == b ? 1.0 : 0.0)) > tolerance) return false;
    }
  }
  return true;
}

inline std::optional<Measurement> distinguish_polytope(const std::vector<StateVector>& states,
                                                       const std::vector<StateVector>& vertices, double tolerance) {
  const std::size_t n = states.size();
  const Index m = states.front().size();
  const Index nv = static_cast<Index>(n) * m;
  lp::LPProblem p(nv);
  p.set_all_free();
  auto row = [&](std::size_t a, const Vector& x) {
    Vector c = Vector::Zero(nv);
    c.segment(static_cast<Index>(a) * m, m) = x;
    return c;
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) p.add(row(a, states[b].coords()), lp::Relation::Equal, a == b ? 1.0 : 0.0);
    for (const auto& v : vertices) p.add(row(a, v.coords()), lp::Relation::GreaterEqual, 0.0);
  }
  for (Index k = 0; k < m; ++k) {
    Vector c = Vector::Zero(nv);
    for (std::size_t a = 0; a < n; ++a) c(static_cast<Index>(a) * m + k) = 1.0;
    p.add(c, lp::Relation::Equal, k == 0 ? 1.0 : 0.0);
  }
  const lp::LPResult r = lp::solve(p, tolerance);
  if (!r.optimal()) return std::nullopt;
  std::vector<Vector> duals;
  for (std::size_t a = 0; a < n; ++a) duals.push_back(r.point->segment(static_cast<Index>(a) * m, m));
  return measurement_from_duals(std::move(duals));
}

/// Dual vector of the ball effect (1 + nu . psi_hat) / 2.
inline Vector ball_effect_dual(const Vector& nu) {
  Vector d(nu.size() + 1);
  d(0) = (1.0 - nu.sum()) / 2.0;
  d.tail(nu.size()) = nu;
  return d;
}

inline std::optional<Measurement> distinguish_ball(const std::vector<StateVector>& states, double tolerance) {
  if (states.size() == 1) return Measurement({Effect::unit(states.front().dim())});
  if (states.size() != 2) return std::nullopt;
  const Vector b1 = ball_to_bloch(states[0].coords());
  const Vector b2 = ball_to_bloch(states[1].coords());
  if (std::abs(b1.norm() - 1.0) > tolerance || (b1 + b2).norm() > tolerance) return std::nullopt;
  return measurement_from_duals({ball_effect_dual(b1.normalized()), Vector()});
}

inline CMatrix support_projector(const CMatrix& rho, double tolerance) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  CMatrix p = CMatrix::Zero(rho.rows(), rho.cols());
  for (Index k = 0; k < rho.rows(); ++k) {
    if (es.eigenvalues()(k) > tolerance) p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  return p;
}

inline std::optional<Measurement> distinguish_psd(const std::vector<StateVector>& states, const PsdSliceRep& s,
                                                  double tolerance) {
  std::vector<CMatrix> rhos;
  for (const auto& x : states) rhos.push_back(hermitian_image(s, x.coords()));
  for (std::size_t a = 0; a < rhos.size(); ++a) {
    for (std::size_t b = a + 1; b < rhos.size(); ++b) {
      if ((rhos[a] * rhos[b]).cwiseAbs().maxCoeff() > tolerance) return std::nullopt;
    }
  }
  std::vector<Vector> duals;
  for (const auto& r : rhos) duals.push_back(effect_from_operator(s, support_projector(r, tolerance)).dual());
  return measurement_from_duals(std::move(duals));
}

}  // namespace detail

/// Measurement with Omega_a(psi_b) = delta_ab, or nullopt when none exists.
inline std::optional<Measurement> find_distinguishing_measurement(const std::vector<StateVector>& states,
                                                                  const StateSpaceDescriptor& space,
                                                                  double tolerance = tol::feasibility) {
  if (states.empty()) throw DomainError("find_distinguishing_measurement: no states");
  for (const auto& s : states) require_same_size(s.size(), space.ambient(), "find_distinguishing_measurement");
  std::optional<Measurement> m;
  std::vector<Vector> duals;
  switch (space.kind()) {
    case Representation::VertexList:
      m = detail::distinguish_polytope(states, space.vertex_list()->vertices, tolerance);
      break;
    case Representation::Ball:
      m = detail::distinguish_ball(states, tolerance);
      break;
    case Representation::PsdSlice:
      m = detail::distinguish_psd(states, *space.psd(), tolerance);
      break;
    case Representation::ProductHull:
      throw UnsupportedRepresentation("find_distinguishing_measurement: product hull");
  }
  if (!m) return m;
  for (const auto& e : m->effects()) duals.push_back(e.dual());
  if (!detail::delta_condition(duals, states, std::max(tolerance, 1e-9) * 10.0)) return std::nullopt;
  return m;
}

/// Relaxation certificate for the ball: the distinguishing LP with effect
/// positivity imposed only on `n_points` sphere points. Infeasibility of the
/// relaxation proves the states are not perfectly distinguishable.
inline bool ball_relaxation_infeasible(const std::vector<StateVector>& states, int d2, std::size_t n_points,
                                       std::uint64_t seed = 1) {
  Rng rng(seed);
  std::vector<StateVector> pts;
  for (int k = 0; k < d2; ++k) {
    Vector e = Vector::Zero(d2);
    e(k) = 1.0;
    pts.push_back(ball_from_bloch(e));
    pts.push_back(ball_from_bloch(-e));
  }
  while (pts.size() < n_points) pts.push_back(ball_from_bloch(sphere_point(d2, rng)));
  return !detail::distinguish_polytope(states, pts, tol::feasibility).has_value();
}

struct CapacityCertificate {
  std::vector<StateVector> states;
  Measurement measurement;
  int value = 0;
  // True when every candidate subset of size value + 1 was examined and shown
  // infeasible, so `value` is also an upper bound relative to the pool.
  bool pool_exhausted = false;
  std::size_t subsets_tested = 0;
};

/// Largest perfectly distinguishable family within the candidate pool.
/// Pool capped at 64 and family size at 8.
inline CapacityCertificate capacity(const StateSpaceDescriptor& space, int max_c,
                                    const std::vector<StateVector>& candidate_pures,
                                    double tolerance = tol::feasibility, std::size_t max_subsets = 200000) {
  if (candidate_pures.empty()) throw DomainError("capacity: empty candidate set");
  if (max_c < 1 || max_c > 8) throw DomainError("capacity: max_c must be in 1..8");
  if (candidate_pures.size() > 64) throw DomainError("capacity: candidate pool larger than 64");
  const std::size_t n = candidate_pures.size();
  // Pairwise distinguishability graph; every distinguishable family is a clique.
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::size_t tested = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++tested;
      const bool ok = find_distinguishing_measurement({candidate_pures[i], candidate_pures[j]}, space, tolerance)
                          .has_value();
      adj[i][j] = adj[j][i] = ok;
    }
  }
  CapacityCertificate best{{candidate_pures.front()}, Measurement({Effect::unit(space.dim())}), 1, false, tested};
  bool truncated = false;
  std::vector<std::size_t> current;
  std::vector<StateVector> current_states;
  // Depth-first extension in index order; distinguishability is inherited by
  // subsets, so an infeasible family prunes its whole subtree.
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    for (std::size_t k = start; k < n; ++k) {
      if (truncated) return;
      if (static_cast<int>(current.size()) >= max_c) return;
      if (current.size() + (n - k) <= static_cast<std::size_t>(best.value)) return;
      bool clique = true;
      for (std::size_t x : current) clique = clique && adj[x][k];
      if (!clique) continue;
      current.push_back(k);
      current_states.push_back(candidate_pures[k]);
      std::optional<Measurement> m;
      if (current.size() == 1) {
        m = Measurement({Effect::unit(space.dim())});
      } else {
        if (++tested > max_subsets) truncated = true;
        m = find_distinguishing_measurement(current_states, space, tolerance);
      }
      if (m) {
        if (static_cast<int>(current.size()) > best.value) {
          best.value = static_cast<int>(current.size());
          best.states = current_states;
          best.measurement = *m;
        }
        extend(k + 1);
      }
      current.pop_back();
      current_states.pop_back();
    }
  };
  extend(0);
  best.subsets_tested = tested;
  best.pool_exhausted = !truncated && best.value < max_c;
  return best;
}

/// max |Omega_a(psi_b) - delta_ab| over the certificate, and the deviation of
/// the effects from summing to the unit.
inline double certificate_residual(const CapacityCertificate& c) {
  if (c.states.empty()) return 0.0;
  double r = c.measurement.unit_deviation();
  const auto& e = c.measurement.effects();
  for (std::size_t a = 0; a < e.size(); ++a) {
    for (std::size_t b = 0; b < c.states.size(); ++b) {
      r = std::max(r, std::abs(evaluate_effect(e[a], c.states[b]) - (a == b ? 1.0 : 0.0)));
    }
  }
  return r;
}

struct TightEffect {
  Effect effect;
  StateVector partner;  // a state with effect value 0
};

/// Effect with value 1 on psi and minimum 0 over the space, with a state
/// attaining that minimum; nullopt when psi lies in the relative interior.
inline std::optional<TightEffect> find_tight_effect(const StateSpaceDescriptor& space, const StateVector& psi,
                                                    double tolerance = tol::feasibility) {
  require_same_size(psi.size(), space.ambient(), "find_tight_effect");
  switch (space.kind()) {
    case Representation::VertexList: {
      const auto& v = space.vertex_list()->vertices;
      const Index m = psi.size();
      // maximize sum_v (1 - w.v) subject to 0 <= w.v <= 1, w.psi = 1.
      lp::LPProblem p(m);
      p.set_all_free();
      for (const auto& x : v) {
        p.add(x.coords(), lp::Relation::LessEqual, 1.0);
        p.add(x.coords(), lp::Relation::GreaterEqual, 0.0);
        p.objective -= x.coords();
      }
      p.add(psi.coords(), lp::Relation::Equal, 1.0);
      const lp::LPResult r = lp::solve(p, tolerance);
      if (!r.optimal() || *r.value + static_cast<double>(v.size()) <= 10.0 * tolerance) return std::nullopt;
      const Vector& w = *r.point;
      std::size_t arg = 0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (w.dot(v[i].coords()) < w.dot(v[arg].coords())) arg = i;
      }
      const double lo = w.dot(v[arg].coords());
      if (lo > 1.0 - 10.0 * tolerance) return std::nullopt;
      const Vector unit = Effect::unit(space.dim()).dual();
      return TightEffect{Effect((w - lo * unit) / (1.0 - lo)), v[arg]};
    }
    case Representation::Ball: {
      const Vector b = ball_to_bloch(psi.coords());
      if (b.norm() < 1.0 - tolerance) return std::nullopt;
      const Vector nu = b.normalized();
      return TightEffect{Effect(detail::ball_effect_dual(nu)), ball_from_bloch(-nu)};
    }
    case Representation::PsdSlice: {
      const auto& s = *space.psd();
      const CMatrix rho = hermitian_image(s, psi.coords());
      Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
      if (es.eigenvalues()(0) > tolerance) return std::nullopt;
      const CMatrix proj = detail::support_projector(rho, tolerance);
      const CVector k = es.eigenvectors().col(0);
      return TightEffect{effect_from_operator(s, proj), StateVector(coords_from_hermitian(s, k * k.adjoint()))};
    }
    case Representation::ProductHull:
      break;
  }
  throw UnsupportedRepresentation("find_tight_effect: product hull");
}

/// Largest t such that psi is a convex combination of the vertices with every
/// weight at least t; positive exactly in the relative interior.
inline double interior_margin(const std::vector<StateVector>& vertices, const StateVector& psi) {
  const Index n = static_cast<Index>(vertices.size());
  lp::LPProblem p(n + 1);
  p.objective(n) = 1.0;
  p.set_free(n);
  for (Index k = 0; k < psi.size(); ++k) {
    Vector c = Vector::Zero(n + 1);
    for (Index i = 0; i < n; ++i) c(i) = vertices[static_cast<std::size_t>(i)][k];
    p.add(c, lp::Relation::Equal, psi[k]);
  }
  for (Index i = 0; i < n; ++i) {
    Vector c = Vector::Zero(n + 1);
    c(i) = 1.0;
    c(n) = -1.0;
    p.add(c, lp::Relation::GreaterEqual, 0.0);
  }
  Vector cap = Vector::Zero(n + 1);
  cap(n) = 1.0;
  p.add(cap, lp::Relation::LessEqual, 1.0);
  const lp::LPResult r = lp::solve(p);
  if (!r.optimal()) return -1.0;
  return *r.value;
}

inline bool is_completely_mixed(const StateSpaceDescriptor& space, const StateVector& psi,
                                double tolerance = tol::feasibility) {
  require_same_size(psi.size(), space.ambient(), "is_completely_mixed");
  switch (space.kind()) {
    case Representation::VertexList:
      return interior_margin(space.vertex_list()->vertices, psi) > tolerance;
    case Representation::Ball:
      return ball_to_bloch(psi.coords()).norm() < 1.0 - tolerance;
    case Representation::PsdSlice:
      return min_eigenvalue(hermitian_image(*space.psd(), psi.coords())) > tolerance;
    case Representation::ProductHull:
      break;
  }
  throw UnsupportedRepresentation("is_completely_mixed: product hull");
}

}  // namespace gptkit
