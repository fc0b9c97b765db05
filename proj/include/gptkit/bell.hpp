#pragma once

// CHSH functional on two binary-input, binary-output systems and its maxima
// over local, no-signaling and quantum correlations.

#include <gptkit/bloch.hpp>
#include <gptkit/core.hpp>
#include <gptkit/lp.hpp>
#include <gptkit/polytope.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace gptkit {

/// Dual vector w with CHSH(psi) = w . psi on a pair of gbits with d2 = 2,
/// E_xy = 4 p(x, y) - 2 p(x) - 2 p(y) + 1 and CHSH = E11 + E12 + E21 - E22.
inline Vector chsh_functional() {
  const Index n = 3;
  Vector w = Vector::Zero(n * n);
  for (Index x = 1; x <= 2; ++x) {
    for (Index y = 1; y <= 2; ++y) {
      const double s = (x == 2 && y == 2) ? -1.0 : 1.0;
      w(x * n + y) += 4.0 * s;
      w(x * n) -= 2.0 * s;
      w(y) -= 2.0 * s;
      w(0) += s;
    }
  }
  return w;
}

/// max of w . psi over conv(points), as an LP over convex weights.
inline double lp_max_over_hull(const Vector& w, const std::vector<StateVector>& points) {
  const Index n = static_cast<Index>(points.size());
  lp::LPProblem p(n);
  for (Index i = 0; i < n; ++i) p.objective(i) = w.dot(points[static_cast<std::size_t>(i)].coords());
  p.add(Vector::Ones(n), lp::Relation::Equal, 1.0);
  const lp::LPResult r = lp::solve(p);
  if (!r.optimal()) throw SolverError("lp_max_over_hull: LP not optimal");
  return *r.value;
}

/// max of w . psi over {psi : psi_0 = 1, (f (x) g) . psi >= 0 for facet effects f, g},
/// the no-signaling polytope given by inequalities only.
inline double lp_max_over_max_tensor(const Vector& w, const std::vector<StateVector>& va,
                                     const std::vector<StateVector>& vb) {
  const auto fa = polytope::facet_effects(va);
  const auto fb = polytope::facet_effects(vb);
  const Index n = w.size();
  lp::LPProblem p(n);
  p.set_all_free();
  p.objective = w;
  Vector e0 = Vector::Zero(n);
  e0(0) = 1.0;
  p.add(e0, lp::Relation::Equal, 1.0);
  for (const auto& f : fa) {
    for (const auto& g : fb) p.add(kron_vec(f, g), lp::Relation::GreaterEqual, 0.0);
  }
  const lp::LPResult r = lp::solve(p);
  if (!r.optimal()) throw SolverError("lp_max_over_max_tensor: LP not optimal");
  return *r.value;
}

/// Correlator of unit-vector measurements a, b from the four outcome
/// probabilities (1 + s a.alpha + t b.beta + s t a^T C b) / 4.
inline double correlator(const TwoGbitBloch& psi, const Vector& a, const Vector& b) {
  double e = 0.0;
  for (int s : {1, -1}) {
    for (int t : {1, -1}) {
      const double p = (1.0 + s * a.dot(psi.alpha) + t * b.dot(psi.beta) + s * t * a.dot(psi.C * b)) / 4.0;
      e += s * t * p;
    }
  }
  return e;
}

struct ChshSettings {
  double value = 0.0;
  Vector a1, a2, b1, b2;
};

inline double chsh_value(const TwoGbitBloch& psi, const Vector& a1, const Vector& a2, const Vector& b1,
                         const Vector& b2) {
  return correlator(psi, a1, b1) + correlator(psi, a1, b2) + correlator(psi, a2, b1) - correlator(psi, a2, b2);
}

/// Alternating optimization over unit-vector settings: with B fixed the best
/// a1, a2 are C(b1 +- b2) normalized, and symmetrically for B.
inline ChshSettings chsh_seesaw(const TwoGbitBloch& psi, Rng& rng, int restarts = 8, int iters = 500) {
  const Index d = psi.d2();
  ChshSettings best;
  best.value = -1e300;
  auto unit = [](const Vector& v, const Vector& fallback) { return v.norm() > 1e-15 ? Vector(v.normalized()) : fallback; };
  for (int r = 0; r < restarts; ++r) {
    Vector b1 = sphere_point(d, rng), b2 = sphere_point(d, rng);
    Vector a1 = sphere_point(d, rng), a2 = sphere_point(d, rng);
    double prev = -1e300;
    for (int k = 0; k < iters; ++k) {
      a1 = unit(psi.C * (b1 + b2), a1);
      a2 = unit(psi.C * (b1 - b2), a2);
      b1 = unit(psi.C.transpose() * (a1 + a2), b1);
      b2 = unit(psi.C.transpose() * (a1 - a2), b2);
      const double v = chsh_value(psi, a1, a2, b1, b2);
      if (std::abs(v - prev) < 1e-15) break;
      prev = v;
    }
    const double v = chsh_value(psi, a1, a2, b1, b2);
    if (v > best.value) best = {v, a1, a2, b1, b2};
  }
  return best;
}

struct EquatorChsh {
  double value = 0.0;
  double u = 0.0;
  Index grid_index = 0;
};

/// Best CHSH value over the equator states psi(u, 0), u on a uniform grid of
/// `grid` points in [0, pi), each optimized by seesaw.
inline EquatorChsh chsh_equator_max(Index grid, std::uint64_t seed) {
  Rng rng(seed);
  EquatorChsh out;
  out.value = -1e300;
  for (Index k = 0; k < grid; ++k) {
    const double u = std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid);
    const double v = chsh_seesaw(equator_state(u, 0.0), rng).value;
    if (v > out.value) out = {v, u, k};
  }
  return out;
}

}  // namespace gptkit
