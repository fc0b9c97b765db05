#pragma once

// Requirement checkers R1-R5, R5' and the theorem battery.

#include <gptkit/bell.hpp>
#include <gptkit/bloch.hpp>
#include <gptkit/composite.hpp>
#include <gptkit/core.hpp>
#include <gptkit/discrimination.hpp>
#include <gptkit/groups.hpp>
#include <gptkit/hermitian.hpp>
#include <gptkit/instances.hpp>
#include <gptkit/polytope.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace gptkit {

using Json = nlohmann::ordered_json;

enum class Verdict { Pass, Fail, NotApplicable, Ambiguous };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::NotApplicable: return "NOT-APPLICABLE";
    case Verdict::Ambiguous: return "AMBIGUOUS";
  }
  return "?";
}

struct AuditOptions {
  std::uint64_t seed = 0;
  double tol = tol::feasibility;
  std::size_t samples = 200;
};

struct RequirementResult {
  std::string id;
  Verdict verdict = Verdict::NotApplicable;
  std::string detail;
  Json witness = Json::object();
  double tolerance = 0.0;
  std::uint64_t seed = 0;
};

struct TheoremCheck {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  std::string comparison = "abs";  // abs: |observed - expected| <= tolerance; ge: observed >= expected
  bool pass = false;
};

struct AuditReport {
  std::string instance;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::size_t samples = 0;
  std::vector<RequirementResult> requirements;
  std::vector<TheoremCheck> theorems;
  double runtime_ms = 0.0;
};

inline Json to_json(const StateVector& s) {
  Json a = Json::array();
  for (Index i = 0; i < s.size(); ++i) a.push_back(s[i]);
  return a;
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

namespace detail {

inline RequirementResult make_result(const char* id, const AuditOptions& o) {
  RequirementResult r;
  r.id = id;
  r.tolerance = o.tol;
  r.seed = o.seed;
  return r;
}

inline Json vertex_list_json(const std::vector<StateVector>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

}  // namespace detail

/// The capacity-two system an instance's gbit-level requirements refer to.
inline TheoryInstance gbit_of(const TheoryInstance& t) {
  if (t.bipartite()) return gbit_of(*t.part_a);
  const auto& s = t.sp();
  if (const auto* vl = s.vertex_list(); vl && is_simplex(vl->vertices)) {
    return vl->vertices.size() == 2 ? t : classical(2);
  }
  if (const auto* p = s.psd(); p && p->c > 2) return quantum(2);
  return t;
}

// --- R1 ------------------------------------------------------------------------

inline RequirementResult audit_r1(const TheoryInstance& t, const AuditOptions& o = {}) {
  RequirementResult r = detail::make_result("r1", o);
  const TheoryInstance g = gbit_of(t);
  r.verdict = Verdict::Pass;
  r.detail = "gbit state space has finite dimension d2 = " + std::to_string(g.sp().dim());
  r.witness = {{"gbit", g.name}, {"d2", g.sp().dim()}};
  return r;
}

// --- R2 ------------------------------------------------------------------------

inline RequirementResult audit_r2_dims(Index d_a, Index d_b, Index d_ab, const AuditOptions& o = {}) {
  RequirementResult r = detail::make_result("r2", o);
  const bool ok = local_tomography_dim_check(d_a, d_b, d_ab);
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  r.detail = ok ? "(d_AB + 1) = (d_A + 1)(d_B + 1)" : "dimension mismatch";
  r.witness = {{"d_a", d_a}, {"d_b", d_b}, {"d_ab", d_ab}, {"required_d_ab", (d_a + 1) * (d_b + 1) - 1}};
  return r;
}

/// Joint states are fixed by product fiducial statistics: dimension law plus
/// full rank of the product-probability matrix over sampled joint states.
inline RequirementResult audit_r2(const TheoryInstance& t, const AuditOptions& o = {}) {
  const TheoryInstance joint = t.bipartite() ? t : compose(t, t);
  const auto& sa = joint.part_a->sp();
  const auto& sb = joint.part_b->sp();
  RequirementResult r = audit_r2_dims(sa.dim(), sb.dim(), joint.sp().dim(), o);
  if (r.verdict == Verdict::Fail) return r;
  Rng rng(o.seed);
  std::vector<StateVector> states = pure_states(joint.sp(), std::max<std::size_t>(o.samples, 3 * joint.sp().ambient()), rng);
  const Index na = sa.ambient();
  const Index nb = sb.ambient();
  Matrix p(static_cast<Index>(states.size()), na * nb);
  for (Index s = 0; s < p.rows(); ++s) {
    for (Index i = 0; i < na; ++i) {
      const Effect ei = i == 0 ? Effect::unit(sa.dim()) : Effect::fiducial(sa.dim(), i);
      for (Index j = 0; j < nb; ++j) {
        const Effect ej = j == 0 ? Effect::unit(sb.dim()) : Effect::fiducial(sb.dim(), j);
        p(s, i * nb + j) = joint_probability(ei, ej, states[static_cast<std::size_t>(s)]);
      }
    }
  }
  const RankReport rr = numerical_rank(p);
  r.witness["joint"] = joint.name;
  r.witness["sampled_states"] = states.size();
  r.witness["rank"] = rr.rank;
  r.witness["gap_ratio"] = rr.gap_ratio;
  if (rr.gap_ratio < 1e3) {
    r.verdict = Verdict::Ambiguous;
    r.detail = "product-probability rank has no clear singular-value gap";
  } else if (rr.rank != na * nb) {
    r.verdict = Verdict::Fail;
    r.detail = "product statistics do not determine joint states";
  } else {
    r.verdict = Verdict::Pass;
    r.detail = "dimension law holds and product statistics have full rank";
  }
  return r;
}

// --- R3 ------------------------------------------------------------------------

namespace detail {

inline RequirementResult r3_simplex(const TheoryInstance& t, const AuditOptions& o) {
  RequirementResult r = make_result("r3", o);
  const auto& v = t.sp().vertex_list()->vertices;
  const std::size_t n = v.size();
  if (n < 2) {
    r.verdict = Verdict::NotApplicable;
    r.detail = "capacity one: no smaller system";
    return r;
  }
  // Complete measurement: coordinate reading in the vertex basis.
  const Matrix vm = vertex_matrix(v);
  const Matrix duals = vm.inverse();
  std::vector<StateVector> face(v.begin(), v.end() - 1);
  const TheoryInstance small = classical(static_cast<int>(n) - 1);
  const auto& w = small.sp().vertex_list()->vertices;
  const Matrix vf = vertex_matrix(face);
  const Matrix wm = vertex_matrix(w);
  const Matrix map = wm * vf.completeOrthogonalDecomposition().pseudoInverse();
  const Matrix lift = vf * wm.inverse();
  double res = (map * vf - wm).cwiseAbs().maxCoeff();
  for (const auto& f : face) res = std::max(res, std::abs(duals.row(static_cast<Index>(n) - 1).dot(f.coords())));
  Rng rng(o.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double member_res = 0.0;
  double effect_res = 0.0;
  for (std::size_t s = 0; s < std::min<std::size_t>(o.samples, 100); ++s) {
    Vector lam(static_cast<Index>(face.size()));
    for (Index k = 0; k < lam.size(); ++k) lam(k) = -std::log(unif(rng) + 1e-300);
    lam /= lam.sum();
    const Vector psi = vf * lam;
    const Vector img = map * psi;
    member_res = std::max(member_res, is_member(small.sp(), StateVector(img), o.tol) ? 0.0 : 1.0);
    res = std::max(res, (lift * img - psi).cwiseAbs().maxCoeff());
    // A small-system effect with random vertex values, pulled back to the face.
    Vector vals(wm.cols());
    for (Index k = 0; k < vals.size(); ++k) vals(k) = unif(rng);
    const Vector e_small = wm.transpose().fullPivLu().solve(vals);
    const Vector e_face = map.transpose() * e_small;
    effect_res = std::max(effect_res, std::abs(e_face.dot(psi) - e_small.dot(img)));
    for (const auto& f : face) {
      const double x = e_face.dot(f.coords());
      effect_res = std::max(effect_res, std::max(0.0, std::max(-x, x - 1.0)));
    }
  }
  // Transformations of the small system are implemented by face-preserving ones.
  double transport_res = 0.0;
  std::size_t transported = 0;
  for (const auto& g : small.group.generators) {
    bool found = false;
    for (const auto& big : t.group.elements) {
      double e = 0.0;
      for (const auto& f : face) e = std::max(e, (map * big.apply(f.coords()) - g.apply(map * f.coords())).cwiseAbs().maxCoeff());
      if (e <= 1e-9) {
        found = true;
        break;
      }
    }
    transport_res = std::max(transport_res, found ? 0.0 : 1.0);
    transported += found;
  }
  const bool ok = res <= 1e-9 && member_res == 0.0 && effect_res <= 1e-9 && transport_res == 0.0;
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  r.detail = "simplex face {Omega_c = 0} mapped onto classical(" + std::to_string(n - 1) + ") by coordinate deletion";
  r.witness = {{"face_vertices", face.size()},
               {"target", small.name},
               {"map_residual", res},
               {"effect_residual", effect_res},
               {"transformations_transported", transported}};
  return r;
}

inline RequirementResult r3_psd(const TheoryInstance& t, const AuditOptions& o) {
  RequirementResult r = make_result("r3", o);
  const auto& big = *t.sp().psd();
  const int c = big.c;
  const SpacePtr small_space = quantum_space(c - 1);
  const auto& small = *small_space->psd();
  const Index nb = static_cast<Index>(big.basis.size());
  const Index ns = static_cast<Index>(small.basis.size());
  Matrix map(ns, nb);
  for (Index j = 0; j < nb; ++j) {
    map.col(j) = coords_from_hermitian(small, big.basis[static_cast<std::size_t>(j)].topLeftCorner(c - 1, c - 1));
  }
  auto embed = [&](const CMatrix& m) {
    CMatrix e = CMatrix::Zero(c, c);
    e.topLeftCorner(c - 1, c - 1) = m;
    return e;
  };
  CMatrix last = CMatrix::Zero(c, c);
  last(c - 1, c - 1) = 1.0;
  const Effect omega_c = effect_from_operator(big, last);
  Rng rng(o.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double res = 0.0, effect_res = 0.0, transport_res = 0.0, face_res = 0.0;
  for (std::size_t s = 0; s < std::min<std::size_t>(o.samples, 100); ++s) {
    const CVector a = haar_state(c - 1, rng);
    const CMatrix rho_s = a * a.adjoint();
    const StateVector psi(coords_from_hermitian(big, embed(rho_s)));
    face_res = std::max(face_res, std::abs(evaluate_effect(omega_c, psi)));
    const Vector img = map * psi.coords();
    res = std::max(res, (img - coords_from_hermitian(small, rho_s)).cwiseAbs().maxCoeff());
    // Lift back through the block embedding.
    res = std::max(res, (coords_from_hermitian(big, embed(hermitian_image(small, img))) - psi.coords()).cwiseAbs().maxCoeff());
    // Effect 0 <= E <= I on the small system against E (+) 0 on the face.
    const CMatrix u = haar_unitary(c - 1, rng);
    Vector d(c - 1);
    for (Index k = 0; k < d.size(); ++k) d(k) = unif(rng);
    const CMatrix e_small = u * d.cast<Complex>().asDiagonal() * u.adjoint();
    const double v_small = evaluate_effect(effect_from_operator(small, e_small), StateVector(img));
    const double v_face = evaluate_effect(effect_from_operator(big, embed(e_small)), psi);
    effect_res = std::max(effect_res, std::abs(v_small - v_face));
    // Transformation U on the small system against U (+) 1 on the big one.
    const CMatrix us = haar_special_unitary(c - 1, rng);
    CMatrix ub = CMatrix::Identity(c, c);
    ub.topLeftCorner(c - 1, c - 1) = us;
    const Vector lhs = map * conjugation_map(big, ub).apply(psi.coords());
    const Vector rhs = conjugation_map(small, us).apply(img);
    transport_res = std::max(transport_res, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  const bool ok = std::max({res, effect_res, transport_res, face_res}) <= 1e-9;
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  r.detail = "face of the last projector is the " + std::to_string(c - 1) + "x" + std::to_string(c - 1) +
             " block, equivalent to quantum(" + std::to_string(c - 1) + ")";
  r.witness = {{"target", c - 1 == 1 ? std::string("single state") : "quantum:" + std::to_string(c - 1)},
               {"map_residual", res},
               {"effect_residual", effect_res},
               {"transformation_residual", transport_res},
               {"face_residual", face_res}};
  return r;
}

/// Binary measurements {e, u - e} from the declared effects that distinguish
/// two vertices, plus the measurement found by the discrimination LP.
inline std::vector<Measurement> complete_binary_measurements(const TheoryInstance& t, const AuditOptions& o) {
  const auto& v = t.sp().vertex_list()->vertices;
  std::vector<Measurement> out;
  const Vector unit = Effect::unit(t.sp().dim()).dual();
  for (const auto& e : t.effects) {
    bool has1 = false, has0 = false;
    for (const auto& x : v) {
      const double y = evaluate_effect(e, x);
      has1 = has1 || std::abs(y - 1.0) <= o.tol;
      has0 = has0 || std::abs(y) <= o.tol;
    }
    if (has1 && has0) out.push_back(Measurement({e, Effect(unit - e.dual())}));
  }
  const auto cert = capacity(t.sp(), 8, std::vector<StateVector>(v.begin(), v.begin() + std::min<std::size_t>(v.size(), 64)));
  if (cert.value >= 2) out.insert(out.begin(), cert.measurement);
  return out;
}

inline RequirementResult r3_polytope(const TheoryInstance& t, const AuditOptions& o) {
  RequirementResult r = make_result("r3", o);
  const auto& v = t.sp().vertex_list()->vertices;
  const auto cert = capacity(t.sp(), 8, std::vector<StateVector>(v.begin(), v.begin() + std::min<std::size_t>(v.size(), 64)));
  if (cert.value != 2) {
    r.verdict = Verdict::NotApplicable;
    r.detail = "no equivalence witness for capacity " + std::to_string(cert.value) + " faces of a non-simplex polytope";
    r.witness = {{"capacity", cert.value}};
    return r;
  }
  // Capacity two: the face must be equivalent to the one-state system.
  std::size_t checked = 0;
  for (const auto& m : complete_binary_measurements(t, o)) {
    ++checked;
    std::vector<StateVector> face;
    for (const auto& x : v) {
      if (std::abs(evaluate_effect(m.effects().back(), x)) <= o.tol) face.push_back(x);
    }
    if (face.size() != 1) {
      r.verdict = Verdict::Fail;
      r.detail = "face {Omega_2 = 0} of a complete measurement has " + std::to_string(face.size()) +
                 " vertices; the capacity-one system has a single state";
      r.witness = {{"measurement_last_effect", to_json(m.effects().back().dual())},
                   {"face_vertices", vertex_list_json(face)},
                   {"target_states", 1}};
      return r;
    }
  }
  r.verdict = Verdict::Pass;
  r.detail = "every tested complete measurement has a single-state face";
  r.witness = {{"measurements_checked", checked}};
  return r;
}

}  // namespace detail

/// Requirement 3 with the canonical witnesses: coordinate deletion for
/// simplices, block embedding for psd slices, the antipode for balls.
inline RequirementResult audit_r3(const TheoryInstance& t, const AuditOptions& o = {}) {
  const auto& s = t.sp();
  if (const auto* vl = s.vertex_list()) {
    if (is_simplex(vl->vertices)) return detail::r3_simplex(t, o);
    if (t.bipartite()) {
      RequirementResult r = audit_r3(*t.part_a, o);
      r.witness["audited_subsystem"] = t.part_a->name;
      return r;
    }
    return detail::r3_polytope(t, o);
  }
  if (s.psd()) return detail::r3_psd(t, o);
  RequirementResult r = detail::make_result("r3", o);
  if (s.ball()) {
    Rng rng(o.seed);
    const Vector nu = sphere_point(s.dim(), rng);
    const Effect omega(detail::ball_effect_dual(nu));
    const double at_antipode = evaluate_effect(omega, ball_from_bloch(-nu));
    // (1 + nu.b)/2 vanishes on the unit ball only at b = -nu.
    r.verdict = std::abs(at_antipode) <= o.tol ? Verdict::Pass : Verdict::Fail;
    r.detail = "face of a complete measurement is the single antipodal state";
    r.witness = {{"nu", to_json(nu)}, {"face_state", to_json(ball_from_bloch(-nu))}, {"target", "single state"}};
    return r;
  }
  if (t.bipartite()) {
    r = audit_r3(*t.part_a, o);
    r.witness["audited_subsystem"] = t.part_a->name;
    return r;
  }
  r.verdict = Verdict::NotApplicable;
  r.detail = "no equivalence witness for this representation";
  return r;
}

// --- R4 ------------------------------------------------------------------------

inline RequirementResult audit_r4(const TheoryInstance& t, const AuditOptions& o = {}) {
  RequirementResult r = detail::make_result("r4", o);
  const TransitivityReport tr = transitivity_audit(t, std::max<std::size_t>(o.samples, 1), o.seed, 1e-9);
  r.verdict = tr.pass ? Verdict::Pass : Verdict::Fail;
  r.detail = tr.pass ? "group acts transitively on pure states" : "pure states in different orbits";
  r.witness = {{"method", tr.method},
               {"pairs_checked", tr.pairs_checked},
               {"max_residual", tr.max_residual},
               {"continuous_part", tr.continuous_part}};
  if (t.group.finite()) {
    r.witness["group_order"] = t.group.elements.size();
    r.witness["orbit_size"] = tr.orbit_size;
    r.witness["pure_states"] = tr.pure_count;
  }
  if (tr.witness) {
    r.witness["state_1"] = to_json(tr.witness->first);
    r.witness["state_2"] = to_json(tr.witness->second);
  }
  return r;
}

/// Re-checks a transitivity witness: true when no group element maps state_1 to state_2.
inline bool transitivity_witness_holds(const TheoryInstance& t, const StateVector& a, const StateVector& b) {
  if (!t.group.finite()) throw DomainError("transitivity_witness_holds: finite groups only");
  for (const auto& g : t.group.elements) {
    if ((g.apply(a.coords()) - b.coords()).cwiseAbs().maxCoeff() <= 1e-9) return false;
  }
  return true;
}

// --- R5 and R5' ------------------------------------------------------------------

/// Effects generated by a declared list: convex combinations of the list, its
/// complements, 0 and the unit effect.
inline std::vector<Vector> generated_effects(const TheoryInstance& t) {
  const Vector unit = Effect::unit(t.sp().dim()).dual();
  std::vector<Vector> g{Vector::Zero(unit.size()), unit};
  for (const auto& e : t.effects) {
    g.push_back(e.dual());
    g.push_back(unit - e.dual());
  }
  return g;
}

inline RequirementResult audit_r5(const TheoryInstance& t, const AuditOptions& o = {}) {
  RequirementResult r = detail::make_result("r5", o);
  const TheoryInstance g = gbit_of(t);
  const auto& s = g.sp();
  r.witness["gbit"] = g.name;
  if (const auto* vl = s.vertex_list()) {
    const auto full = polytope::effect_polytope_vertices(vl->vertices);
    r.witness["effect_polytope_vertices"] = full.size();
    if (g.effect_policy == EffectPolicy::AllEffects) {
      r.verdict = Verdict::Pass;
      r.detail = "all effects allowed";
      return r;
    }
    const auto gen = generated_effects(g);
    for (const auto& w : full) {
      if (!polytope::in_hull(gen, w, o.tol)) {
        r.verdict = Verdict::Fail;
        r.detail = "an effect of the gbit is not generated by the declared effects";
        r.witness["missing_effect"] = to_json(w);
        return r;
      }
    }
    r.verdict = Verdict::Pass;
    r.detail = "declared effects generate the full effect polytope";
    return r;
  }
  if (g.effect_policy != EffectPolicy::AllEffects) {
    r.verdict = Verdict::NotApplicable;
    r.detail = "restricted effect sets are only compared on polytopes";
    return r;
  }
  // Closed-form effect sets: check the extreme family on sampled states.
  Rng rng(o.seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < std::min<std::size_t>(o.samples, 200); ++k) {
    const StateVector phi = sample_pure(s, rng);
    const auto te = find_tight_effect(s, phi, o.tol);
    if (!te) {
      worst = 1.0;
      break;
    }
    for (int j = 0; j < 5; ++j) {
      const double x = evaluate_effect(te->effect, sample_pure(s, rng));
      worst = std::max(worst, std::max(-x, x - 1.0));
    }
  }
  r.verdict = worst <= o.tol ? Verdict::Pass : Verdict::Fail;
  r.detail = s.ball() ? "all effects allowed; extreme effects (1 + nu.psi_hat)/2 stay in [0, 1]"
                      : "all effects 0 <= E <= I allowed";
  r.witness["max_bound_violation"] = worst;
  return r;
}

namespace detail {

inline std::vector<StateVector> r5prime_samples(const StateSpaceDescriptor& s, std::size_t n, Rng& rng) {
  std::vector<StateVector> out;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (const auto* vl = s.vertex_list()) {
    const auto& v = vl->vertices;
    out = v;
    for (std::size_t i = 0; i < v.size() && out.size() < n; ++i) {
      for (std::size_t j = i + 1; j < v.size() && out.size() < n; ++j) out.push_back(mix(v[i], v[j], unif(rng)));
    }
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const StateVector a = sample_pure(s, rng);
    out.push_back(k % 2 == 0 ? a : mix(a, sample_pure(s, rng), unif(rng)));
  }
  return out;
}

}  // namespace detail

/// Every state that is not completely mixed has a tight effect and a partner
/// state it is perfectly distinguishable from.
inline RequirementResult audit_r5prime(const TheoryInstance& t, const AuditOptions& o = {}) {
  RequirementResult r = detail::make_result("r5prime", o);
  const TheoryInstance& target = t.sp().product_hull() ? *t.part_a : t;
  const auto& s = target.sp();
  Rng rng(o.seed);
  const auto states = detail::r5prime_samples(s, std::max<std::size_t>(o.samples, 1), rng);
  const auto probes = pure_states(s, 50, rng);
  std::size_t tested = 0, interior = 0;
  double worst = 0.0;
  for (const auto& psi : states) {
    if (is_completely_mixed(s, psi, 1e-7)) {
      ++interior;
      continue;
    }
    ++tested;
    const auto te = find_tight_effect(s, psi, 1e-7);
    if (!te) {
      r.verdict = Verdict::Fail;
      r.detail = "boundary state without a tight effect";
      r.witness = {{"state", to_json(psi)}};
      return r;
    }
    double err = std::max(std::abs(evaluate_effect(te->effect, psi) - 1.0), std::abs(evaluate_effect(te->effect, te->partner)));
    if (!is_member(s, te->partner, 1e-7)) err = std::max(err, 1.0);
    for (const auto& p : probes) {
      const double x = evaluate_effect(te->effect, p);
      err = std::max(err, std::max(-x, x - 1.0));
    }
    worst = std::max(worst, err);
  }
  r.witness = {{"audited", target.name}, {"states_tested", tested}, {"completely_mixed_skipped", interior},
               {"max_residual", worst}};
  if (tested == 0) {
    r.verdict = Verdict::NotApplicable;
    r.detail = "no boundary states sampled";
  } else if (worst <= 1e-7) {
    r.verdict = Verdict::Pass;
    r.detail = "each boundary state has a tight effect and a distinguishable partner";
  } else {
    r.verdict = Verdict::Fail;
    r.detail = "tight effect or partner check failed";
  }
  return r;
}

// --- driver --------------------------------------------------------------------------

inline RequirementResult audit_requirement(const std::string& id, const TheoryInstance& t, const AuditOptions& o) {
  if (id == "1") return audit_r1(t, o);
  if (id == "2") return audit_r2(t, o);
  if (id == "3") return audit_r3(t, o);
  if (id == "4") return audit_r4(t, o);
  if (id == "5") return audit_r5(t, o);
  if (id == "5p") return audit_r5prime(t, o);
  throw DomainError("unknown requirement '" + id + "'");
}

inline AuditReport run_audit(const TheoryInstance& t, const std::vector<std::string>& ids, const AuditOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  AuditReport rep;
  rep.instance = t.name;
  rep.seed = o.seed;
  rep.tol = o.tol;
  rep.samples = o.samples;
  for (const auto& id : ids) rep.requirements.push_back(audit_requirement(id, t, o));
  rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// 0 when every verdict is PASS, 2 on any FAIL, otherwise 3.
inline int exit_code(const AuditReport& r) {
  bool fail = false, other = false;
  for (const auto& q : r.requirements) {
    fail = fail || q.verdict == Verdict::Fail;
    other = other || q.verdict == Verdict::Ambiguous || q.verdict == Verdict::NotApplicable;
  }
  for (const auto& th : r.theorems) fail = fail || !th.pass;
  return fail ? 2 : (other ? 3 : 0);
}

// --- theorem battery -------------------------------------------------------------

inline TheoremCheck check_abs(std::string name, double expected, double observed, double tolerance) {
  return {std::move(name), expected, observed, tolerance, "abs", std::abs(observed - expected) <= tolerance};
}

inline TheoremCheck check_ge(std::string name, double bound, double observed) {
  return {std::move(name), bound, observed, 0.0, "ge", observed >= bound};
}

inline TheoremCheck check_le(std::string name, double bound, double observed) {
  return {std::move(name), bound, observed, 0.0, "le", observed <= bound};
}

/// Pure equator states psi(u, v) moved by random local rotations.
inline std::vector<TwoGbitBloch> equator_orbit_samples(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> uu(0.0, std::numbers::pi), vv(0.0, 2.0 * std::numbers::pi);
  std::vector<TwoGbitBloch> out;
  for (std::size_t k = 0; k < n; ++k) {
    const TwoGbitBloch b = equator_state(uu(rng), vv(rng));
    out.push_back(k % 2 == 0 ? b : local_action(haar_rotation(3, rng), haar_rotation(3, rng), b));
  }
  return out;
}

inline std::vector<StateVector> capacity_candidates(const StateSpaceDescriptor& s, Rng& rng, std::size_t extra = 20) {
  if (const auto* vl = s.vertex_list()) {
    return std::vector<StateVector>(vl->vertices.begin(), vl->vertices.begin() + std::min<std::size_t>(vl->vertices.size(), 64));
  }
  std::vector<StateVector> out;
  if (s.ball()) {
    Vector e = Vector::Zero(s.dim());
    e(0) = 1.0;
    out.push_back(ball_from_bloch(e));
    out.push_back(ball_from_bloch(-e));
  } else if (const auto* p = s.psd()) {
    for (int k = 0; k < p->c; ++k) {
      CMatrix proj = CMatrix::Zero(p->c, p->c);
      proj(k, k) = 1.0;
      out.push_back(StateVector(coords_from_hermitian(*p, proj)));
    }
  }
  for (std::size_t k = 0; k < extra && out.size() < 64; ++k) out.push_back(sample_pure(s, rng));
  return out;
}

/// Fixed battery of numeric reproductions. `grid` selects the orbit-rank d2 values.
inline std::vector<TheoremCheck> run_theorem_suite(std::uint64_t seed, const std::vector<int>& grid = {3, 5, 7}) {
  std::vector<TheoremCheck> out;
  Rng rng(seed);
  // Capacity multiplicativity.
  {
    const TheoryInstance c23 = compose(classical(2), classical(3));
    const auto cert = capacity(c23.sp(), 8, capacity_candidates(c23.sp(), rng));
    out.push_back(check_abs("capacity.classical2xclassical3", 6, cert.value, 0));
    const TheoryInstance q22 = compose(quantum(2), quantum(2));
    const auto qc = capacity(q22.sp(), 8, capacity_candidates(q22.sp(), rng));
    out.push_back(check_abs("capacity.quantum2xquantum2", 4, qc.value, 0));
  }
  // Dimension law d_c = c^r - 1.
  for (int c = 1; c <= 5; ++c) {
    out.push_back(check_abs("dimension.classical" + std::to_string(c), c - 1, static_cast<double>(classical(c).sp().dim()), 0));
  }
  for (int c = 2; c <= 4; ++c) {
    out.push_back(check_abs("dimension.quantum" + std::to_string(c), c * c - 1, static_cast<double>(quantum(c).sp().dim()), 0));
  }
  // Pure two-gbit norm.
  {
    double worst = 0.0;
    for (const auto& b : equator_orbit_samples(1000, rng)) worst = std::max(worst, std::abs(b.squared_norm() - 3.0));
    out.push_back(check_abs("bloch.pure_norm_max_deviation", 0.0, worst, 1e-9));
  }
  // Hermitian isometry and SU(2) -> SO(3).
  {
    double worst = 0.0;
    const SpacePtr q4 = make_composite(quantum_space(2), quantum_space(2), CompositeRule::Quantum).joint;
    for (int k = 0; k < 1000; ++k) {
      const StateVector a = k % 3 == 0 ? StateVector(from_two_gbit_bloch(equator_orbit_samples(1, rng).front()))
                                       : sample_pure(*q4, rng);
      const StateVector b = mix(sample_pure(*q4, rng), sample_pure(*q4, rng), 0.5);
      const IsometryResult ir = isometry_check(a, b);
      worst = std::max(worst, std::abs(ir.lhs - ir.rhs));
    }
    out.push_back(check_abs("hermitian.isometry_max_deviation", 0.0, worst, 1e-12));
    double hom = 0.0, orth = 0.0, det = 0.0;
    for (int k = 0; k < 100; ++k) {
      const CMatrix u = haar_special_unitary(2, rng);
      const CMatrix v = haar_special_unitary(2, rng);
      const Matrix gu = su2_to_so3(u);
      hom = std::max(hom, (su2_to_so3(u * v) - gu * su2_to_so3(v)).cwiseAbs().maxCoeff());
      orth = std::max(orth, orthogonality_residual(gu));
      det = std::max(det, std::abs(gu.determinant() - 1.0));
    }
    out.push_back(check_abs("hermitian.su2_so3_homomorphism", 0.0, hom, 1e-12));
    out.push_back(check_abs("hermitian.su2_so3_orthogonality", 0.0, orth, 1e-12));
    out.push_back(check_abs("hermitian.su2_so3_determinant", 0.0, det, 1e-12));
  }
  // Orbit-span ranks.
  for (int d2 : grid) {
    const std::string p = "orbit_rank.d2=" + std::to_string(d2);
    const std::size_t n = static_cast<std::size_t>((d2 - 1) * (d2 - 1) + 24);
    auto add = [&](const std::string& name, SeedClass cls, double expected) {
      const OrbitSpanReport r = orbit_span_rank(d2, cls, n, seed + static_cast<std::uint64_t>(d2));
      out.push_back(check_abs(p + "." + name, expected, r.ambiguous ? -1.0 : static_cast<double>(r.rank), 0));
      out.push_back(check_ge(p + "." + name + ".gap_ratio", 1e3, r.gap_ratio));
    };
    if (d2 == 3) {
      add("rotation", SeedClass::RotationLike, 2);
      add("reflection", SeedClass::ReflectionLike, 2);
    } else {
      add("generic", SeedClass::Generic, (d2 - 1) * (d2 - 1));
    }
    add("vector", SeedClass::Vector, d2 - 1);
  }
  if (std::find(grid.begin(), grid.end(), 7) != grid.end()) {
    const Su3Report s = su3_block_orbit_rank(60, seed);
    out.push_back(check_abs("su3.orthogonality", 0.0, s.orthogonality_residual, 1e-12));
    out.push_back(check_abs("su3.homomorphism", 0.0, s.homomorphism_residual, 1e-12));
    out.push_back(check_ge("su3.subgroup_min_invariant_dim", 9, static_cast<double>(s.subgroup_min_dim)));
    out.push_back(check_ge("su3.group_min_invariant_dim", 9, static_cast<double>(s.group_min_dim)));
  }
  // Pseudo-gates on the quantum composite of two gbits.
  {
    const CompositeSpace cs = make_composite(quantum_space(2), quantum_space(2), CompositeRule::Quantum);
    const Vector nu = sphere_point(3, rng);
    const PseudoGateReport pg = verify_pseudo_gates(cs, ball_from_bloch(nu), ball_from_bloch(-nu));
    out.push_back(check_abs("pseudo_gates.swap", 0.0, pg.swap_residual, 1e-12));
    out.push_back(check_abs("pseudo_gates.cnot", 0.0, pg.cnot_residual, 1e-12));
    out.push_back(check_abs("pseudo_gates.fix_mu", 0.0, pg.mu_residual, 1e-12));
  }
  // Partial transposition maps the symmetric equator to the antisymmetric branch.
  {
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
      const double v = 2.0 * std::numbers::pi * k / 16.0;
      TwoGbitBloch t = partial_transpose_equivalence(equator_state(std::numbers::pi / 2.0, v));
      worst = std::max(worst, (t.flatten() - antisymmetric_equator_state(v).flatten()).cwiseAbs().maxCoeff());
    }
    out.push_back(check_abs("partial_transpose.equator", 0.0, worst, 1e-12));
  }
  // Maximally mixed state and orthogonalization.
  {
    const MaximallyMixedResult mm = maximally_mixed(ball_gbit(3), 4000, seed);
    out.push_back(check_abs("maximally_mixed.ball3_bloch_norm", 0.0, ball_to_bloch(mm.state.coords()).norm(), 0.0));
    out.push_back(check_le("maximally_mixed.ball3_mc_z", 3.0, mm.max_z));
    std::vector<Matrix> group;
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = 2.0;
    for (int k = 0; k < 64; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 64.0;
      Matrix rot(2, 2);
      rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
      group.push_back(m * rot * m.inverse());
    }
    out.push_back(check_le("orthogonalize.max_residual", 1e-9, orthogonalize(group).max_residual));
  }
  // CHSH ladder.
  {
    const Vector w = chsh_functional();
    const auto sq = square_vertices();
    std::vector<StateVector> local;
    for (const auto& a : sq) {
      for (const auto& b : sq) local.push_back(product_state(a, b));
    }
    out.push_back(check_abs("chsh.classical", 2.0, lp_max_over_hull(w, local), 1e-9));
    out.push_back(check_abs("chsh.boxworld", 4.0, lp_max_over_max_tensor(w, sq, sq), 1e-9));
    const EquatorChsh q = chsh_equator_max(64, seed);
    out.push_back(check_abs("chsh.quantum", 2.0 * std::numbers::sqrt2, q.value, 1e-6));
  }
  return out;
}

}  // namespace gptkit
