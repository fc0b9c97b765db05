// Catalog instances, discrimination and capacity, group machinery.

#include <gptkit/gptkit.hpp>

#include <catch_amalgamated.hpp>

#include <numbers>
#include <set>

using namespace gptkit;
using Catch::Matchers::WithinAbs;

TEST_CASE("instances: dimensions follow c^r - 1", "[instances]") {
  for (int c = 1; c <= 5; ++c) CHECK(classical(c).sp().dim() == c - 1);
  for (int c = 2; c <= 4; ++c) CHECK(quantum(c).sp().dim() == c * c - 1);
  CHECK(ball_gbit(7).sp().dim() == 7);
  CHECK(boxworld_gbit().sp().dim() == 2);
  CHECK(boxworld_pair().sp().dim() == 8);
}

TEST_CASE("instances: catalog names and bad parameters", "[instances]") {
  CHECK(make_instance("quantum:3").name == "quantum:3");
  CHECK(make_instance("boxworld-pair").sp().vertex_list()->vertices.size() == 24);
  CHECK_THROWS_AS(make_instance("quantum:9"), DomainError);
  CHECK_THROWS_AS(make_instance("classical:x"), DomainError);
  CHECK_THROWS_AS(make_instance("classical"), DomainError);
  CHECK_THROWS_AS(make_instance("boxworld:2"), DomainError);
  CHECK_THROWS_AS(make_instance("torus:2"), DomainError);
}

TEST_CASE("instances: boxworld pair symmetry group", "[instances]") {
  const auto t = boxworld_pair();
  // (8 x 8 local relabelings) x swap.
  CHECK(t.group.elements.size() == 128);
  for (const auto& g : t.group.generators) {
    for (const auto& v : t.sp().vertex_list()->vertices) CHECK(is_member(t.sp(), StateVector(g.apply(v.coords()))));
  }
}

TEST_CASE("instances: classical embedding is diagonal", "[instances]") {
  const StateVector p = StateVector::from_fiducials((Vector(2) << 0.2, 0.5).finished());
  const StateVector q = embed_classical(3, p);
  const CMatrix rho = hermitian_of(quantum(3).sp(), q);
  CHECK_THAT(rho(0, 0).real(), WithinAbs(0.2, 1e-14));
  CHECK_THAT(rho(1, 1).real(), WithinAbs(0.5, 1e-14));
  CHECK_THAT(rho(2, 2).real(), WithinAbs(0.3, 1e-14));
  CHECK(std::abs(rho(0, 1)) < 1e-14);
}

TEST_CASE("discrimination: capacities of built-ins", "[discrimination]") {
  Rng rng(1);
  CHECK(capacity(classical(4).sp(), 8, capacity_candidates(classical(4).sp(), rng)).value == 4);
  CHECK(capacity(boxworld_gbit().sp(), 8, capacity_candidates(boxworld_gbit().sp(), rng)).value == 2);
  const auto b5 = capacity(ball_gbit(5).sp(), 8, capacity_candidates(ball_gbit(5).sp(), rng));
  CHECK(b5.value == 2);
  CHECK(certificate_residual(b5) < 1e-9);
  const auto q3 = capacity(quantum(3).sp(), 8, capacity_candidates(quantum(3).sp(), rng));
  CHECK(q3.value == 3);
  CHECK(certificate_residual(q3) < 1e-9);
}

TEST_CASE("discrimination: ball states beyond two are not distinguishable", "[discrimination]") {
  // Three Bloch vectors 120 degrees apart in a plane.
  std::vector<StateVector> s;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    s.push_back(ball_from_bloch((Vector(3) << std::cos(a), std::sin(a), 0.0).finished()));
  }
  CHECK_FALSE(find_distinguishing_measurement(s, ball_gbit(3).sp()).has_value());
  CHECK(ball_relaxation_infeasible(s, 3, 200, 4));
  // Antipodal pair is distinguishable.
  const Vector n = (Vector(3) << 0.0, 0.6, 0.8).finished();
  CHECK(find_distinguishing_measurement({ball_from_bloch(n), ball_from_bloch(-n)}, ball_gbit(3).sp()).has_value());
}

TEST_CASE("discrimination: tight effects and interior", "[discrimination]") {
  const auto sq = boxworld_gbit();
  const StateVector edge = StateVector::from_fiducials((Vector(2) << 1.0, 0.4).finished());
  const auto te = find_tight_effect(sq.sp(), edge);
  REQUIRE(te.has_value());
  CHECK_THAT(evaluate_effect(te->effect, edge), WithinAbs(1.0, 1e-9));
  CHECK_THAT(evaluate_effect(te->effect, te->partner), WithinAbs(0.0, 1e-9));
  for (const auto& v : sq.sp().vertex_list()->vertices) CHECK(evaluate_effect(te->effect, v) > -1e-9);
  const StateVector centre = StateVector::from_fiducials((Vector(2) << 0.5, 0.5).finished());
  CHECK(is_completely_mixed(sq.sp(), centre));
  CHECK_FALSE(find_tight_effect(sq.sp(), centre).has_value());
  CHECK_FALSE(is_completely_mixed(sq.sp(), edge));
}

TEST_CASE("groups: Haar samplers produce orthogonal and unitary matrices", "[groups]") {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const Matrix o = haar_orthogonal(5, rng);
    CHECK(orthogonality_residual(o) < 1e-12);
    CHECK_THAT(haar_rotation(4, rng).determinant(), WithinAbs(1.0, 1e-12));
    CHECK(unitarity_residual(haar_unitary(3, rng)) < 1e-12);
    CHECK(std::abs(haar_special_unitary(3, rng).determinant() - Complex(1.0, 0.0)) < 1e-12);
  }
}

TEST_CASE("groups: maximally mixed states", "[groups]") {
  const auto c3 = maximally_mixed(classical(3), 0, 1);
  CHECK(c3.exact);
  CHECK_THAT(c3.state[1], WithinAbs(1.0 / 3.0, 1e-14));
  CHECK_THAT(c3.state[2], WithinAbs(1.0 / 3.0, 1e-14));
  const auto sq = maximally_mixed(boxworld_gbit(), 0, 1);
  CHECK_THAT(sq.state[1], WithinAbs(0.5, 1e-14));
  const auto b3 = maximally_mixed(ball_gbit(3), 2000, 9);
  CHECK(ball_to_bloch(b3.state.coords()).norm() == 0.0);
  CHECK(b3.max_z < 3.0);
  // Only the centre is invariant among these candidates.
  const auto rep = verify_unique_invariant(ball_gbit(3), {ball_center(3), ball_from_bloch(Vector::Unit(3, 0))}, 2);
  CHECK(rep.unique);
  CHECK(rep.invariant_indices == std::vector<std::size_t>{0});
}

TEST_CASE("groups: orthogonalization of a conjugated rotation group", "[groups]") {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = 3.0;
  std::vector<Matrix> g;
  for (int k = 0; k < 12; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 12.0;
    Matrix r(2, 2);
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    g.push_back(m * r * m.inverse());
  }
  CHECK(orthogonality_residual(g[1]) > 0.1);
  const auto res = orthogonalize(g);
  CHECK(res.max_residual < 1e-9);
  for (const auto& x : g) CHECK(orthogonality_residual(res.S * x * res.S.inverse()) < 1e-9);
}

TEST_CASE("groups: transitivity per instance", "[groups]") {
  CHECK(transitivity_audit(classical(4), 10, 1, 1e-9).pass);
  CHECK(transitivity_audit(ball_gbit(4), 30, 1, 1e-9).pass);
  CHECK(transitivity_audit(quantum(3), 30, 1, 1e-9).pass);
  CHECK(transitivity_audit(boxworld_gbit(), 10, 1, 1e-9).pass);
  const auto t = boxworld_pair();
  const auto r = transitivity_audit(t, 10, 1, 1e-9);
  REQUIRE_FALSE(r.pass);
  CHECK(r.orbit_size == 16);
  REQUIRE(r.witness.has_value());
  // The witness re-verifies by brute force over all 128 elements.
  CHECK(transitivity_witness_holds(t, r.witness->first, r.witness->second));
  // Orbit of the first witness state, computed independently.
  std::set<std::vector<long long>> orbit;
  for (const auto& g : t.group.elements) orbit.insert(detail::matrix_key(g.apply(r.witness->first.coords())));
  CHECK(orbit.size() == 16);
  CHECK(orbit.count(detail::matrix_key(r.witness->second.coords())) == 0);
}

TEST_CASE("groups: orbit-span ranks", "[groups]") {
  CHECK(orbit_span_rank(3, SeedClass::RotationLike, 40, 1).rank == 2);
  CHECK(orbit_span_rank(3, SeedClass::ReflectionLike, 40, 1).rank == 2);
  CHECK(orbit_span_rank(5, SeedClass::Generic, 60, 1).rank == 16);
  CHECK(orbit_span_rank(5, SeedClass::Vector, 60, 1).rank == 4);
  CHECK_THROWS_AS(orbit_span_rank(4, SeedClass::Generic, 60, 1), DomainError);
  CHECK_THROWS_AS(orbit_span_rank(5, SeedClass::Generic, 10, 1), DomainError);
}

TEST_CASE("groups: SU(3) block representation", "[groups]") {
  Rng rng(4);
  const CMatrix u = haar_special_unitary(3, rng);
  const CMatrix v = haar_special_unitary(3, rng);
  CHECK(orthogonality_residual(su3_real_rep(u)) < 1e-12);
  CHECK((su3_real_rep(u * v) - su3_real_rep(u) * su3_real_rep(v)).cwiseAbs().maxCoeff() < 1e-12);
  const auto s = su3_block_orbit_rank(60, 2);
  CHECK(s.generic.rank == 36);
  CHECK(s.subgroup_min_dim >= 9);
  CHECK(s.group_min_dim >= 9);
}

TEST_CASE("groups: pseudo-gates on two qubits", "[groups]") {
  const CompositeSpace cs = make_composite(quantum_space(2), quantum_space(2), CompositeRule::Quantum);
  const Vector z = Vector::Unit(3, 2);
  const auto rep = verify_pseudo_gates(cs, ball_from_bloch(z), ball_from_bloch(-z));
  CHECK(rep.pass);
  CHECK(rep.swap_residual < 1e-12);
  CHECK(rep.cnot_residual < 1e-12);
  CHECK(rep.mu_residual < 1e-12);
  // Non-orthogonal inputs cannot define the gates.
  CHECK_THROWS(pseudo_gate_maps(cs, ball_from_bloch(z), ball_from_bloch(Vector::Unit(3, 0))));
}
