// LP solver, vertex enumeration, core types and composites.

#include <gptkit/gptkit.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace gptkit;
using Catch::Matchers::WithinAbs;

namespace {

// Brute-force 2D oracle: best objective over pairwise intersections of
// constraint lines (including x >= 0, y >= 0) that satisfy every constraint.
double brute_force_2d(const Matrix& a, const Vector& b, const Vector& c) {
  Matrix all(a.rows() + 2, 2);
  Vector rhs(a.rows() + 2);
  all.topRows(a.rows()) = a;
  rhs.head(a.rows()) = b;
  all.row(a.rows()) << -1, 0;
  all.row(a.rows() + 1) << 0, -1;
  rhs(a.rows()) = 0;
  rhs(a.rows() + 1) = 0;
  double best = -1e300;
  for (Index i = 0; i < all.rows(); ++i) {
    for (Index j = i + 1; j < all.rows(); ++j) {
      Matrix m(2, 2);
      m.row(0) = all.row(i);
      m.row(1) = all.row(j);
      if (std::abs(m.determinant()) < 1e-12) continue;
      Vector r(2);
      r << rhs(i), rhs(j);
      const Vector x = m.inverse() * r;
      if (((all * x - rhs).array() <= 1e-9).all()) best = std::max(best, c.dot(x));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("lp: textbook maximum", "[lp]") {
  lp::LPProblem p(2);
  p.objective << 1, 1;
  p.add((Vector(2) << 1, 2).finished(), lp::Relation::LessEqual, 4);
  p.add((Vector(2) << 3, 1).finished(), lp::Relation::LessEqual, 6);
  const auto r = lp::solve(p);
  REQUIRE(r.optimal());
  // Intersection of the two lines: x = 8/5, y = 6/5.
  CHECK_THAT(*r.value, WithinAbs(2.8, 1e-12));
  CHECK_THAT((*r.point)(0), WithinAbs(1.6, 1e-12));
  CHECK(r.residual < 1e-12);
}

TEST_CASE("lp: random 2D problems match brute force", "[lp]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int k = 0; k < 200; ++k) {
    Matrix a(4, 2);
    Vector b(4), c(2);
    for (Index i = 0; i < 4; ++i) {
      a(i, 0) = u(rng);
      a(i, 1) = u(rng);
      b(i) = u(rng);
    }
    c << u(rng) - 0.5, u(rng);
    lp::LPProblem p(2);
    p.objective = c;
    for (Index i = 0; i < 4; ++i) p.add(a.row(i).transpose(), lp::Relation::LessEqual, b(i));
    const auto r = lp::solve(p);
    REQUIRE(r.optimal());
    CHECK_THAT(*r.value, WithinAbs(brute_force_2d(a, b, c), 1e-9));
  }
}

TEST_CASE("lp: infeasible and unbounded problems", "[lp]") {
  Vector one(1);
  one << 1;
  lp::LPProblem inf(1);
  inf.add(one, lp::Relation::GreaterEqual, 2);
  inf.add(one, lp::Relation::LessEqual, 1);
  CHECK(lp::solve(inf).status == lp::Status::Infeasible);

  lp::LPProblem unb(1);
  unb.objective << 1;
  CHECK(lp::solve(unb).status == lp::Status::Unbounded);
}

TEST_CASE("lp: free variable reaches the bound", "[lp]") {
  lp::LPProblem p(2, lp::Sense::Minimize);
  p.objective << 1, 1;
  p.set_free(0);
  p.add((Vector(2) << 1, -1).finished(), lp::Relation::Equal, -3);
  p.add((Vector(2) << 1, 0).finished(), lp::Relation::GreaterEqual, -5);
  const auto r = lp::solve(p);
  REQUIRE(r.optimal());
  // y = x + 3 >= 0, objective 2x + 3 minimized at x = -3.
  CHECK_THAT((*r.point)(0), WithinAbs(-3.0, 1e-12));
  CHECK_THAT(*r.value, WithinAbs(-3.0, 1e-12));
}

TEST_CASE("polytope: vertices of the unit cube", "[polytope]") {
  Matrix a(6, 3);
  a << Matrix::Identity(3, 3), -Matrix::Identity(3, 3);
  Vector b(6);
  b << 1, 1, 1, 0, 0, 0;
  const auto v = polytope::enumerate_vertices(a, b);
  REQUIRE(v.size() == 8);
  for (const auto& x : v) {
    for (Index i = 0; i < 3; ++i) CHECK((x(i) == 0.0 || x(i) == 1.0));
  }
}

TEST_CASE("polytope: hull membership and extreme points", "[polytope]") {
  std::vector<Vector> pts;
  for (double x : {0.0, 1.0}) {
    for (double y : {0.0, 1.0}) pts.push_back((Vector(2) << x, y).finished());
  }
  pts.push_back((Vector(2) << 0.5, 0.5).finished());
  CHECK(polytope::in_hull(pts, (Vector(2) << 0.2, 0.9).finished()));
  CHECK_FALSE(polytope::in_hull(pts, (Vector(2) << 1.2, 0.5).finished()));
  CHECK(polytope::is_extreme(pts, 0));
  CHECK_FALSE(polytope::is_extreme(pts, 4));
}

TEST_CASE("polytope: effect polytope of a segment has four vertices", "[polytope]") {
  // Effects on a classical bit: w = (w0, w1) with 0 <= w0 <= 1 and 0 <= w0 + w1 <= 1.
  const auto e = polytope::effect_polytope_vertices(simplex_vertices(2));
  CHECK(e.size() == 4);
  // Square: 0, 1 and the four local outcome effects.
  CHECK(polytope::effect_polytope_vertices(square_vertices()).size() == 6);
}

TEST_CASE("core: state vectors, effects and measurements", "[core]") {
  const StateVector p = StateVector::from_fiducials((Vector(2) << 0.3, 0.6).finished());
  CHECK(p[0] == 1.0);
  const Effect e = Effect::fiducial(2, 1);
  CHECK_THAT(evaluate_effect(e, p), WithinAbs(0.3, 1e-15));
  CHECK_THAT(evaluate_effect(e.complement(), p), WithinAbs(0.7, 1e-15));
  CHECK_THAT(evaluate_effect(Effect::unit(2), p), WithinAbs(1.0, 1e-15));
  const Measurement m({e, e.complement()});
  CHECK(m.unit_deviation() < 1e-15);
  CHECK_THROWS_AS(Measurement({e, e}), DomainError);
  CHECK_THROWS_AS(mix(p, p, 1.5), DomainError);
}

TEST_CASE("core: membership for each representation", "[core]") {
  const auto sq = boxworld_gbit();
  CHECK(is_member(sq.sp(), StateVector::from_fiducials((Vector(2) << 0.1, 0.9).finished())));
  CHECK_FALSE(is_member(sq.sp(), StateVector::from_fiducials((Vector(2) << 1.1, 0.5).finished())));
  const auto ball = ball_gbit(3);
  CHECK(is_member(ball.sp(), ball_from_bloch((Vector(3) << 0.6, 0.0, 0.8).finished())));
  CHECK_FALSE(is_member(ball.sp(), ball_from_bloch((Vector(3) << 0.6, 0.1, 0.8).finished())));
  const auto q = quantum(2);
  Rng rng(3);
  CHECK(is_member(q.sp(), sample_pure(q.sp(), rng)));
}

TEST_CASE("core: group closure sizes", "[core]") {
  CHECK(classical(4).group.elements.size() == 24);
  CHECK(boxworld_gbit().group.elements.size() == 8);
  CHECK_THROWS_AS(close_group(classical(5).group.generators, 10), DomainError);
}

TEST_CASE("composite: dimension law and reductions", "[composite]") {
  CHECK(local_tomography_dim_check(3, 3, 15));
  CHECK_FALSE(local_tomography_dim_check(3, 3, 16));
  Rng rng(5);
  const auto q = quantum(2);
  const StateVector a = sample_pure(q.sp(), rng);
  const StateVector b = sample_pure(q.sp(), rng);
  const StateVector ab = product_state(a, b);
  CHECK((reduce(ab, Side::A, 4).coords() - a.coords()).norm() < 1e-14);
  CHECK((reduce(ab, Side::B, 4).coords() - b.coords()).norm() < 1e-14);
  CHECK((reduce_by_contraction(ab, Side::A, 4).coords() - a.coords()).norm() < 1e-14);
  // Joint probabilities of product states factorize.
  const Effect e = Effect::fiducial(3, 2);
  CHECK_THAT(joint_probability(e, e, ab), WithinAbs(evaluate_effect(e, a) * evaluate_effect(e, b), 1e-14));
}

TEST_CASE("composite: no-signaling polytope of two squares", "[composite]") {
  const auto sq = square_vertices();
  const auto v = max_tensor_vertices(sq, sq);
  // 16 local deterministic boxes plus 8 PR boxes.
  REQUIRE(v.size() == 24);
  const Vector w = chsh_functional();
  int local = 0, nonlocal = 0;
  for (const auto& x : v) {
    const auto t = correlations_of(x, 2, 2);
    CHECK(check_no_signaling(t).ok);
    bool deterministic = true;
    for (Index i = 1; i < x.size(); ++i) deterministic = deterministic && (x[i] == 0.0 || x[i] == 1.0);
    deterministic ? ++local : ++nonlocal;
  }
  CHECK(local == 16);
  CHECK(nonlocal == 8);
  double best = 0;
  for (const auto& x : v) best = std::max(best, w.dot(x.coords()));
  CHECK_THAT(best, WithinAbs(4.0, 1e-12));
}
