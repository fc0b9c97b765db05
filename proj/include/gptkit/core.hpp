#pragma once

// Shared domain types: states in the redundant-coordinate representation,
// effects, measurements, linear maps, state spaces and theory instances.

#include <gptkit/linalg.hpp>
#include <gptkit/lp.hpp>
#include <gptkit/types.hpp>

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gptkit {

/// A normalized state (1, p(x_1), ..., p(x_d)). The leading component is
/// exactly 1; construction rejects vectors off by more than `tol::identity`.
class StateVector {
 public:
  StateVector() : coords_(Vector::Ones(1)) {}
  explicit StateVector(Vector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1) throw DimensionError("StateVector: empty coordinate vector");
    if (!(std::abs(coords_(0) - 1.0) <= tol::identity)) {
      throw DomainError("StateVector: leading coordinate must be 1, got " + std::to_string(coords_(0)));
    }
    coords_(0) = 1.0;
  }

  static StateVector from_fiducials(const Vector& p) {
    Vector c(p.size() + 1);
    c(0) = 1.0;
    c.tail(p.size()) = p;
    return StateVector(std::move(c));
  }

  const Vector& coords() const { return coords_; }
  Index dim() const { return coords_.size() - 1; }
  Index size() const { return coords_.size(); }
  double operator[](Index i) const { return coords_(i); }

  friend bool operator==(const StateVector& a, const StateVector& b) { return a.coords_ == b.coords_; }

 private:
  Vector coords_;
};

/// Linear functional on R^{d+1}; an effect when it takes values in [0,1] on
/// the associated state space.
class Effect {
 public:
  Effect() = default;
  explicit Effect(Vector dual) : dual_(std::move(dual)) {}

  static Effect unit(Index d) {
    Vector u = Vector::Zero(d + 1);
    u(0) = 1.0;
    return Effect(std::move(u));
  }
  /// The effect reading fiducial outcome `i` (1-based, as in the coordinates).
  static Effect fiducial(Index d, Index i) {
    Vector e = Vector::Zero(d + 1);
    e(i) = 1.0;
    return Effect(std::move(e));
  }

  const Vector& dual() const { return dual_; }
  Index size() const { return dual_.size(); }
  Effect complement() const { return Effect(unit(dual_.size() - 1).dual() - dual_); }

 private:
  Vector dual_;
};

inline double evaluate_effect(const Effect& e, const StateVector& psi) {
  require_same_size(e.size(), psi.size(), "evaluate_effect");
  return e.dual().dot(psi.coords());
}

inline Effect tensor(const Effect& a, const Effect& b) { return Effect(kron_vec(a.dual(), b.dual())); }

class Measurement {
 public:
  Measurement() = default;
  explicit Measurement(std::vector<Effect> effects, double tolerance = tol::identity)
      : effects_(std::move(effects)) {
    if (effects_.empty()) throw DomainError("Measurement: no effects");
    const Index n = effects_.front().size();
    Vector sum = Vector::Zero(n);
    for (const auto& e : effects_) {
      require_same_size(e.size(), n, "Measurement");
      sum += e.dual();
    }
    sum(0) -= 1.0;
    if (sum.cwiseAbs().maxCoeff() > tolerance) {
      throw DomainError("Measurement: effects do not sum to the unit effect");
    }
  }

  const std::vector<Effect>& effects() const { return effects_; }
  std::size_t size() const { return effects_.size(); }
  const Effect& operator[](std::size_t i) const { return effects_.at(i); }

  double unit_deviation() const {
    Vector sum = Vector::Zero(effects_.front().size());
    for (const auto& e : effects_) sum += e.dual();
    sum(0) -= 1.0;
    return sum.cwiseAbs().maxCoeff();
  }

 private:
  std::vector<Effect> effects_;
};

/// Matrix acting on redundant coordinates; rectangular for equivalence maps
/// between spaces of different dimension.
class LinearMap {
 public:
  LinearMap() = default;
  explicit LinearMap(Matrix m) : m_(std::move(m)) {}

  static LinearMap identity(Index n) { return LinearMap(Matrix::Identity(n, n)); }

  const Matrix& matrix() const { return m_; }
  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }

  StateVector apply(const StateVector& psi) const {
    require_same_size(m_.cols(), psi.size(), "LinearMap::apply");
    return StateVector(m_ * psi.coords());
  }
  Vector apply(const Vector& v) const {
    require_same_size(m_.cols(), v.size(), "LinearMap::apply");
    return m_ * v;
  }
  /// Effect transported backwards: e o this.
  Effect pullback(const Effect& e) const {
    require_same_size(m_.rows(), e.size(), "LinearMap::pullback");
    return Effect(m_.transpose() * e.dual());
  }

  LinearMap operator*(const LinearMap& o) const {
    require_same_size(m_.cols(), o.m_.rows(), "LinearMap::compose");
    return LinearMap(m_ * o.m_);
  }
  LinearMap inverse() const {
    if (m_.rows() != m_.cols()) throw DimensionError("LinearMap::inverse: map is not square");
    Eigen::FullPivLU<Matrix> lu(m_);
    if (!lu.isInvertible()) throw DomainError("LinearMap::inverse: singular map");
    return LinearMap(lu.inverse());
  }

  /// Normalization-preserving: the first row is the unit functional.
  bool preserves_normalization(double tolerance = tol::identity) const {
    if (m_.rows() == 0) return false;
    Vector u = Vector::Zero(m_.cols());
    u(0) = 1.0;
    return (m_.row(0).transpose() - u).cwiseAbs().maxCoeff() <= tolerance;
  }

 private:
  Matrix m_;
};

inline LinearMap tensor(const LinearMap& a, const LinearMap& b) { return LinearMap(kron(a.matrix(), b.matrix())); }

// --- state spaces ----------------------------------------------------------

class StateSpaceDescriptor;
using SpacePtr = std::shared_ptr<const StateSpaceDescriptor>;

struct VertexListRep {
  std::vector<StateVector> vertices;
};

/// Unit ball of Bloch vectors b, stored in standard coordinates p_i = (1+b_i)/2.
struct BallRep {
  int d2 = 0;
};

/// State space cut from the positive cone: rho(psi) = sum_j psi_j basis[j].
/// `extraction` maps the real parametrization of a Hermitian matrix back to
/// redundant coordinates.
struct PsdSliceRep {
  int c = 0;
  std::vector<CMatrix> basis;
  Matrix extraction;
};

/// Convex hull of product states of two spaces (minimal tensor product). No
/// closed-form membership oracle is available.
struct ProductHullRep {
  SpacePtr a;
  SpacePtr b;
};

enum class Representation { VertexList, Ball, PsdSlice, ProductHull };

class StateSpaceDescriptor {
 public:
  using Rep = std::variant<VertexListRep, BallRep, PsdSliceRep, ProductHullRep>;

  StateSpaceDescriptor(Index dim, Rep rep, std::vector<std::string> labels = {})
      : dim_(dim), rep_(std::move(rep)), labels_(std::move(labels)) {
    if (labels_.empty()) {
      for (Index i = 1; i <= dim_; ++i) labels_.push_back("x" + std::to_string(i));
    }
    require_same_size(static_cast<Index>(labels_.size()), dim_, "fiducial labels");
  }

  Index dim() const { return dim_; }
  Index ambient() const { return dim_ + 1; }
  const Rep& rep() const { return rep_; }
  Representation kind() const { return static_cast<Representation>(rep_.index()); }
  const std::vector<std::string>& fiducial_labels() const { return labels_; }

  const VertexListRep* vertex_list() const { return std::get_if<VertexListRep>(&rep_); }
  const BallRep* ball() const { return std::get_if<BallRep>(&rep_); }
  const PsdSliceRep* psd() const { return std::get_if<PsdSliceRep>(&rep_); }
  const ProductHullRep* product_hull() const { return std::get_if<ProductHullRep>(&rep_); }

 private:
  Index dim_;
  Rep rep_;
  std::vector<std::string> labels_;
};

inline const char* to_string(Representation r) {
  switch (r) {
    case Representation::VertexList: return "vertex-list";
    case Representation::Ball: return "ball";
    case Representation::PsdSlice: return "psd-cone-slice";
    case Representation::ProductHull: return "product-hull";
  }
  return "?";
}

// --- Hermitian parametrization used by psd slices ----------------------------

/// Real coordinates of a Hermitian c x c matrix: diagonal, then Re and Im of
/// the strict upper triangle.
inline Vector hermitian_to_real(const CMatrix& h) {
  const Index c = h.rows();
  Vector v(c * c);
  Index k = 0;
  for (Index i = 0; i < c; ++i) v(k++) = h(i, i).real();
  for (Index i = 0; i < c; ++i) {
    for (Index j = i + 1; j < c; ++j) {
      v(k++) = h(i, j).real();
      v(k++) = h(i, j).imag();
    }
  }
  return v;
}

inline PsdSliceRep make_psd_slice(int c, std::vector<CMatrix> basis) {
  const Index n = static_cast<Index>(basis.size());
  Matrix a(static_cast<Index>(c) * c, n);
  for (Index j = 0; j < n; ++j) {
    require_same_size(basis[static_cast<std::size_t>(j)].rows(), c, "psd basis");
    a.col(j) = hermitian_to_real(basis[static_cast<std::size_t>(j)]);
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  if (cod.rank() != n) throw DomainError("psd slice: basis matrices are linearly dependent");
  return PsdSliceRep{c, std::move(basis), cod.pseudoInverse()};
}

inline CMatrix hermitian_image(const PsdSliceRep& s, const Vector& coords) {
  require_same_size(coords.size(), static_cast<Index>(s.basis.size()), "hermitian_image");
  CMatrix rho = CMatrix::Zero(s.c, s.c);
  for (Index j = 0; j < coords.size(); ++j) rho += coords(j) * s.basis[static_cast<std::size_t>(j)];
  return rho;
}

inline Vector coords_from_hermitian(const PsdSliceRep& s, const CMatrix& rho) {
  return s.extraction * hermitian_to_real(rho);
}

/// Dual vector of the functional psi -> Re tr(M rho(psi)).
inline Effect effect_from_operator(const PsdSliceRep& s, const CMatrix& m) {
  Vector dual(static_cast<Index>(s.basis.size()));
  for (std::size_t j = 0; j < s.basis.size(); ++j) dual(static_cast<Index>(j)) = (m * s.basis[j]).trace().real();
  return Effect(std::move(dual));
}

inline double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  return es.eigenvalues().minCoeff();
}

// --- Bloch conversion for balls ----------------------------------------------

inline Vector ball_to_bloch(const Vector& coords) {
  return 2.0 * coords.tail(coords.size() - 1) - coords(0) * Vector::Ones(coords.size() - 1);
}

inline StateVector ball_from_bloch(const Vector& b) {
  return StateVector::from_fiducials((Vector::Ones(b.size()) + b) / 2.0);
}

// --- groups (data only; operations live in groups.hpp) ----------------------

enum class GroupKind { FiniteList, Generated, NamedContinuous };
enum class NamedFamily { SO, O, SUConjugation };

struct GroupSpec {
  GroupKind kind = GroupKind::FiniteList;
  std::vector<LinearMap> elements;    // FiniteList; closure of generators for Generated
  std::vector<LinearMap> generators;  // Generated
  std::size_t closure_cap = 4096;
  NamedFamily family = NamedFamily::SO;
  int n = 0;  // SO(n) / O(n) on the Bloch ball, SU(n) conjugation on psd slices
  std::uint64_t sampler_seed = 0;

  bool finite() const { return kind != GroupKind::NamedContinuous; }
};

namespace detail {

inline std::vector<long long> matrix_key(const Matrix& m) {
  std::vector<long long> k(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.size(); ++i) k[static_cast<std::size_t>(i)] = std::llround(m.data()[i] * 1e8);
  return k;
}

}  // namespace detail

/// Closure of a set of invertible maps under composition, identity first.
/// Throws DomainError when more than `cap` elements appear.
inline std::vector<LinearMap> close_group(const std::vector<LinearMap>& generators, std::size_t cap = 4096) {
  if (generators.empty()) throw DomainError("close_group: no generators");
  const Index n = generators.front().matrix().rows();
  std::vector<LinearMap> out{LinearMap(Matrix::Identity(n, n))};
  std::set<std::vector<long long>> seen{detail::matrix_key(out.front().matrix())};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const auto& g : generators) {
      LinearMap h = g * out[head];
      if (seen.insert(detail::matrix_key(h.matrix())).second) {
        if (out.size() >= cap) throw DomainError("close_group: closure exceeds cap");
        out.push_back(std::move(h));
      }
    }
  }
  return out;
}

inline GroupSpec generated_group(std::vector<LinearMap> generators, std::size_t cap = 4096) {
  GroupSpec g;
  g.kind = GroupKind::Generated;
  g.closure_cap = cap;
  g.elements = close_group(generators, cap);
  g.generators = std::move(generators);
  return g;
}

inline GroupSpec named_group(NamedFamily family, int n, std::uint64_t seed = 0) {
  GroupSpec g;
  g.kind = GroupKind::NamedContinuous;
  g.family = family;
  g.n = n;
  g.sampler_seed = seed;
  return g;
}

inline const char* to_string(NamedFamily f) {
  switch (f) {
    case NamedFamily::SO: return "SO";
    case NamedFamily::O: return "O";
    case NamedFamily::SUConjugation: return "SU";
  }
  return "?";
}

enum class EffectPolicy { AllEffects, GeneratedByLocalProducts, ExplicitList };
enum class CompositeRule { LocalTomographyMax, LocalTomographyMin, Quantum, Classical };

inline const char* to_string(EffectPolicy p) {
  switch (p) {
    case EffectPolicy::AllEffects: return "all-effects";
    case EffectPolicy::GeneratedByLocalProducts: return "generated-by-local-products";
    case EffectPolicy::ExplicitList: return "explicit-list";
  }
  return "?";
}

inline const char* to_string(CompositeRule r) {
  switch (r) {
    case CompositeRule::LocalTomographyMax: return "local-tomography-max";
    case CompositeRule::LocalTomographyMin: return "local-tomography-min";
    case CompositeRule::Quantum: return "quantum";
    case CompositeRule::Classical: return "classical";
  }
  return "?";
}

struct TheoryInstance;
using InstancePtr = std::shared_ptr<const TheoryInstance>;

struct TheoryInstance {
  std::string name;
  SpacePtr space;
  EffectPolicy effect_policy = EffectPolicy::AllEffects;
  std::vector<Effect> effects;  // explicit list, or local generators for product policies
  GroupSpec group;
  CompositeRule composite_rule = CompositeRule::LocalTomographyMin;
  // Set for bipartite instances.
  InstancePtr part_a;
  InstancePtr part_b;

  const StateSpaceDescriptor& sp() const { return *space; }
  bool bipartite() const { return part_a && part_b; }
};

// --- operations ---------------------------------------------------------------

inline StateVector mix(const StateVector& a, const StateVector& b, double q) {
  require_same_size(a.size(), b.size(), "mix");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("mix: weight outside [0,1]");
  Vector c = q * a.coords() + (1.0 - q) * b.coords();
  c(0) = 1.0;
  return StateVector(std::move(c));
}

/// Convex combination with weights summing to one.
inline StateVector mix(const std::vector<StateVector>& states, const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size()) throw DimensionError("mix: weights/states mismatch");
  Vector c = Vector::Zero(states.front().size());
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (weights[i] < 0.0) throw DomainError("mix: negative weight");
    require_same_size(states[i].size(), c.size(), "mix");
    c += weights[i] * states[i].coords();
    total += weights[i];
  }
  if (std::abs(total - 1.0) > tol::identity) throw DomainError("mix: weights do not sum to one");
  c(0) = 1.0;
  return StateVector(std::move(c));
}

namespace detail {

/// Minimum L1 distance from `x` to the convex hull of `points` (LP).
inline double hull_l1_distance(const std::vector<Vector>& points, const Vector& x) {
  const Index n = static_cast<Index>(points.size());
  const Index m = x.size();
  lp::LPProblem p(n + 2 * m, lp::Sense::Minimize);
  p.objective.tail(2 * m).setOnes();
  for (Index r = 0; r < m; ++r) {
    Vector row = Vector::Zero(n + 2 * m);
    for (Index k = 0; k < n; ++k) row(k) = points[static_cast<std::size_t>(k)](r);
    row(n + r) = 1.0;
    row(n + m + r) = -1.0;
    p.add(std::move(row), lp::Relation::Equal, x(r));
  }
  Vector ones = Vector::Zero(n + 2 * m);
  ones.head(n).setOnes();
  p.add(std::move(ones), lp::Relation::Equal, 1.0);
  const auto res = lp::solve(p);
  if (!res.optimal()) throw SolverError("hull distance LP did not reach an optimum");
  return *res.value;
}

}  // namespace detail

inline bool is_member(const StateSpaceDescriptor& space, const StateVector& psi, double tolerance = tol::feasibility) {
  require_same_size(psi.size(), space.ambient(), "is_member");
  switch (space.kind()) {
    case Representation::VertexList: {
      std::vector<Vector> pts;
      for (const auto& v : space.vertex_list()->vertices) pts.push_back(v.coords());
      return detail::hull_l1_distance(pts, psi.coords()) <= tolerance;
    }
    case Representation::Ball:
      return ball_to_bloch(psi.coords()).norm() <= 1.0 + tolerance;
    case Representation::PsdSlice:
      return min_eigenvalue(hermitian_image(*space.psd(), psi.coords())) >= -tolerance;
    case Representation::ProductHull:
      break;
  }
  throw UnsupportedRepresentation(std::string("is_member: no membership oracle for ") + to_string(space.kind()));
}

// --- seeded samplers -----------------------------------------------------------

using Rng = std::mt19937_64;

inline Vector gaussian_vector(Index n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline Vector sphere_point(Index n, Rng& rng) {
  for (;;) {
    Vector v = gaussian_vector(n, rng);
    const double nv = v.norm();
    if (nv > 1e-12) return v / nv;
  }
}

inline CVector haar_state(Index c, Rng& rng) {
  for (;;) {
    CVector v(c);
    const Vector re = gaussian_vector(c, rng);
    const Vector im = gaussian_vector(c, rng);
    for (Index i = 0; i < c; ++i) v(i) = Complex(re(i), im(i));
    const double nv = v.norm();
    if (nv > 1e-12) return v / nv;
  }
}

inline StateVector sample_pure(const StateSpaceDescriptor& space, Rng& rng);

inline StateVector product_state(const StateVector& a, const StateVector& b) {
  return StateVector(kron_vec(a.coords(), b.coords()));
}

inline StateVector sample_pure(const StateSpaceDescriptor& space, Rng& rng) {
  switch (space.kind()) {
    case Representation::VertexList: {
      const auto& v = space.vertex_list()->vertices;
      std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
      return v[pick(rng)];
    }
    case Representation::Ball:
      return ball_from_bloch(sphere_point(space.dim(), rng));
    case Representation::PsdSlice: {
      const auto& s = *space.psd();
      const CVector v = haar_state(s.c, rng);
      return StateVector(coords_from_hermitian(s, v * v.adjoint()));
    }
    case Representation::ProductHull: {
      const auto& h = *space.product_hull();
      const StateVector a = sample_pure(*h.a, rng);
      return product_state(a, sample_pure(*h.b, rng));
    }
  }
  throw UnsupportedRepresentation("sample_pure");
}

/// Pure states of a space: every vertex for polytopes, `n` seeded samples otherwise.
inline std::vector<StateVector> pure_states(const StateSpaceDescriptor& space, std::size_t n, Rng& rng) {
  if (const auto* vl = space.vertex_list()) return vl->vertices;
  std::vector<StateVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_pure(space, rng));
  return out;
}

}  // namespace gptkit
