#pragma once

// Built-in theories: classical simplices, quantum slices, Bloch-ball gbits and
// boxworld in the two-input, two-output scenario.

#include <gptkit/bloch.hpp>
#include <gptkit/composite.hpp>
#include <gptkit/core.hpp>
#include <gptkit/hermitian.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace gptkit {

/// Matrix whose columns are the vertex coordinates.
inline Matrix vertex_matrix(const std::vector<StateVector>& v) {
  Matrix m(v.front().size(), static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m.col(static_cast<Index>(i)) = v[i].coords();
  return m;
}

inline bool is_simplex(const std::vector<StateVector>& v) {
  if (v.empty()) return false;
  const Matrix m = vertex_matrix(v);
  if (m.rows() != m.cols()) return false;
  return Eigen::FullPivLU<Matrix>(m).rank() == m.cols();
}

/// Transformation of a simplex that sends vertex i to vertex perm[i].
inline LinearMap simplex_permutation_map(const std::vector<StateVector>& v, const std::vector<std::size_t>& perm) {
  if (!is_simplex(v)) throw DomainError("simplex_permutation_map: vertices are not a simplex");
  const Matrix m = vertex_matrix(v);
  Matrix target(m.rows(), m.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) target.col(static_cast<Index>(i)) = m.col(static_cast<Index>(perm[i]));
  return LinearMap(target * m.inverse());
}

/// Permutation group of a simplex: the full symmetric group up to seven
/// vertices, the cyclic group of vertex rotations beyond that.
inline GroupSpec simplex_symmetric_group(const std::vector<StateVector>& v) {
  const std::size_t n = v.size();
  std::vector<LinearMap> gens;
  if (n > 7) {
    std::vector<std::size_t> cycle(n);
    for (std::size_t i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
    gens.push_back(simplex_permutation_map(v, cycle));
    return generated_group(std::move(gens), n);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::swap(perm[k], perm[k + 1]);
    gens.push_back(simplex_permutation_map(v, perm));
  }
  if (gens.empty()) gens.push_back(LinearMap::identity(v.front().size()));
  return generated_group(std::move(gens), 5040);
}

inline std::vector<StateVector> simplex_vertices(int c) {
  std::vector<StateVector> v;
  for (int k = 0; k < c; ++k) {
    Vector p = Vector::Zero(c - 1);
    if (k < c - 1) p(k) = 1.0;
    v.push_back(StateVector::from_fiducials(p));
  }
  return v;
}

inline TheoryInstance classical(int c) {
  if (c < 1) throw DomainError("classical: c must be at least 1");
  auto verts = simplex_vertices(c);
  TheoryInstance t;
  t.name = "classical:" + std::to_string(c);
  t.group = simplex_symmetric_group(verts);
  t.space = std::make_shared<StateSpaceDescriptor>(c - 1, VertexListRep{std::move(verts)});
  t.effect_policy = EffectPolicy::AllEffects;
  t.composite_rule = CompositeRule::Classical;
  return t;
}

inline SpacePtr quantum_space(int c) {
  if (c < 1) throw DomainError("quantum_space: c must be positive");
  if (c == 1) return std::make_shared<StateSpaceDescriptor>(0, make_psd_slice(1, {CMatrix::Identity(1, 1)}));
  return std::make_shared<StateSpaceDescriptor>(c * c - 1, make_psd_slice(c, quantum_basis(c)));
}

inline TheoryInstance quantum(int c) {
  if (c < 2 || c > 4) throw DomainError("quantum: c must be between 2 and 4");
  TheoryInstance t;
  t.name = "quantum:" + std::to_string(c);
  t.space = quantum_space(c);
  t.group = named_group(NamedFamily::SUConjugation, c);
  t.effect_policy = EffectPolicy::AllEffects;
  t.composite_rule = CompositeRule::Quantum;
  return t;
}

/// SO(d2) by default; d2 = 1 always takes O(1) because SO(1) is trivial.
inline TheoryInstance ball_gbit(int d2, bool orthogonal = false) {
  if (d2 < 1) throw DomainError("ball_gbit: d2 must be at least 1");
  TheoryInstance t;
  t.name = "ball:" + std::to_string(d2);
  t.space = std::make_shared<StateSpaceDescriptor>(d2, BallRep{d2});
  t.group = named_group(orthogonal || d2 == 1 ? NamedFamily::O : NamedFamily::SO, d2);
  t.effect_policy = EffectPolicy::AllEffects;
  t.composite_rule = d2 == 3 ? CompositeRule::Quantum : CompositeRule::LocalTomographyMin;
  return t;
}

/// Square: fiducials x1, x2 are outcome 0 of the two binary measurements.
inline std::vector<StateVector> square_vertices() {
  std::vector<StateVector> v;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) v.push_back(StateVector::from_fiducials((Vector(2) << a, b).finished()));
  }
  return v;
}

/// Relabelings of the square: input swap and output flip of the first input.
inline std::vector<LinearMap> square_relabelings() {
  Matrix swap = Matrix::Zero(3, 3);
  swap(0, 0) = 1.0;
  swap(1, 2) = 1.0;
  swap(2, 1) = 1.0;
  Matrix flip = Matrix::Identity(3, 3);
  flip(1, 0) = 1.0;
  flip(1, 1) = -1.0;
  return {LinearMap(swap), LinearMap(flip)};
}

/// The four fiducial outcome effects of the square and their complements.
inline std::vector<Effect> square_local_effects() {
  std::vector<Effect> out;
  for (Index i = 1; i <= 2; ++i) {
    out.push_back(Effect::fiducial(2, i));
    out.push_back(Effect::fiducial(2, i).complement());
  }
  return out;
}

inline TheoryInstance boxworld_gbit() {
  TheoryInstance t;
  t.name = "boxworld";
  t.space = std::make_shared<StateSpaceDescriptor>(2, VertexListRep{square_vertices()},
                                                   std::vector<std::string>{"a0", "a1"});
  t.group = generated_group(square_relabelings());
  t.effect_policy = EffectPolicy::GeneratedByLocalProducts;
  t.effects = square_local_effects();
  t.composite_rule = CompositeRule::LocalTomographyMax;
  return t;
}

/// Permutation (i, j) -> (j, i) of the joint coordinates of two equal parts.
inline LinearMap subsystem_swap(Index ambient) {
  Matrix s = Matrix::Zero(ambient * ambient, ambient * ambient);
  for (Index i = 0; i < ambient; ++i) {
    for (Index j = 0; j < ambient; ++j) s(j * ambient + i, i * ambient + j) = 1.0;
  }
  return LinearMap(std::move(s));
}

namespace detail {

inline GroupSpec product_group(const TheoryInstance& a, const TheoryInstance& b, bool with_swap) {
  const Index na = a.sp().ambient();
  const Index nb = b.sp().ambient();
  std::vector<LinearMap> gens;
  const auto& ga = a.group.kind == GroupKind::Generated ? a.group.generators : a.group.elements;
  const auto& gb = b.group.kind == GroupKind::Generated ? b.group.generators : b.group.elements;
  for (const auto& g : ga) gens.push_back(tensor(g, LinearMap::identity(nb)));
  for (const auto& g : gb) gens.push_back(tensor(LinearMap::identity(na), g));
  if (with_swap) gens.push_back(subsystem_swap(na));
  if (gens.empty()) gens.push_back(LinearMap::identity(na * nb));
  return generated_group(std::move(gens));
}

}  // namespace detail

/// Joint system of two instances. The rule is the shared composite rule of
/// the parts (the minimal rule when they differ).
inline TheoryInstance compose(const TheoryInstance& a, const TheoryInstance& b) {
  const CompositeRule rule = a.composite_rule == b.composite_rule ? a.composite_rule : CompositeRule::LocalTomographyMin;
  CompositeSpace cs = make_composite(a.space, b.space, rule);
  TheoryInstance t;
  t.name = a.name + "*" + b.name;
  t.space = cs.joint;
  t.composite_rule = rule;
  t.part_a = std::make_shared<const TheoryInstance>(a);
  t.part_b = std::make_shared<const TheoryInstance>(b);
  if (const auto* p = cs.joint->psd()) {
    t.group = named_group(NamedFamily::SUConjugation, p->c);
    t.effect_policy = EffectPolicy::AllEffects;
  } else if (const auto* vl = cs.joint->vertex_list(); vl && is_simplex(vl->vertices)) {
    t.group = simplex_symmetric_group(vl->vertices);
    t.effect_policy = EffectPolicy::AllEffects;
  } else if (a.group.finite() && b.group.finite()) {
    t.group = detail::product_group(a, b, a.name == b.name);
    t.effect_policy = EffectPolicy::GeneratedByLocalProducts;
    for (const auto& x : a.effects.empty() ? std::vector<Effect>{Effect::unit(a.sp().dim())} : a.effects) {
      for (const auto& y : b.effects.empty() ? std::vector<Effect>{Effect::unit(b.sp().dim())} : b.effects) {
        t.effects.push_back(tensor(x, y));
      }
    }
  } else {
    t.group = generated_group({LinearMap::identity(cs.joint->ambient())});
    t.effect_policy = EffectPolicy::GeneratedByLocalProducts;
  }
  return t;
}

/// Two boxworld gbits under the maximal rule: the no-signaling polytope.
inline TheoryInstance boxworld_pair() {
  TheoryInstance t = compose(boxworld_gbit(), boxworld_gbit());
  t.name = "boxworld-pair";
  return t;
}

/// Diagonal injection of a classical distribution into quantum(c) coordinates.
inline StateVector embed_classical(int c, const StateVector& psi) {
  require_same_size(psi.size(), c, "embed_classical");
  Vector q(c);
  double rest = 1.0;
  for (int k = 0; k + 1 < c; ++k) {
    q(k) = psi[k + 1];
    rest -= q(k);
  }
  q(c - 1) = rest;
  const SpacePtr s = quantum_space(c);
  return StateVector(coords_from_hermitian(*s->psd(), q.cast<Complex>().asDiagonal().toDenseMatrix()));
}

/// Builds a catalog instance from `classical:<c>`, `quantum:<c>`,
/// `ball:<d2>`, `boxworld` or `boxworld-pair`.
inline TheoryInstance make_instance(const std::string& name) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  auto arg = [&]() -> int {
    if (colon == std::string::npos) throw DomainError("instance '" + name + "': missing parameter");
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(name.substr(colon + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != name.size() - colon - 1) throw DomainError("instance '" + name + "': bad parameter");
    return v;
  };
  if (head == "classical") return classical(arg());
  if (head == "quantum") return quantum(arg());
  if (head == "ball") return ball_gbit(arg());
  if (colon == std::string::npos && head == "boxworld") return boxworld_gbit();
  if (colon == std::string::npos && head == "boxworld-pair") return boxworld_pair();
  throw DomainError("unknown instance '" + name + "'");
}

inline std::vector<std::string> catalog_names() {
  return {"classical:<c>", "quantum:<c>", "ball:<d2>", "boxworld", "boxworld-pair"};
}

}  // namespace gptkit
