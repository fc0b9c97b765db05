#pragma once

// Theory spec files: a built-in name or a custom polytope theory in JSON.
//
//   {"schema": 1, "name": "square", "builtin": "boxworld"}
//   {"schema": 1, "name": "square", "custom": {
//      "dim": 2, "vertices": [[0, 0], [0, 1], [1, 0], [1, 1]],
//      "effects": "all" | [[e0, e1, e2], ...], "effect_policy": "explicit-list",
//      "group": {"kind": "generated", "generators": [[[1, 0, 0], ...], ...]},
//      "composite": "local-tomography-max", "parts": [spec, spec]}}
//
// Vertices are fiducial probabilities (the leading 1 is implicit). Effects
// and group matrices act on the full (dim + 1)-dimensional coordinates.

#include <gptkit/core.hpp>
#include <gptkit/instances.hpp>
#include <gptkit/report.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gptkit {

/// Rejected spec; `where` is a JSON path or "line L, column C".
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  if (!j.contains(key)) throw SpecError(path + "." + key, "missing field");
  return j.at(key);
}

inline double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SpecError(path, "number is not finite");
  return x;
}

inline Vector vector_at(const Json& j, Index n, const std::string& path) {
  if (!j.is_array()) throw SpecError(path, "expected an array");
  if (static_cast<Index>(j.size()) != n) {
    throw SpecError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  }
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = number_at(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return v;
}

inline Matrix matrix_at(const Json& j, Index n, const std::string& path) {
  if (!j.is_array() || static_cast<Index>(j.size()) != n) {
    throw SpecError(path, "expected " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    m.row(r) = vector_at(j[static_cast<std::size_t>(r)], n, path + "[" + std::to_string(r) + "]").transpose();
  }
  return m;
}

inline Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json matrix_json(const Matrix& m) {
  Json a = Json::array();
  for (Index r = 0; r < m.rows(); ++r) a.push_back(vector_json(m.row(r).transpose()));
  return a;
}

inline CompositeRule parse_rule(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SpecError(path, "expected a string");
  const auto s = j.get<std::string>();
  for (CompositeRule r : {CompositeRule::LocalTomographyMax, CompositeRule::LocalTomographyMin, CompositeRule::Quantum,
                          CompositeRule::Classical}) {
    if (s == to_string(r)) return r;
  }
  throw SpecError(path, "unknown composite rule '" + s + "'");
}

inline EffectPolicy parse_policy(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SpecError(path, "expected a string");
  const auto s = j.get<std::string>();
  if (s == to_string(EffectPolicy::GeneratedByLocalProducts)) return EffectPolicy::GeneratedByLocalProducts;
  if (s == to_string(EffectPolicy::ExplicitList)) return EffectPolicy::ExplicitList;
  throw SpecError(path, "unknown effect policy '" + s + "'");
}

/// The map must send the vertex set onto itself.
inline void check_symmetry(const Matrix& m, const std::vector<StateVector>& v, const std::string& path) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vector img = m * v[i].coords();
    bool hit = false;
    for (const auto& w : v) hit = hit || (img - w.coords()).cwiseAbs().maxCoeff() <= 1e-9;
    if (!hit) throw SpecError(path, "does not map vertex " + std::to_string(i) + " onto a vertex");
  }
}

inline GroupSpec parse_group(const Json& j, const std::vector<StateVector>& v, Index n, const std::string& path) {
  const Json& kind = field(j, "kind", path);
  if (!kind.is_string()) throw SpecError(path + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  auto read_list = [&](const char* key) {
    const Json& a = field(j, key, path);
    const std::string p = path + "." + key;
    if (!a.is_array() || a.empty()) throw SpecError(p, "expected a non-empty array of matrices");
    std::vector<LinearMap> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string pi = p + "[" + std::to_string(i) + "]";
      Matrix m = matrix_at(a[i], n, pi);
      check_symmetry(m, v, pi);
      out.emplace_back(std::move(m));
    }
    return out;
  };
  if (k == "finite-list") {
    GroupSpec g;
    g.kind = GroupKind::FiniteList;
    g.elements = read_list("elements");
    return g;
  }
  if (k == "generated") {
    std::size_t cap = 4096;
    if (j.contains("cap")) {
      if (!j["cap"].is_number_unsigned()) throw SpecError(path + ".cap", "expected a positive integer");
      cap = j["cap"].get<std::size_t>();
    }
    try {
      return generated_group(read_list("generators"), cap);
    } catch (const DomainError& e) {
      throw SpecError(path + ".generators", e.what());
    }
  }
  if (k == "named") throw SpecError(path + ".kind", "named continuous groups need a built-in space");
  throw SpecError(path + ".kind", "unknown group kind '" + k + "'");
}

inline TheoryInstance parse_theory(const Json& j, const std::string& path);

inline TheoryInstance parse_custom(const Json& c, const std::string& path) {
  const Json& dj = field(c, "dim", path);
  if (!dj.is_number_unsigned()) throw SpecError(path + ".dim", "expected a non-negative integer");
  const Index dim = dj.get<Index>();
  const Index n = dim + 1;
  const Json& vj = field(c, "vertices", path);
  if (!vj.is_array() || vj.empty()) throw SpecError(path + ".vertices", "expected a non-empty array");
  std::vector<StateVector> verts;
  for (std::size_t i = 0; i < vj.size(); ++i) {
    const std::string p = path + ".vertices[" + std::to_string(i) + "]";
    const Vector x = vector_at(vj[i], dim, p);
    if ((x.array() < -1e-12).any() || (x.array() > 1.0 + 1e-12).any()) throw SpecError(p, "probability outside [0, 1]");
    verts.push_back(StateVector::from_fiducials(x));
  }
  if (Eigen::FullPivLU<Matrix>(vertex_matrix(verts)).rank() != n) {
    throw SpecError(path + ".vertices", "vertices do not span the declared dimension");
  }
  std::vector<std::string> labels;
  if (c.contains("labels")) {
    const Json& lj = c["labels"];
    if (!lj.is_array() || static_cast<Index>(lj.size()) != dim) {
      throw SpecError(path + ".labels", "expected " + std::to_string(dim) + " strings");
    }
    for (std::size_t i = 0; i < lj.size(); ++i) {
      if (!lj[i].is_string()) throw SpecError(path + ".labels[" + std::to_string(i) + "]", "expected a string");
      labels.push_back(lj[i].get<std::string>());
    }
  }
  TheoryInstance t;
  const Json& ej = field(c, "effects", path);
  if (ej.is_string()) {
    if (ej.get<std::string>() != "all") throw SpecError(path + ".effects", "expected \"all\" or an array");
    t.effect_policy = EffectPolicy::AllEffects;
  } else if (ej.is_array()) {
    t.effect_policy = c.contains("effect_policy") ? parse_policy(c["effect_policy"], path + ".effect_policy")
                                                  : EffectPolicy::ExplicitList;
    for (std::size_t i = 0; i < ej.size(); ++i) {
      const std::string p = path + ".effects[" + std::to_string(i) + "]";
      Effect e(vector_at(ej[i], n, p));
      for (const auto& x : verts) {
        const double y = evaluate_effect(e, x);
        if (y < -1e-9 || y > 1.0 + 1e-9) throw SpecError(p, "value outside [0, 1] on a vertex");
      }
      t.effects.push_back(std::move(e));
    }
  } else {
    throw SpecError(path + ".effects", "expected \"all\" or an array");
  }
  t.group = parse_group(field(c, "group", path), verts, n, path + ".group");
  t.composite_rule = parse_rule(field(c, "composite", path), path + ".composite");
  if (c.contains("parts")) {
    const Json& pj = c["parts"];
    if (!pj.is_array() || pj.size() != 2) throw SpecError(path + ".parts", "expected two part specs");
    auto a = parse_theory(pj[0], path + ".parts[0]");
    auto b = parse_theory(pj[1], path + ".parts[1]");
    if ((a.sp().dim() + 1) * (b.sp().dim() + 1) != n) {
      throw SpecError(path + ".parts", "part dimensions do not match the joint dimension");
    }
    t.part_a = std::make_shared<const TheoryInstance>(std::move(a));
    t.part_b = std::make_shared<const TheoryInstance>(std::move(b));
  }
  t.space = std::make_shared<StateSpaceDescriptor>(dim, VertexListRep{std::move(verts)}, std::move(labels));
  return t;
}

inline TheoryInstance parse_theory(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  if (j.contains("schema") && j["schema"] != report_schema) throw SpecError(path + ".schema", "unsupported schema version");
  const bool has_builtin = j.contains("builtin");
  const bool has_custom = j.contains("custom");
  if (has_builtin == has_custom) throw SpecError(path, "exactly one of 'builtin' or 'custom' is required");
  TheoryInstance t;
  if (has_builtin) {
    if (!j["builtin"].is_string()) throw SpecError(path + ".builtin", "expected a string");
    try {
      t = make_instance(j["builtin"].get<std::string>());
    } catch (const DomainError& e) {
      throw SpecError(path + ".builtin", e.what());
    }
  } else {
    t = parse_custom(j["custom"], path + ".custom");
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw SpecError(path + ".name", "expected a string");
    t.name = j["name"].get<std::string>();
  } else if (has_custom) {
    t.name = "custom";
  }
  return t;
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline TheoryInstance parse_theory_spec(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SpecError(detail::line_column(text, e.byte), "malformed JSON");
  }
  return detail::parse_theory(j, "$");
}

inline TheoryInstance load_theory_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SpecError(path, "cannot open file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_theory_spec(ss.str());
}

/// Resolves a CLI `--theory` argument: a catalog name or a spec file path.
inline TheoryInstance resolve_theory(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_theory_spec(arg);
  try {
    return make_instance(arg);
  } catch (const DomainError& e) {
    throw SpecError("--theory", e.what());
  }
}

/// Spec document for an instance. Polytope theories are written out in full;
/// balls and quantum slices are written by catalog name.
inline Json export_theory_spec(const TheoryInstance& t) {
  Json j{{"schema", report_schema}, {"name", t.name}};
  const auto* vl = t.sp().vertex_list();
  if (!vl || t.group.kind == GroupKind::NamedContinuous) {
    j["builtin"] = t.name;
    return j;
  }
  Json c{{"dim", t.sp().dim()}};
  c["labels"] = t.sp().fiducial_labels();
  Json verts = Json::array();
  for (const auto& v : vl->vertices) verts.push_back(detail::vector_json(v.coords().tail(t.sp().dim())));
  c["vertices"] = verts;
  if (t.effect_policy == EffectPolicy::AllEffects) {
    c["effects"] = "all";
  } else {
    Json e = Json::array();
    for (const auto& x : t.effects) e.push_back(detail::vector_json(x.dual()));
    c["effects"] = e;
    c["effect_policy"] = to_string(t.effect_policy);
  }
  Json g = Json::object();
  const bool generated = t.group.kind == GroupKind::Generated;
  g["kind"] = generated ? "generated" : "finite-list";
  Json mats = Json::array();
  for (const auto& m : generated ? t.group.generators : t.group.elements) mats.push_back(detail::matrix_json(m.matrix()));
  g[generated ? "generators" : "elements"] = mats;
  if (generated) g["cap"] = t.group.closure_cap;
  c["group"] = g;
  c["composite"] = to_string(t.composite_rule);
  if (t.bipartite()) c["parts"] = Json::array({export_theory_spec(*t.part_a), export_theory_spec(*t.part_b)});
  j["custom"] = c;
  return j;
}

}  // namespace gptkit
