#pragma once

// JSON reports: 17-significant-digit numbers, stable key order, atomic writes.

#include <gptkit/audit.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace gptkit {

inline constexpr int report_schema = 1;
inline constexpr const char* tool_version = "0.1.0";

namespace detail {

inline void dump_value(const Json& j, std::ostringstream& os, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(k).dump() << (indent > 0 ? ": " : ":");
        dump_value(v, os, indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Numeric arrays stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && v.is_primitive();
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << nl << pad;
        first = false;
        dump_value(v, os, indent, depth + 1);
      }
      if (!flat) os << nl << close_pad;
      os << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      std::string s(buf);
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      os << s;
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Serializes with every double at 17 significant digits.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream os;
  detail::dump_value(j, os, indent, 0);
  os << '\n';
  return os.str();
}

/// Writes through a temporary file in the same directory, then renames it.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline Json to_json(const RequirementResult& r) {
  return Json{{"verdict", to_string(r.verdict)},
              {"detail", r.detail},
              {"tolerance", r.tolerance},
              {"seed", r.seed},
              {"witness", r.witness}};
}

inline Json to_json(const TheoremCheck& t) {
  return Json{{"name", t.name},
              {"expected", t.expected},
              {"observed", t.observed},
              {"tolerance", t.tolerance},
              {"comparison", t.comparison},
              {"pass", t.pass}};
}

inline Json to_json(const AuditReport& r) {
  Json j{{"schema", report_schema}, {"tool_version", tool_version}, {"seed", r.seed}};
  if (!r.instance.empty()) {
    j["instance"] = r.instance;
    j["tolerance"] = r.tol;
    j["samples"] = r.samples;
  }
  Json req = Json::object();
  for (const auto& q : r.requirements) req[q.id] = to_json(q);
  if (!r.requirements.empty()) j["requirements"] = req;
  if (!r.theorems.empty()) {
    Json th = Json::array();
    for (const auto& t : r.theorems) th.push_back(to_json(t));
    j["theorems"] = th;
  }
  j["runtime_ms"] = r.runtime_ms;
  return j;
}

/// Human-readable summary; never parsed back.
inline std::string to_text(const AuditReport& r) {
  std::ostringstream os;
  if (!r.instance.empty()) os << "instance " << r.instance << "  seed " << r.seed << "\n";
  for (const auto& q : r.requirements) {
    os << "  " << q.id << "  " << to_string(q.verdict) << "  " << q.detail << "\n";
    if (q.verdict != Verdict::Pass && !q.witness.empty()) os << "      witness " << dump_json(q.witness, 0);
  }
  for (const auto& t : r.theorems) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-42s %-4s expected %.10g observed %.10g\n", t.name.c_str(), t.pass ? "ok" : "FAIL",
                  t.expected, t.observed);
    os << buf;
  }
  return os.str();
}

}  // namespace gptkit
