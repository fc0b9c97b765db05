// gptkit command-line driver: audit, theorems, capacity, export, list.

#include <gptkit/gptkit.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace gptkit;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("GPTKIT_SEED");
  if (!env || !*env) return 0;
  std::size_t used = 0;
  const std::string s(env);
  try {
    const auto v = std::stoull(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw SpecError("GPTKIT_SEED", "expected an unsigned integer, got '" + s + "'");
}

void emit(const AuditReport& r, const std::string& format, const std::string& out) {
  const std::string body = format == "text" ? to_text(r) : dump_json(to_json(r));
  if (out.empty()) {
    std::cout << body;
  } else {
    write_atomic(out, body);
    std::cout << to_text(r);
  }
}

std::vector<int> parse_grid(const std::string& g) {
  std::string s = g;
  if (s.rfind("d2=", 0) == 0) s = s.substr(3);
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || used == 0) throw SpecError("--grid", "bad entry '" + item + "'");
    if (v < 3 || v % 2 == 0) throw SpecError("--grid", "d2 must be odd and at least 3, got " + item);
    out.push_back(v);
  }
  if (out.empty()) throw SpecError("--grid", "empty grid");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gptkit: generalized probabilistic theories toolkit and axiom auditor"};
  app.require_subcommand(1);

  std::string theory, times, requirements = "1,2,3,4,5,5p", out, format = "json", grid = "d2=3,5,7";
  std::uint64_t seed = 0;
  double tolerance = tol::feasibility;
  std::size_t samples = 200, pool = 24;
  int max_c = 8;

  auto* audit = app.add_subcommand("audit", "audit a theory against the requirements");
  audit->add_option("--theory", theory, "catalog name or spec file")->required();
  audit->add_option("--requirements", requirements, "comma list from 1,2,3,4,5,5p");
  auto* audit_seed = audit->add_option("--seed", seed, "RNG seed (default: GPTKIT_SEED or 0)");
  audit->add_option("--tol", tolerance, "feasibility tolerance")->check(CLI::PositiveNumber);
  audit->add_option("--samples", samples, "sampled states per check")->check(CLI::PositiveNumber);
  audit->add_option("--out", out, "report path");
  audit->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* theorems = app.add_subcommand("theorems", "run the theorem battery");
  auto* theorems_seed = theorems->add_option("--seed", seed, "RNG seed (default: GPTKIT_SEED or 0)");
  theorems->add_option("--grid", grid, "orbit-rank grid, e.g. d2=3,5,7");
  theorems->add_option("--out", out, "report path");
  theorems->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* cap = app.add_subcommand("capacity", "capacity certificate of a theory or composite");
  cap->add_option("--theory", theory, "catalog name or spec file")->required();
  cap->add_option("--times", times, "second factor of a composite");
  auto* cap_seed = cap->add_option("--seed", seed, "RNG seed for sampled candidates");
  cap->add_option("--pool", pool, "extra sampled pure states for continuous spaces");
  cap->add_option("--max-c", max_c, "largest family searched")->check(CLI::Range(1, 8));
  cap->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* exp = app.add_subcommand("export", "write a theory spec file");
  exp->add_option("--theory", theory, "catalog name or spec file")->required();
  exp->add_option("--out", out, "spec path (stdout when absent)");

  app.add_subcommand("list", "list catalog instance names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    auto resolve_seed = [&](CLI::Option* opt) { return opt->count() > 0 ? seed : default_seed(); };

    if (audit->parsed()) {
      AuditOptions o;
      o.seed = resolve_seed(audit_seed);
      o.tol = tolerance;
      o.samples = samples;
      const std::vector<std::string> ids = split(requirements, ',');
      if (ids.empty()) throw SpecError("--requirements", "no requirements given");
      for (const auto& id : ids) {
        if (id != "1" && id != "2" && id != "3" && id != "4" && id != "5" && id != "5p") {
          throw SpecError("--requirements", "unknown requirement '" + id + "'");
        }
      }
      const TheoryInstance t = resolve_theory(theory);
      const AuditReport r = run_audit(t, ids, o);
      emit(r, format, out);
      return exit_code(r);
    }

    if (theorems->parsed()) {
      const auto g = parse_grid(grid);
      AuditReport r;
      r.seed = resolve_seed(theorems_seed);
      const auto start = std::chrono::steady_clock::now();
      r.theorems = run_theorem_suite(r.seed, g);
      r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      emit(r, format, out);
      return exit_code(r);
    }

    if (cap->parsed()) {
      const TheoryInstance a = resolve_theory(theory);
      const TheoryInstance t = times.empty() ? a : compose(a, resolve_theory(times));
      Rng rng(resolve_seed(cap_seed));
      const auto cands = capacity_candidates(t.sp(), rng, pool);
      const auto c = capacity(t.sp(), max_c, cands);
      const double res = certificate_residual(c);
      if (format == "text") {
        std::cout << t.name << " capacity " << c.value << "  residual " << res
                  << (c.pool_exhausted ? "  (pool exhausted)" : "") << "\n";
      } else {
        Json j{{"schema", report_schema}, {"instance", t.name}, {"capacity", c.value}, {"residual", res},
               {"pool_size", cands.size()}, {"pool_exhausted", c.pool_exhausted}, {"subsets_tested", c.subsets_tested}};
        Json states = Json::array();
        for (const auto& s : c.states) states.push_back(to_json(s));
        Json effects = Json::array();
        for (const auto& e : c.measurement.effects()) effects.push_back(to_json(e.dual()));
        j["states"] = states;
        j["effects"] = effects;
        std::cout << dump_json(j);
      }
      return 0;
    }

    if (exp->parsed()) {
      const std::string body = dump_json(export_theory_spec(resolve_theory(theory)));
      if (out.empty()) {
        std::cout << body;
      } else {
        write_atomic(out, body);
      }
      return 0;
    }

    for (const auto& n : catalog_names()) std::cout << n << "\n";
    return 0;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
