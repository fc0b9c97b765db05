// Requirement verdicts for every catalog theory.

#include <gptkit/gptkit.hpp>

#include <cstdio>

using namespace gptkit;

int main() {
  const std::vector<std::string> names{"classical:2", "classical:3", "quantum:2", "quantum:3",
                                       "ball:3",      "ball:5",      "boxworld",  "boxworld-pair"};
  const std::vector<std::string> ids{"1", "2", "3", "4", "5", "5p"};
  AuditOptions o;
  o.seed = 1;
  o.samples = 100;
  std::printf("%-16s", "theory");
  for (const auto& id : ids) std::printf("%-16s", ("R" + id).c_str());
  std::printf("\n");
  for (const auto& n : names) {
    const AuditReport r = run_audit(make_instance(n), ids, o);
    std::printf("%-16s", n.c_str());
    for (const auto& q : r.requirements) std::printf("%-16s", to_string(q.verdict));
    std::printf("\n");
  }
}
