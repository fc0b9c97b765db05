// CHSH maxima for local, quantum and no-signaling correlations of two gbits.

#include <gptkit/gptkit.hpp>

#include <cstdio>

using namespace gptkit;

int main() {
  const Vector w = chsh_functional();
  const auto sq = square_vertices();
  std::vector<StateVector> local;
  for (const auto& a : sq) {
    for (const auto& b : sq) local.push_back(product_state(a, b));
  }
  const double classical_max = lp_max_over_hull(w, local);
  const double boxworld_max = lp_max_over_max_tensor(w, sq, sq);
  const EquatorChsh q = chsh_equator_max(64, 1);

  std::printf("local hidden variables   %.12f\n", classical_max);
  std::printf("two qubits (equator)     %.12f  at u = %.6f\n", q.value, q.u);
  std::printf("no-signaling boxes       %.12f\n", boxworld_max);

  // The PR box is the vertex attaining 4.
  const TheoryInstance pair = boxworld_pair();
  for (const auto& v : pair.sp().vertex_list()->vertices) {
    if (std::abs(w.dot(v.coords()) - boxworld_max) < 1e-9) {
      std::printf("optimal vertex:");
      for (Index i = 0; i < v.size(); ++i) std::printf(" %g", v[i]);
      std::printf("\n");
    }
  }
}
