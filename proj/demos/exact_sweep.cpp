// Sweep the anisotropy of a small chain and print exact ground energies next
// to the phase-boundary curves. Quick sanity check that the dense solver and
// the boundary formulas hang together.

#include <cstdio>

#include "nnvqe/exact.hpp"
#include "nnvqe/xxz.hpp"

int main() {
  const int n = 6;
  const double lambda = 0.75;
  std::printf("# n=%d lambda=%.2f\n", n, lambda);
  std::printf("%8s %12s %10s %10s\n", "delta", "E0", "hs", "hc");
  for (double delta = -3.0; delta <= 3.0 + 1e-9; delta += 0.5) {
    const auto [e0, psi] = nnvqe::exact_ground_state(
        nnvqe::build_xxz(n, delta, lambda));
    const double hs = nnvqe::phase_boundary_hs(delta);
    if (delta >= 1.0)
      std::printf("%8.2f %12.6f %10.4f %10.4f\n", delta, e0, hs,
                  nnvqe::phase_boundary_hc(delta));
    else
      std::printf("%8.2f %12.6f %10.4f %10s\n", delta, e0, hs, "-");
  }
  return 0;
}
