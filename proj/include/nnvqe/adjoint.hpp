#pragma once

#include <vector>

#include "nnvqe/circuit.hpp"
#include "nnvqe/pauli.hpp"
#include "nnvqe/state.hpp"

namespace nnvqe {

struct EnergyGradient {
  double energy = 0.0;
  std::vector<double> grad;
};

/// Reverse-mode (adjoint) gradient of E(theta) = <psi(theta)|H|psi(theta)>.
///
/// With psi_k the state after gate k and lambda_k the costate
/// U_{k+1}^dag ... U_L^dag H psi, each gate contributes
///   dE/dtheta_k = Im <lambda_k| G_k |psi_k>
/// for U_k = exp(-i theta_k G_k / 2). One forward sweep builds psi, then a
/// single backward sweep un-applies each gate from both vectors, so the whole
/// gradient costs about three circuit applications regardless of the
/// parameter count.
inline EnergyGradient adjoint_gradient(const Circuit& c,
                                       const std::vector<double>& params,
                                       const PauliSum& h) {
  StateVector psi = evaluate_circuit(c, params);
  StateVector lambda = apply_pauli_sum(psi, h);

  EnergyGradient out;
  out.energy = inner_product(psi, lambda).real();
  out.grad.assign(c.n_params, 0.0);

  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    const Gate& g = *it;
    out.grad[g.param_slot] += generator_bracket(lambda, psi, g).imag();
    apply_gate(psi, g, -params[g.param_slot]);
    apply_gate(lambda, g, -params[g.param_slot]);
  }
  return out;
}

/// Central finite differences; the slow cross-check for the adjoint sweep.
inline std::vector<double> finite_difference_gradient(
    const Circuit& c, const std::vector<double>& params, const PauliSum& h,
    double step = 1e-5) {
  std::vector<double> grad(c.n_params, 0.0);
  std::vector<double> probe = params;
  for (int k = 0; k < c.n_params; ++k) {
    probe[k] = params[k] + step;
    const double up = expectation(evaluate_circuit(c, probe), h);
    probe[k] = params[k] - step;
    const double down = expectation(evaluate_circuit(c, probe), h);
    probe[k] = params[k];
    grad[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

}  // namespace nnvqe
