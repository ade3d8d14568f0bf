#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nnvqe/error.hpp"
#include "nnvqe/pauli.hpp"
#include "nnvqe/rng.hpp"

namespace nnvqe {

/// Periodic 1D XXZ chain with a transverse field:
///   H = sum_i (X_i X_{i+1} + Y_i Y_{i+1} + delta Z_i Z_{i+1}) + lambda sum_i Z_i.
/// Zero-coefficient terms are kept, so the term count is always 4n.
inline PauliSum build_xxz(int n, double delta, double lambda) {
  if (n < 3)
    throw config_error("build_xxz: need n >= 3 for distinct periodic bonds, got " +
                       std::to_string(n));
  PauliSum h;
  h.n_qubits = n;
  h.terms.reserve(static_cast<std::size_t>(4 * n));
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    h.add(1.0, {{i, PauliOp::X}, {j, PauliOp::X}});
    h.add(1.0, {{i, PauliOp::Y}, {j, PauliOp::Y}});
    h.add(delta, {{i, PauliOp::Z}, {j, PauliOp::Z}});
  }
  for (int i = 0; i < n; ++i) h.add(lambda, {{i, PauliOp::Z}});
  return h;
}

/// A parameterized Hamiltonian: names the tunable parameters and maps a
/// parameter point to a concrete operator.
struct HamiltonianFamily {
  int n_qubits = 0;
  std::vector<std::string> param_names;
  std::function<PauliSum(const std::vector<double>&)> build;

  std::size_t param_dim() const { return param_names.size(); }

  PauliSum at(const std::vector<double>& point) const {
    if (point.size() != param_names.size())
      throw structural_error("HamiltonianFamily: parameter point has dimension " +
                             std::to_string(point.size()) + ", expected " +
                             std::to_string(param_names.size()));
    return build(point);
  }
};

/// One tunable parameter (the anisotropy), fixed transverse field.
inline HamiltonianFamily xxz_family(int n, double fixed_lambda) {
  HamiltonianFamily fam;
  fam.n_qubits = n;
  fam.param_names = {"delta"};
  fam.build = [n, fixed_lambda](const std::vector<double>& p) {
    return build_xxz(n, p.at(0), fixed_lambda);
  };
  return fam;
}

/// Both anisotropy and field tunable.
inline HamiltonianFamily xxz_family_two_param(int n) {
  HamiltonianFamily fam;
  fam.n_qubits = n;
  fam.param_names = {"delta", "lambda"};
  fam.build = [n](const std::vector<double>& p) {
    return build_xxz(n, p.at(0), p.at(1));
  };
  return fam;
}

/// Field strength separating the ferromagnetic and XY phases of the 1D chain.
inline double phase_boundary_hs(double delta) { return 1.0 + delta; }

/// Field strength separating the XY and antiferromagnetic phases.
///
/// Evaluates (pi sinh(t)/t) * sum_k sech(pi^2 (1+2k) / (2t)) over all integers
/// k, with t = arccosh(delta). sech is even in (1+2k), so terms are paired and
/// the series is cut off once the next pair drops below 1e-13; the double-
/// exponential decay of sech bounds the discarded tail well under 1e-12.
inline double phase_boundary_hc(double delta) {
  if (delta < 1.0)
    throw std::domain_error("phase_boundary_hc: defined for delta >= 1");
  if (delta == 1.0) return 0.0;  // limit from above
  const double t = std::acosh(delta);
  const double prefactor = k_pi * std::sinh(t) / t;
  double sum = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double term = 2.0 / std::cosh(k_pi * k_pi * (2 * k + 1) / (2.0 * t));
    sum += term;
    if (term < 1e-13) break;
  }
  return prefactor * sum;
}

}  // namespace nnvqe
