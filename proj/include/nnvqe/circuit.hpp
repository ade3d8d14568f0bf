#pragma once

#include <bit>
#include <sstream>
#include <string>
#include <vector>

#include "nnvqe/error.hpp"
#include "nnvqe/state.hpp"

namespace nnvqe {

/// Parameterized circuit: a flat gate list where every gate owns one angle
/// slot, numbered in application order. No parameter sharing.
struct Circuit {
  int n_qubits = 0;
  int n_params = 0;
  std::vector<Gate> gates;
};

enum class AnsatzKind { HEA, MERA };

inline const char* ansatz_name(AnsatzKind k) {
  return k == AnsatzKind::HEA ? "hea" : "mera";
}

namespace detail {

inline int push(Circuit& c, GateKind kind, int q0, int q1 = -1) {
  Gate g;
  g.kind = kind;
  g.q0 = q0;
  g.q1 = q1;
  g.param_slot = c.n_params++;
  c.gates.push_back(g);
  return g.param_slot;
}

}  // namespace detail

/// Hardware-efficient ansatz on a ring of n qubits. One initial sweep of
/// Rx Rz Rx per qubit, then `depth` blocks of single-qubit Rx Rz sweeps
/// followed by a ladder of Rzz Rxx Ryy over every bond (i, i+1 mod n).
/// Parameter count: 3n + 5n*depth.
inline Circuit build_hea(int n_qubits, int depth) {
  if (n_qubits < 3 || n_qubits > 14)
    throw config_error("build_hea: need 3..14 qubits, got " +
                       std::to_string(n_qubits));
  if (depth < 1)
    throw config_error("build_hea: depth must be >= 1, got " +
                       std::to_string(depth));

  Circuit c;
  c.n_qubits = n_qubits;
  for (int q = 0; q < n_qubits; ++q) {
    detail::push(c, GateKind::RX, q);
    detail::push(c, GateKind::RZ, q);
    detail::push(c, GateKind::RX, q);
  }
  for (int d = 0; d < depth; ++d) {
    for (int q = 0; q < n_qubits; ++q) {
      detail::push(c, GateKind::RX, q);
      detail::push(c, GateKind::RZ, q);
    }
    for (int i = 0; i < n_qubits; ++i) {
      const int j = (i + 1) % n_qubits;
      detail::push(c, GateKind::RZZ, i, j);
      detail::push(c, GateKind::RXX, i, j);
      detail::push(c, GateKind::RYY, i, j);
    }
  }
  return c;
}

/// Inverted-MERA ansatz. Starts from Rx Rz Rx on every qubit, then expands
/// through layers that activate m = 2, 4, ..., n qubits (evenly strided).
/// Each layer runs `depth` blocks of Rx Rz singles on the active qubits plus
/// a brickwork of Rxx Rzz pairs (even-offset pairs, then odd-offset).
/// Requires n to be a power of two, n >= 4.
inline Circuit build_mera(int n_qubits, int depth) {
  if (n_qubits < 4 || !std::has_single_bit(static_cast<unsigned>(n_qubits)) ||
      n_qubits > 14)
    throw config_error("build_mera: need a power-of-two qubit count in 4..14, got " +
                       std::to_string(n_qubits));
  if (depth < 1)
    throw config_error("build_mera: depth must be >= 1, got " +
                       std::to_string(depth));

  Circuit c;
  c.n_qubits = n_qubits;
  for (int q = 0; q < n_qubits; ++q) {
    detail::push(c, GateKind::RX, q);
    detail::push(c, GateKind::RZ, q);
    detail::push(c, GateKind::RX, q);
  }
  for (int m = 2; m <= n_qubits; m *= 2) {
    const int stride = n_qubits / m;
    std::vector<int> active(m);
    for (int i = 0; i < m; ++i) active[i] = i * stride;

    for (int d = 0; d < depth; ++d) {
      for (int q : active) {
        detail::push(c, GateKind::RX, q);
        detail::push(c, GateKind::RZ, q);
      }
      for (int i = 0; i + 1 < m; i += 2) {
        detail::push(c, GateKind::RXX, active[i], active[i + 1]);
        detail::push(c, GateKind::RZZ, active[i], active[i + 1]);
      }
      for (int i = 1; i + 1 < m; i += 2) {
        detail::push(c, GateKind::RXX, active[i], active[i + 1]);
        detail::push(c, GateKind::RZZ, active[i], active[i + 1]);
      }
    }
  }
  return c;
}

inline Circuit build_ansatz(AnsatzKind kind, int n_qubits, int depth) {
  return kind == AnsatzKind::HEA ? build_hea(n_qubits, depth)
                                 : build_mera(n_qubits, depth);
}

/// Run the circuit on |0...0> with the given angles.
inline StateVector evaluate_circuit(const Circuit& c,
                                    const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != c.n_params)
    throw structural_error("evaluate_circuit: expected " +
                           std::to_string(c.n_params) + " angles, got " +
                           std::to_string(params.size()));
  StateVector psi = new_zero_state(c.n_qubits);
  for (const Gate& g : c.gates) apply_gate(psi, g, params[g.param_slot]);
  return psi;
}

/// One line per gate, stable across runs; used for layout goldens.
inline std::string describe(const Circuit& c) {
  std::ostringstream os;
  os << "qubits=" << c.n_qubits << " params=" << c.n_params << "\n";
  for (const Gate& g : c.gates) {
    os << g.param_slot << " " << gate_name(g.kind) << " " << g.q0;
    if (gate_arity(g.kind) == 2) os << " " << g.q1;
    os << "\n";
  }
  return os.str();
}

}  // namespace nnvqe
