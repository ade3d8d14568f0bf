#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nnvqe/error.hpp"

namespace nnvqe {

using cx = std::complex<double>;

enum class GateKind { RX, RZ, RXX, RYY, RZZ };

inline int gate_arity(GateKind kind) {
  return (kind == GateKind::RX || kind == GateKind::RZ) ? 1 : 2;
}

inline const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RZ: return "RZ";
    case GateKind::RXX: return "RXX";
    case GateKind::RYY: return "RYY";
    case GateKind::RZZ: return "RZZ";
  }
  return "?";
}

/// One parameterized rotation exp(-i theta G / 2) for the Pauli generator G
/// named by `kind`. `param_slot` indexes the circuit's flat parameter vector.
struct Gate {
  GateKind kind = GateKind::RX;
  int q0 = 0;
  int q1 = -1;  // second qubit for two-qubit kinds, -1 otherwise
  int param_slot = 0;
};

/// Dense complex amplitudes over n qubits.
///
/// Qubit 0 is the least-significant bit of the basis-state index. Plain data:
/// safe to copy and move between threads.
struct StateVector {
  int n_qubits = 0;
  std::vector<cx> amp;

  /// |0...0> on n qubits (n >= 1; no simulation-scale cap at this level).
  static StateVector zero(int n) {
    if (n < 1 || n > 30)
      throw config_error("StateVector: qubit count out of range: " +
                         std::to_string(n));
    StateVector s;
    s.n_qubits = n;
    s.amp.assign(std::size_t{1} << n, cx{0.0, 0.0});
    s.amp[0] = cx{1.0, 0.0};
    return s;
  }

  std::size_t dim() const { return amp.size(); }

  double norm() const {
    double s = 0.0;
    for (const cx& a : amp) s += std::norm(a);
    return std::sqrt(s);
  }
};

/// |0...0> for a simulation-sized register (3 <= n <= 14).
inline StateVector new_zero_state(int n) {
  if (n < 3 || n > 14)
    throw config_error("new_zero_state: qubit count must be in [3, 14], got " +
                       std::to_string(n));
  return StateVector::zero(n);
}

namespace detail {

inline cx mul_pos_i(cx z) { return cx{-z.imag(), z.real()}; }  //  i*z
inline cx mul_neg_i(cx z) { return cx{z.imag(), -z.real()}; }  // -i*z

inline void check_gate(const StateVector& s, const Gate& g) {
  if (g.q0 < 0 || g.q0 >= s.n_qubits)
    throw structural_error(std::string("apply_gate: qubit index out of range for ") +
                           gate_name(g.kind));
  if (gate_arity(g.kind) == 2) {
    if (g.q1 < 0 || g.q1 >= s.n_qubits)
      throw structural_error(std::string("apply_gate: qubit index out of range for ") +
                             gate_name(g.kind));
    if (g.q1 == g.q0)
      throw structural_error(std::string("apply_gate: qubit indices must be distinct for ") +
                             gate_name(g.kind));
  }
}

}  // namespace detail

/// Applies exp(-i angle G / 2) in place; no other state is touched.
///
/// Amplitudes are updated pairwise (or in 4-amplitude blocks for two-qubit
/// generators) without forming any matrix, O(2^n) per gate.
inline void apply_gate(StateVector& state, const Gate& gate, double angle) {
  detail::check_gate(state, gate);
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const std::size_t dim = state.dim();
  cx* a = state.amp.data();

  switch (gate.kind) {
    case GateKind::RX: {
      const std::size_t m = std::size_t{1} << gate.q0;
      for (std::size_t base = 0; base < dim; base += 2 * m)
        for (std::size_t i0 = base; i0 < base + m; ++i0) {
          const std::size_t i1 = i0 + m;
          const cx a0 = a[i0], a1 = a[i1];
          a[i0] = c * a0 + s * detail::mul_neg_i(a1);
          a[i1] = c * a1 + s * detail::mul_neg_i(a0);
        }
      break;
    }
    case GateKind::RZ: {
      const std::size_t m = std::size_t{1} << gate.q0;
      const cx p0{c, -s}, p1{c, s};
      for (std::size_t i = 0; i < dim; ++i) a[i] *= (i & m) ? p1 : p0;
      break;
    }
    case GateKind::RZZ: {
      // Diagonal: e^{-i angle/2} on equal bits, e^{+i angle/2} on unequal.
      const std::size_t mask =
          (std::size_t{1} << gate.q0) | (std::size_t{1} << gate.q1);
      const cx p_even{c, -s}, p_odd{c, s};
      for (std::size_t i = 0; i < dim; ++i)
        a[i] *= (std::popcount(i & mask) & 1) ? p_odd : p_even;
      break;
    }
    case GateKind::RXX:
    case GateKind::RYY: {
      const std::size_t m0 = std::size_t{1} << gate.q0;
      const std::size_t m1 = std::size_t{1} << gate.q1;
      const std::size_t mlo = m0 < m1 ? m0 : m1;
      const std::size_t mhi = m0 < m1 ? m1 : m0;
      const bool yy = gate.kind == GateKind::RYY;
      for (std::size_t b0 = 0; b0 < dim; b0 += 2 * mhi)
        for (std::size_t b1 = b0; b1 < b0 + mhi; b1 += 2 * mlo)
          for (std::size_t i = b1; i < b1 + mlo; ++i) {
            const std::size_t i00 = i, i01 = i | mlo, i10 = i | mhi,
                              i11 = i | mlo | mhi;
            const cx a00 = a[i00], a01 = a[i01], a10 = a[i10], a11 = a[i11];
            if (yy) {
              // YY maps |00> <-> -|11| and |01> <-> |10>.
              a[i00] = c * a00 + s * detail::mul_pos_i(a11);
              a[i11] = c * a11 + s * detail::mul_pos_i(a00);
            } else {
              a[i00] = c * a00 + s * detail::mul_neg_i(a11);
              a[i11] = c * a11 + s * detail::mul_neg_i(a00);
            }
            a[i01] = c * a01 + s * detail::mul_neg_i(a10);
            a[i10] = c * a10 + s * detail::mul_neg_i(a01);
          }
      break;
    }
  }
}

/// <a|b> with conjugation on `a`.
inline cx inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits != b.n_qubits)
    throw structural_error("inner_product: qubit count mismatch");
  cx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i)
    acc += std::conj(a.amp[i]) * b.amp[i];
  return acc;
}

/// <bra| G |ket> for the gate's Pauli generator, in one pass and without
/// materializing G|ket>. This is the per-gate step of the reverse sweep.
inline cx generator_bracket(const StateVector& bra, const StateVector& ket,
                            const Gate& gate) {
  detail::check_gate(ket, gate);
  if (bra.n_qubits != ket.n_qubits)
    throw structural_error("generator_bracket: qubit count mismatch");
  const std::size_t dim = ket.dim();
  const cx* l = bra.amp.data();
  const cx* k = ket.amp.data();
  cx acc{0.0, 0.0};
  switch (gate.kind) {
    case GateKind::RX: {
      const std::size_t m = std::size_t{1} << gate.q0;
      for (std::size_t i = 0; i < dim; ++i) acc += std::conj(l[i]) * k[i ^ m];
      break;
    }
    case GateKind::RZ: {
      const std::size_t m = std::size_t{1} << gate.q0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double sign = (i & m) ? -1.0 : 1.0;
        acc += std::conj(l[i]) * (sign * k[i]);
      }
      break;
    }
    case GateKind::RZZ: {
      const std::size_t mask =
          (std::size_t{1} << gate.q0) | (std::size_t{1} << gate.q1);
      for (std::size_t i = 0; i < dim; ++i) {
        const double sign = (std::popcount(i & mask) & 1) ? -1.0 : 1.0;
        acc += std::conj(l[i]) * (sign * k[i]);
      }
      break;
    }
    case GateKind::RXX: {
      const std::size_t mask =
          (std::size_t{1} << gate.q0) | (std::size_t{1} << gate.q1);
      for (std::size_t i = 0; i < dim; ++i)
        acc += std::conj(l[i]) * k[i ^ mask];
      break;
    }
    case GateKind::RYY: {
      const std::size_t mask =
          (std::size_t{1} << gate.q0) | (std::size_t{1} << gate.q1);
      for (std::size_t i = 0; i < dim; ++i) {
        // (YY k)[i] = -k[i^mask] when the two bits of i agree, +k otherwise.
        const double sign = (std::popcount(i & mask) & 1) ? 1.0 : -1.0;
        acc += std::conj(l[i]) * (sign * k[i ^ mask]);
      }
      break;
    }
  }
  return acc;
}

}  // namespace nnvqe
