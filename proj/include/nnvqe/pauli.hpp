#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "nnvqe/error.hpp"
#include "nnvqe/state.hpp"

namespace nnvqe {

enum class PauliOp : std::uint8_t { I, X, Y, Z };

/// Tensor product of single-qubit Paulis with a real weight.
struct PauliString {
  std::vector<PauliOp> ops;  // one entry per qubit
  double coefficient = 0.0;
};

/// Weighted sum of Pauli strings on a fixed register. Real coefficients on
/// Pauli strings make the operator Hermitian by construction.
struct PauliSum {
  int n_qubits = 0;
  std::vector<PauliString> terms;

  void add(double coefficient,
           std::initializer_list<std::pair<int, PauliOp>> factors) {
    PauliString t;
    t.coefficient = coefficient;
    t.ops.assign(static_cast<std::size_t>(n_qubits), PauliOp::I);
    for (const auto& [q, op] : factors) {
      if (q < 0 || q >= n_qubits)
        throw structural_error("PauliSum::add: qubit index out of range");
      t.ops[static_cast<std::size_t>(q)] = op;
    }
    terms.push_back(std::move(t));
  }
};

namespace detail {

// Bitmask form of one Pauli string: P|b> = prefactor_sign(b) |b ^ flip> with
// prefactor = coefficient * i^(#Y) and sign(b) = (-1)^popcount(b & phase).
struct TermMasks {
  std::size_t flip = 0;
  std::size_t phase = 0;
  cx prefactor{0.0, 0.0};
};

inline TermMasks term_masks(const PauliString& t) {
  static constexpr cx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  TermMasks mk;
  int n_y = 0;
  for (std::size_t q = 0; q < t.ops.size(); ++q) {
    const std::size_t bit = std::size_t{1} << q;
    switch (t.ops[q]) {
      case PauliOp::I: break;
      case PauliOp::X: mk.flip |= bit; break;
      case PauliOp::Y: mk.flip |= bit; mk.phase |= bit; ++n_y; break;
      case PauliOp::Z: mk.phase |= bit; break;
    }
  }
  mk.prefactor = t.coefficient * i_pow[n_y & 3];
  return mk;
}

}  // namespace detail

/// <psi|H|psi>. The imaginary residue is checked (must be below 1e-8) and
/// discarded.
inline double expectation(const StateVector& state, const PauliSum& h) {
  if (state.n_qubits != h.n_qubits)
    throw structural_error("expectation: qubit count mismatch");
  const std::size_t dim = state.dim();
  const cx* a = state.amp.data();
  cx acc{0.0, 0.0};
  for (const PauliString& term : h.terms) {
    const auto mk = detail::term_masks(term);
    cx sum{0.0, 0.0};
    for (std::size_t j = 0; j < dim; ++j) {
      const std::size_t src = j ^ mk.flip;
      const double sign = (std::popcount(src & mk.phase) & 1) ? -1.0 : 1.0;
      sum += std::conj(a[j]) * (sign * a[src]);
    }
    acc += mk.prefactor * sum;
  }
  if (std::abs(acc.imag()) > 1e-8)
    throw numeric_error("expectation: imaginary residue " +
                        std::to_string(acc.imag()));
  return acc.real();
}

/// H|psi> as a (generally unnormalized) vector.
inline StateVector apply_pauli_sum(const StateVector& state, const PauliSum& h) {
  if (state.n_qubits != h.n_qubits)
    throw structural_error("apply_pauli_sum: qubit count mismatch");
  StateVector out;
  out.n_qubits = state.n_qubits;
  out.amp.assign(state.dim(), cx{0.0, 0.0});
  const cx* a = state.amp.data();
  cx* o = out.amp.data();
  for (const PauliString& term : h.terms) {
    const auto mk = detail::term_masks(term);
    for (std::size_t j = 0; j < state.dim(); ++j) {
      const std::size_t src = j ^ mk.flip;
      const double sign = (std::popcount(src & mk.phase) & 1) ? -1.0 : 1.0;
      o[j] += mk.prefactor * (sign * a[src]);
    }
  }
  return out;
}

/// <H^2> - <H>^2 for a normalized state, computed as <Hpsi|Hpsi> - <psi|H|psi>^2.
/// Tiny negative round-off is clamped to zero.
inline double variance(const StateVector& state, const PauliSum& h) {
  const StateVector hpsi = apply_pauli_sum(state, h);
  double h2 = 0.0;
  for (const cx& v : hpsi.amp) h2 += std::norm(v);
  const double e = inner_product(state, hpsi).real();
  const double var = h2 - e * e;
  return var < 0.0 ? 0.0 : var;
}

}  // namespace nnvqe
