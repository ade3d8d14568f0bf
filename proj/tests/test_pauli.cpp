#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nnvqe/pauli.hpp"
#include "nnvqe/xxz.hpp"
#include "oracles.hpp"

using namespace nnvqe;

TEST_CASE("expectation matches dense oracle on random operators", "[pauli][oracle]") {
  const int n = 4;
  PauliSum h;
  h.n_qubits = n;
  h.add(0.7, {{0, PauliOp::X}, {2, PauliOp::Y}});
  h.add(-1.2, {{1, PauliOp::Z}});
  h.add(0.35, {{0, PauliOp::Y}, {1, PauliOp::Y}, {3, PauliOp::Z}});
  h.add(2.0, {});  // identity term

  const oracle::cmat hm = oracle::dense_hamiltonian(h);
  for (unsigned seed : {10u, 11u, 12u}) {
    const StateVector s = oracle::random_state(n, seed);
    const double expect = oracle::dense_expectation(oracle::to_cvec(s), hm);
    CHECK(expectation(s, h) == Catch::Approx(expect).margin(1e-12));
  }
}

TEST_CASE("apply_pauli_sum matches dense oracle", "[pauli][oracle]") {
  const int n = 3;
  PauliSum h;
  h.n_qubits = n;
  h.add(1.0, {{0, PauliOp::X}, {1, PauliOp::X}});
  h.add(1.0, {{0, PauliOp::Y}, {1, PauliOp::Y}});
  h.add(-0.8, {{2, PauliOp::Z}});

  const oracle::cmat hm = oracle::dense_hamiltonian(h);
  const StateVector s = oracle::random_state(n, 21);
  const oracle::cvec expect = oracle::matvec(hm, oracle::to_cvec(s));
  const StateVector got = apply_pauli_sum(s, h);
  for (std::size_t i = 0; i < got.dim(); ++i)
    CHECK(std::abs(got.amp[i] - expect[i]) < 1e-12);
}

TEST_CASE("variance matches dense oracle and is non-negative", "[pauli][oracle]") {
  const int n = 3;
  const PauliSum h = build_xxz(n, 1.3, 0.4);
  const oracle::cmat hm = oracle::dense_hamiltonian(h);
  for (unsigned seed = 50; seed < 60; ++seed) {
    const StateVector s = oracle::random_state(n, seed);
    const double expect = oracle::dense_variance(oracle::to_cvec(s), hm);
    const double got = variance(s, h);
    CHECK(got >= 0.0);
    CHECK(got == Catch::Approx(expect).margin(1e-10));
  }
}

TEST_CASE("variance vanishes on an eigenstate", "[pauli]") {
  // lambda-dominated XXZ: computational basis states are near-eigenstates
  // only in the trivial sense, so use a pure-Z operator where |b> is exact.
  PauliSum h;
  h.n_qubits = 3;
  h.add(0.9, {{0, PauliOp::Z}});
  h.add(-0.4, {{1, PauliOp::Z}, {2, PauliOp::Z}});
  StateVector s = new_zero_state(3);
  CHECK(variance(s, h) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("xxz term inventory", "[xxz]") {
  const int n = 8;
  const PauliSum h = build_xxz(n, 0.5, 0.75);
  REQUIRE(static_cast<int>(h.terms.size()) == 4 * n);

  // bond terms first (XX, YY, ZZ per bond), then n field terms
  int xx = 0, yy = 0, zz = 0, z = 0;
  for (const PauliString& t : h.terms) {
    int weight = 0;
    PauliOp kind = PauliOp::I;
    for (PauliOp op : t.ops)
      if (op != PauliOp::I) {
        ++weight;
        kind = op;
      }
    if (weight == 2 && kind == PauliOp::X) ++xx;
    if (weight == 2 && kind == PauliOp::Y) ++yy;
    if (weight == 2 && kind == PauliOp::Z) ++zz;
    if (weight == 1 && kind == PauliOp::Z) ++z;
  }
  CHECK(xx == n);
  CHECK(yy == n);
  CHECK(zz == n);
  CHECK(z == n);
}

TEST_CASE("xxz keeps zero-coefficient terms", "[xxz]") {
  const PauliSum h = build_xxz(4, 0.0, 0.0);
  CHECK(static_cast<int>(h.terms.size()) == 16);
}

TEST_CASE("xxz rejects short chains", "[xxz]") {
  CHECK_THROWS_AS(build_xxz(2, 1.0, 0.0), config_error);
}

TEST_CASE("xxz diagonal expectations by hand", "[xxz]") {
  // On |0...0>: each ZZ bond gives +delta, each Z gives +lambda, XX/YY flip.
  const int n = 8;
  StateVector zeros = new_zero_state(n);
  CHECK(expectation(zeros, build_xxz(n, 1.0, 1.25)) == Catch::Approx(18.0));

  // On |1...1>: ZZ bonds still +delta, Z terms flip sign.
  StateVector ones = new_zero_state(n);
  ones.amp[0] = 0.0;
  ones.amp[ones.dim() - 1] = 1.0;
  CHECK(expectation(ones, build_xxz(n, 1.0, 0.25)) == Catch::Approx(6.0));
}

TEST_CASE("xxz matches the dense oracle at n=4", "[xxz][oracle]") {
  const PauliSum h = build_xxz(4, -0.7, 1.1);
  const oracle::cmat hm = oracle::dense_hamiltonian(h);
  for (unsigned seed : {1u, 2u}) {
    const StateVector s = oracle::random_state(4, seed);
    CHECK(expectation(s, h) ==
          Catch::Approx(oracle::dense_expectation(oracle::to_cvec(s), hm))
              .margin(1e-12));
  }
}

TEST_CASE("family wrappers fix and expose parameters", "[xxz]") {
  const HamiltonianFamily one = xxz_family(4, 0.75);
  REQUIRE(one.param_dim() == 1);
  const HamiltonianFamily two = xxz_family_two_param(4);
  REQUIRE(two.param_dim() == 2);

  const PauliSum a = one.at({1.5});
  const PauliSum b = two.at({1.5, 0.75});
  REQUIRE(a.terms.size() == b.terms.size());
  for (std::size_t i = 0; i < a.terms.size(); ++i)
    CHECK(a.terms[i].coefficient == b.terms[i].coefficient);

  CHECK_THROWS_AS(one.at({1.0, 2.0}), structural_error);
}

TEST_CASE("ferromagnet/XY boundary is linear", "[xxz][phase]") {
  CHECK(phase_boundary_hs(1.5) == Catch::Approx(2.5));
  CHECK(phase_boundary_hs(-0.25) == Catch::Approx(0.75));
}

TEST_CASE("XY/antiferromagnet boundary series", "[xxz][phase]") {
  CHECK_THROWS_AS(phase_boundary_hc(0.5), std::domain_error);
  CHECK(phase_boundary_hc(1.0) == 0.0);

  // independent evaluation: literal sum over k = -40..39 without pairing
  for (double delta : {1.2, 1.7, 2.0, 2.46, 3.5}) {
    const double t = std::acosh(delta);
    double sum = 0.0;
    for (int k = -40; k < 40; ++k)
      sum += 1.0 / std::cosh(k_pi * k_pi * (1 + 2 * k) / (2.0 * t));
    const double expect = k_pi * std::sinh(t) / t * sum;
    CHECK(phase_boundary_hc(delta) == Catch::Approx(expect).epsilon(1e-12));
  }

  // monotone growth past the critical point
  double prev = 0.0;
  for (double delta = 1.1; delta < 4.0; delta += 0.1) {
    const double hc = phase_boundary_hc(delta);
    CHECK(hc > prev);
    prev = hc;
  }
}

TEST_CASE("hc crossing with the 0.75 field line sits near 2.46", "[xxz][phase]") {
  // bisect hc(delta) = 0.75
  double lo = 1.5, hi = 3.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phase_boundary_hc(mid) < 0.75 ? lo : hi) = mid;
  }
  CHECK(lo == Catch::Approx(2.46).margin(0.02));
}

TEST_CASE("operators on mismatched registers are rejected", "[pauli]") {
  const StateVector s = new_zero_state(3);
  const PauliSum h = build_xxz(4, 1.0, 0.0);
  CHECK_THROWS_AS(expectation(s, h), structural_error);
  CHECK_THROWS_AS(apply_pauli_sum(s, h), structural_error);
}
