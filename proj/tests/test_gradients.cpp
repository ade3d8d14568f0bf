#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nnvqe/adjoint.hpp"
#include "nnvqe/circuit.hpp"
#include "nnvqe/rng.hpp"
#include "nnvqe/xxz.hpp"
#include "oracles.hpp"

using namespace nnvqe;

namespace {

Circuit single_rx(int n_qubits, int q) {
  Circuit c;
  c.n_qubits = n_qubits;
  detail::push(c, GateKind::RX, q);
  return c;
}

double fd_mismatch(const Circuit& c, const std::vector<double>& angles,
                   const PauliSum& h) {
  const EnergyGradient adj = adjoint_gradient(c, angles, h);
  const std::vector<double> fd = finite_difference_gradient(c, angles, h);
  double scale = 1.0, diff = 0.0;
  for (int k = 0; k < c.n_params; ++k) {
    scale = std::max(scale, std::abs(fd[k]));
    diff = std::max(diff, std::abs(adj.grad[k] - fd[k]));
  }
  return diff / scale;
}

}  // namespace

TEST_CASE("single rotation has the textbook derivative", "[gradients]") {
  // <0| Rx(t)^dag Z Rx(t) |0> = cos t, so the slot derivative is -sin t.
  PauliSum h;
  h.n_qubits = 3;
  h.add(1.0, {{0, PauliOp::Z}});
  const Circuit c = single_rx(3, 0);

  for (double t : {0.0, 0.4, -1.3, 2.9}) {
    const EnergyGradient g = adjoint_gradient(c, {t}, h);
    INFO("t=" << t);
    CHECK(g.energy == Catch::Approx(std::cos(t)).margin(1e-12));
    CHECK(g.grad[0] == Catch::Approx(-std::sin(t)).margin(1e-12));
  }
}

TEST_CASE("adjoint energy equals direct expectation", "[gradients]") {
  const Circuit c = build_hea(4, 2);
  const PauliSum h = build_xxz(4, 1.3, 0.75);
  const std::vector<double> angles = oracle::random_angles(c.n_params, 21);

  const EnergyGradient g = adjoint_gradient(c, angles, h);
  const double direct = expectation(evaluate_circuit(c, angles), h);
  CHECK(g.energy == Catch::Approx(direct).margin(1e-12));
  CHECK(g.grad.size() == static_cast<std::size_t>(c.n_params));
}

TEST_CASE("adjoint matches central differences", "[gradients][oracle]") {
  Rng rng(substream(404));
  for (AnsatzKind kind : {AnsatzKind::HEA, AnsatzKind::MERA}) {
    const Circuit c = build_ansatz(kind, 4, 2);
    for (int trial = 0; trial < 5; ++trial) {
      const PauliSum h = build_xxz(4, rng.uniform(-3.0, 3.0), 0.75);
      std::vector<double> angles(c.n_params);
      for (double& a : angles) a = rng.uniform(-k_pi, k_pi);
      INFO(ansatz_name(kind) << " trial " << trial);
      CHECK(fd_mismatch(c, angles, h) < 1e-6);
    }
  }
}

TEST_CASE("gradient is linear in the operator", "[gradients]") {
  const Circuit c = build_hea(3, 1);
  const std::vector<double> angles = oracle::random_angles(c.n_params, 8);

  PauliSum h = build_xxz(3, 0.8, 0.2);
  PauliSum h2 = h;
  for (PauliString& t : h2.terms) t.coefficient *= 2.0;

  const EnergyGradient a = adjoint_gradient(c, angles, h);
  const EnergyGradient b = adjoint_gradient(c, angles, h2);
  for (int k = 0; k < c.n_params; ++k)
    REQUIRE(b.grad[k] == Catch::Approx(2.0 * a.grad[k]).margin(1e-12));
}

TEST_CASE("circuit state is untouched by differentiation", "[gradients]") {
  // adjoint_gradient works on its own copies; calling it twice in a row
  // must give bit-identical results.
  const Circuit c = build_mera(4, 1);
  const PauliSum h = build_xxz(4, -0.5, 0.75);
  const std::vector<double> angles = oracle::random_angles(c.n_params, 31);

  const EnergyGradient a = adjoint_gradient(c, angles, h);
  const EnergyGradient b = adjoint_gradient(c, angles, h);
  CHECK(a.energy == b.energy);
  for (int k = 0; k < c.n_params; ++k) REQUIRE(a.grad[k] == b.grad[k]);
}
