#pragma once

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "nnvqe/error.hpp"
#include "nnvqe/pauli.hpp"
#include "nnvqe/xxz.hpp"

namespace nnvqe {

/// Dense 2^n x 2^n matrix of a Pauli sum. Capped at n = 14 (the dense solver
/// is the reference oracle; anything larger is out of this toolkit's scope).
inline Eigen::MatrixXcd to_dense(const PauliSum& h) {
  if (h.n_qubits > 14)
    throw resource_error("to_dense: dense form capped at 14 qubits, got " +
                         std::to_string(h.n_qubits));
  const std::size_t dim = std::size_t{1} << h.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (const PauliString& term : h.terms) {
    const auto mk = detail::term_masks(term);
    for (std::size_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(b & mk.phase) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ mk.flip), static_cast<Eigen::Index>(b)) +=
          mk.prefactor * sign;
    }
  }
  return m;
}

/// Lowest eigenvalue with an orthonormal basis of every eigenvector within
/// 1e-8 of it. The basis matters wherever the ground state is degenerate
/// (e.g. the zero-field ferromagnetic region): overlaps must be taken against
/// the whole subspace, not one arbitrary member.
struct GroundSpace {
  double energy = 0.0;
  std::vector<StateVector> basis;
};

inline GroundSpace exact_ground_space(const PauliSum& h) {
  const Eigen::MatrixXcd m = to_dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success)
    throw numeric_error("exact_ground_space: eigensolver did not converge");
  const auto& evals = es.eigenvalues();
  const auto& evecs = es.eigenvectors();

  GroundSpace gs;
  gs.energy = evals(0);
  for (Eigen::Index j = 0; j < evals.size(); ++j) {
    if (evals(j) > gs.energy + 1e-8) break;
    StateVector v;
    v.n_qubits = h.n_qubits;
    v.amp.assign(evecs.col(j).data(), evecs.col(j).data() + evecs.rows());
    gs.basis.push_back(std::move(v));
  }

  // eigen-residual check on the representative vector
  const Eigen::Map<const Eigen::VectorXcd> v0(gs.basis.front().amp.data(),
                                              m.rows());
  const double residual = (m * v0 - gs.energy * v0).norm();
  if (residual > 1e-8)
    throw numeric_error("exact_ground_space: eigen-residual " +
                        std::to_string(residual));
  return gs;
}

/// Minimal eigenvalue and one corresponding normalized eigenvector.
inline std::pair<double, StateVector> exact_ground_state(const PauliSum& h) {
  GroundSpace gs = exact_ground_space(h);
  return {gs.energy, std::move(gs.basis.front())};
}

/// Ground-space cache for one Hamiltonian family, keyed by parameter point.
/// Solving is serialized; lookups hand out shared snapshots.
class ExactCache {
 public:
  explicit ExactCache(HamiltonianFamily family) : family_(std::move(family)) {}

  std::shared_ptr<const GroundSpace> at(const std::vector<double>& point) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(point);
      if (it != cache_.end()) return it->second;
    }
    auto solved = std::make_shared<const GroundSpace>(
        exact_ground_space(family_.at(point)));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = cache_.emplace(point, std::move(solved));
    return it->second;
  }

  const HamiltonianFamily& family() const { return family_; }

 private:
  HamiltonianFamily family_;
  std::map<std::vector<double>, std::shared_ptr<const GroundSpace>> cache_;
  std::mutex mutex_;
};

}  // namespace nnvqe
