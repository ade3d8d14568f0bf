#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nnvqe/circuit.hpp"
#include "nnvqe/encoder.hpp"
#include "nnvqe/error.hpp"
#include "nnvqe/exact.hpp"
#include "nnvqe/parallel.hpp"
#include "nnvqe/pauli.hpp"
#include "nnvqe/state.hpp"

namespace nnvqe {

inline double fidelity(const StateVector& a, const StateVector& b) {
  const cx ov = inner_product(a, b);
  return std::norm(ov);
}

/// Overlap with the whole (possibly degenerate) ground space: sum of
/// |<psi|g_j>|^2 over the near-degenerate eigenvectors. Collapses to the
/// plain fidelity when the ground state is unique.
inline double ground_space_fidelity(const StateVector& psi,
                                    const GroundSpace& gs) {
  double f = 0.0;
  for (const StateVector& g : gs.basis) f += std::norm(inner_product(psi, g));
  return f;
}

inline double relative_error(double predicted, double exact) {
  if (std::abs(exact) < 1e-6)
    throw numeric_error("relative_error: |exact| < 1e-6, denominator unusable");
  return std::abs(predicted - exact) / std::abs(exact);
}

inline double parameter_update_magnitude(const std::vector<double>& prev,
                                         const std::vector<double>& curr) {
  if (prev.size() != curr.size())
    throw structural_error("parameter_update_magnitude: length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < prev.size(); ++k)
    s += std::abs(curr[k] - prev[k]);
  return s;
}

struct EvalRecord {
  std::vector<double> point;
  double e_pred = 0.0;
  double e_exact = 0.0;
  double rel_err = 0.0;
  double fidelity = 0.0;
  double variance = 0.0;
};

/// Eval-mode sweep of a trained encoder over a test grid. Exact references
/// come from (and are memoized in) the cache; the encoder runs without
/// dropout. Parallel across points, output order = grid order.
inline std::vector<EvalRecord> evaluate_on_grid(
    const Circuit& circuit, const Encoder& enc, ExactCache& exact,
    const std::vector<std::vector<double>>& grid) {
  std::vector<EvalRecord> records(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const std::vector<double>& pt = grid[i];
    const PauliSum h = exact.family().at(pt);
    const std::vector<double> theta = encoder_forward(enc, pt);
    const StateVector psi = evaluate_circuit(circuit, theta);
    const auto gs = exact.at(pt);

    EvalRecord& r = records[i];
    r.point = pt;
    r.e_pred = expectation(psi, h);
    r.e_exact = gs->energy;
    r.rel_err = relative_error(r.e_pred, r.e_exact);
    r.fidelity = ground_space_fidelity(psi, *gs);
    r.variance = variance(psi, h);
  });
  return records;
}

inline double max_rel_err(const std::vector<EvalRecord>& records) {
  double m = 0.0;
  for (const EvalRecord& r : records) m = std::max(m, r.rel_err);
  return m;
}

inline double median_rel_err(std::vector<EvalRecord> records) {
  std::vector<double> errs;
  errs.reserve(records.size());
  for (const EvalRecord& r : records) errs.push_back(r.rel_err);
  std::sort(errs.begin(), errs.end());
  const std::size_t n = errs.size();
  if (n == 0) throw usage_error("median_rel_err: empty record list");
  return (n % 2) ? errs[n / 2] : 0.5 * (errs[n / 2 - 1] + errs[n / 2]);
}

/// Angle trajectories over a one-parameter grid: for each grid point, the
/// eval-mode angles and their cosines, one column pair per parameter slot.
struct ParamDump {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline ParamDump dump_circuit_parameters(
    const Circuit& circuit, const Encoder& enc,
    const std::vector<std::vector<double>>& grid) {
  ParamDump dump;
  dump.columns.push_back("delta");
  for (int k = 0; k < circuit.n_params; ++k)
    dump.columns.push_back("theta_" + std::to_string(k));
  for (int k = 0; k < circuit.n_params; ++k)
    dump.columns.push_back("cos_theta_" + std::to_string(k));

  dump.rows.reserve(grid.size());
  for (const auto& pt : grid) {
    const std::vector<double> theta = encoder_forward(enc, pt);
    std::vector<double> row;
    row.reserve(1 + 2 * theta.size());
    row.push_back(pt.front());
    for (double t : theta) row.push_back(t);
    for (double t : theta) row.push_back(std::cos(t));
    dump.rows.push_back(std::move(row));
  }
  return dump;
}

}  // namespace nnvqe
