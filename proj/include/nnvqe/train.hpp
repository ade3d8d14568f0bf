#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "nnvqe/adjoint.hpp"
#include "nnvqe/circuit.hpp"
#include "nnvqe/encoder.hpp"
#include "nnvqe/error.hpp"
#include "nnvqe/parallel.hpp"
#include "nnvqe/rng.hpp"
#include "nnvqe/xxz.hpp"

namespace nnvqe {

/// Step decay: rate(step) = initial * factor^floor(step / interval).
/// interval <= 0 or factor == 1 keeps the rate constant.
struct LrSchedule {
  double initial = 0.009;
  double factor = 1.0;
  int interval = 0;
};

inline double lr_at(const LrSchedule& s, int step) {
  if (s.interval <= 0 || s.factor == 1.0) return s.initial;
  return s.initial * std::pow(s.factor, step / s.interval);
}

struct AdamState {
  std::vector<double> m, v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

inline void adam_step(AdamState& st, std::vector<double>& weights,
                      const std::vector<double>& grad, double rate) {
  if (st.m.empty()) {
    st.m.assign(weights.size(), 0.0);
    st.v.assign(weights.size(), 0.0);
  }
  if (st.m.size() != weights.size() || grad.size() != weights.size())
    throw structural_error("adam_step: length mismatch");
  ++st.t;
  const double c1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.t));
  const double c2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.t));
  for (std::size_t k = 0; k < weights.size(); ++k) {
    st.m[k] = st.beta1 * st.m[k] + (1.0 - st.beta1) * grad[k];
    st.v[k] = st.beta2 * st.v[k] + (1.0 - st.beta2) * grad[k] * grad[k];
    const double mhat = st.m[k] / c1;
    const double vhat = st.v[k] / c2;
    weights[k] -= rate * mhat / (std::sqrt(vhat) + st.eps);
  }
}

struct EpochRecord {
  int epoch = 0;          // 0-based
  double cost = 0.0;      // summed energy before this epoch's update
  double lr = 0.0;
  double param_update = 0.0;  // sum_k |theta_k(e) - theta_k(e-1)| at the probe
};

struct TrainConfig {
  HamiltonianFamily family;
  Circuit circuit;
  EncoderSpec encoder;
  std::vector<std::vector<double>> train_points;
  int max_epochs = 1;
  LrSchedule lr;
  std::uint64_t seed = 0;
  std::vector<double> initial_weights;  // empty -> fresh N(0, 0.1^2) init
  std::function<void(const EpochRecord&)> observer;

  void validate() const {
    encoder.validate();
    if (encoder.output_dim != circuit.n_params)
      throw config_error("train: encoder output dim " +
                         std::to_string(encoder.output_dim) +
                         " != circuit parameter count " +
                         std::to_string(circuit.n_params));
    if (circuit.n_qubits != family.n_qubits)
      throw config_error("train: circuit and Hamiltonian qubit counts differ");
    if (max_epochs < 1) throw usage_error("train: max epochs must be >= 1");
    if (train_points.empty())
      throw usage_error("train: training set is empty");
    for (const auto& pt : train_points)
      if (static_cast<int>(pt.size()) != encoder.input_dim)
        throw config_error("train: training point dimension " +
                           std::to_string(pt.size()) +
                           " != encoder input dim " +
                           std::to_string(encoder.input_dim));
    if (!initial_weights.empty() &&
        static_cast<int>(initial_weights.size()) != encoder.n_weights())
      throw config_error("train: initial weight vector has wrong size");
  }
};

struct CostGrad {
  double cost = 0.0;
  std::vector<double> d_phi;
};

/// Summed energy and its weight gradient over the given subset of training
/// points. epoch >= 0 selects training mode: each point draws its dropout
/// mask from the stream (seed, point_index + 1, epoch + 1), so the result is
/// independent of evaluation order. epoch = -1 evaluates without dropout.
/// The reduction runs in ascending point order.
inline CostGrad cost_and_grad(const TrainConfig& cfg, const Encoder& enc,
                              const std::vector<std::size_t>& point_indices,
                              int epoch) {
  if (point_indices.empty())
    throw usage_error("cost_and_grad: empty point set");

  struct PerPoint {
    double energy = 0.0;
    std::vector<double> d_phi;
  };
  std::vector<PerPoint> parts(point_indices.size());

  parallel_for(point_indices.size(), [&](std::size_t slot) {
    const std::size_t i = point_indices[slot];
    const std::vector<double>& pt = cfg.train_points.at(i);

    EncoderCache cache;
    std::vector<double> theta;
    if (epoch >= 0 && enc.spec.dropout > 0.0) {
      Rng mask_rng(substream(cfg.seed, i + 1, static_cast<std::uint64_t>(epoch) + 1));
      theta = encoder_forward(enc, pt, &cache, &mask_rng);
    } else {
      theta = encoder_forward(enc, pt, &cache);
    }

    const PauliSum h = cfg.family.at(pt);
    EnergyGradient eg = adjoint_gradient(cfg.circuit, theta, h);

    parts[slot].energy = eg.energy;
    parts[slot].d_phi.assign(enc.spec.n_weights(), 0.0);
    encoder_backward(enc, cache, eg.grad, parts[slot].d_phi);
  });

  CostGrad out;
  out.d_phi.assign(enc.spec.n_weights(), 0.0);
  for (const PerPoint& p : parts) {
    out.cost += p.energy;
    for (std::size_t k = 0; k < out.d_phi.size(); ++k)
      out.d_phi[k] += p.d_phi[k];
  }
  return out;
}

/// Eval-mode circuit angles for one parameter point.
inline std::vector<double> probe_theta(const Encoder& enc,
                                       const std::vector<double>& point) {
  return encoder_forward(enc, point);
}

/// Eval-mode energy of the encoded state at one parameter point.
inline double eval_energy(const TrainConfig& cfg, const Encoder& enc,
                          const std::vector<double>& point) {
  const std::vector<double> theta = encoder_forward(enc, point);
  return expectation(evaluate_circuit(cfg.circuit, theta), cfg.family.at(point));
}

struct TrainedModel {
  Encoder encoder;
  std::vector<EpochRecord> history;
};

/// Full-batch pre-training: one cost_and_grad over every training point and
/// one Adam update per epoch. The parameter-update column tracks the
/// eval-mode angles at the first training point, with the initial encoder
/// output as the epoch "-1" reference.
inline TrainedModel train(const TrainConfig& cfg) {
  cfg.validate();

  TrainedModel model;
  if (cfg.initial_weights.empty()) {
    model.encoder = init_encoder(cfg.encoder, cfg.seed);
  } else {
    model.encoder.spec = cfg.encoder;
    model.encoder.weights = cfg.initial_weights;
  }

  std::vector<std::size_t> all(cfg.train_points.size());
  std::iota(all.begin(), all.end(), std::size_t{0});

  std::vector<double> probe_prev = probe_theta(model.encoder, cfg.train_points[0]);
  AdamState adam;
  model.history.reserve(cfg.max_epochs);

  for (int e = 0; e < cfg.max_epochs; ++e) {
    CostGrad cg = cost_and_grad(cfg, model.encoder, all, e);
    if (!std::isfinite(cg.cost))
      throw numeric_error("train: non-finite cost at epoch " + std::to_string(e));

    const double rate = lr_at(cfg.lr, e);
    adam_step(adam, model.encoder.weights, cg.d_phi, rate);

    std::vector<double> probe_now = probe_theta(model.encoder, cfg.train_points[0]);
    double update = 0.0;
    for (std::size_t k = 0; k < probe_now.size(); ++k)
      update += std::abs(probe_now[k] - probe_prev[k]);
    probe_prev = std::move(probe_now);

    EpochRecord rec{e, cg.cost, rate, update};
    model.history.push_back(rec);
    if (cfg.observer) cfg.observer(rec);
  }
  return model;
}

/// NN-VQE run plus the plain-VQE control. The control trains the circuit
/// angles directly, starting from the NN's initial eval-mode output at the
/// first training point so both begin at the same circuit.
struct PairedRun {
  TrainedModel nn;
  TrainedModel direct;
};

inline PairedRun train_with_direct_baseline(const TrainConfig& cfg) {
  cfg.validate();

  PairedRun out;
  TrainConfig nn_cfg = cfg;
  if (nn_cfg.initial_weights.empty())
    nn_cfg.initial_weights = init_encoder(cfg.encoder, cfg.seed).weights;
  out.nn = train(nn_cfg);

  Encoder initial{cfg.encoder, nn_cfg.initial_weights};
  TrainConfig direct_cfg = cfg;
  direct_cfg.encoder = EncoderSpec{EncoderKind::DIRECT, cfg.encoder.input_dim,
                                   0, cfg.circuit.n_params, 0.0};
  direct_cfg.initial_weights = probe_theta(initial, cfg.train_points[0]);
  out.direct = train(direct_cfg);
  return out;
}

/// Fraction of independent trials whose final relative error at the (single)
/// training point drops below the threshold within the epoch budget, for
/// NN-VQE and the plain-VQE control. Trial seeds derive from cfg.seed.
struct ConvergenceRates {
  double nn_rate = 0.0;
  double vqe_rate = 0.0;
};

inline ConvergenceRates convergence_rates(const TrainConfig& cfg,
                                          double exact_energy, int trials,
                                          double threshold) {
  if (trials < 1) throw usage_error("convergence_rates: trials must be >= 1");
  cfg.validate();

  const std::vector<double>& point = cfg.train_points.front();
  auto rel_err = [&](const TrainedModel& m) {
    const double e = eval_energy(cfg, m.encoder, point);
    return std::abs(e - exact_energy) / std::abs(exact_energy);
  };

  int nn_hits = 0, vqe_hits = 0;
  for (int t = 0; t < trials; ++t) {
    TrainConfig trial_cfg = cfg;
    trial_cfg.seed = substream(cfg.seed, static_cast<std::uint64_t>(t) + 1, 0);
    trial_cfg.initial_weights.clear();
    PairedRun run = train_with_direct_baseline(trial_cfg);
    if (rel_err(run.nn) < threshold) ++nn_hits;
    if (rel_err(run.direct) < threshold) ++vqe_hits;
  }
  return {static_cast<double>(nn_hits) / trials,
          static_cast<double>(vqe_hits) / trials};
}

}  // namespace nnvqe
