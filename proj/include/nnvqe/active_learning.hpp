#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <vector>

#include "nnvqe/error.hpp"
#include "nnvqe/exact.hpp"
#include "nnvqe/metrics.hpp"
#include "nnvqe/parallel.hpp"
#include "nnvqe/rng.hpp"
#include "nnvqe/train.hpp"

namespace nnvqe {

struct ScoreParts {
  double variance_term = 0.0;
  double distance_term = 0.0;
  double score = 0.0;
};

/// Acquisition score for every pool point: energy variance of the encoded
/// state plus mu times the Euclidean distance to the nearest selected point.
/// High variance flags a poorly modeled Hamiltonian; the distance term keeps
/// the selection spread out.
inline std::vector<ScoreParts> acquisition_scores(
    const Circuit& circuit, const Encoder& enc, const HamiltonianFamily& family,
    const std::vector<std::vector<double>>& pool,
    const std::vector<std::vector<double>>& selected, double mu) {
  if (selected.empty())
    throw usage_error("acquisition_scores: selected set is empty");

  std::vector<ScoreParts> scores(pool.size());
  parallel_for(pool.size(), [&](std::size_t i) {
    const std::vector<double>& pt = pool[i];
    const std::vector<double> theta = encoder_forward(enc, pt);
    const StateVector psi = evaluate_circuit(circuit, theta);

    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& sel : selected) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < pt.size(); ++k) {
        const double d = pt[k] - sel[k];
        d2 += d * d;
      }
      dmin = std::min(dmin, std::sqrt(d2));
    }

    ScoreParts& s = scores[i];
    s.variance_term = variance(psi, family.at(pt));
    s.distance_term = mu * dmin;
    s.score = s.variance_term + s.distance_term;
  });
  return scores;
}

struct ActiveLearnConfig {
  TrainConfig train;  // per-round training template; its train_points are
                      // replaced by the selected set each round
  std::vector<std::vector<double>> pool;
  std::vector<std::vector<double>> test_grid;
  double mu = 6.0;
  double stop_threshold = 5e-3;
  int max_points = 15;
  bool cold_start = false;  // ablation: re-initialize weights every round
};

struct RoundRecord {
  int round = 0;
  std::vector<double> added_point;
  double score = 0.0;          // zero for the random round-0 pick
  double variance_term = 0.0;
  double distance_term = 0.0;
  double test_max_rel_err = 0.0;
};

struct ActiveLearnResult {
  std::vector<std::vector<double>> selected;  // acquisition order
  std::vector<RoundRecord> rounds;
  TrainedModel model;
};

/// Iterative training-set construction. Round 0 trains on one uniformly
/// random pool point; each later round adds the unselected pool point with
/// the highest acquisition score (ties: lowest pool index) and retrains,
/// warm-starting from the previous round's weights unless cold_start is set.
/// Stops once the max test-grid relative error falls below the threshold or
/// the selected set reaches max_points.
inline ActiveLearnResult active_learn(const ActiveLearnConfig& cfg,
                                      ExactCache& exact) {
  if (cfg.pool.empty()) throw config_error("active_learn: empty pool");
  if (cfg.test_grid.empty()) throw config_error("active_learn: empty test grid");
  if (cfg.max_points < 1)
    throw config_error("active_learn: max_points must be >= 1");
  if (cfg.mu < 0.0) throw config_error("active_learn: mu must be >= 0");

  ActiveLearnResult out;
  std::set<std::size_t> picked;

  Rng pick_rng(substream(cfg.train.seed, 0, 1));
  const std::size_t first = pick_rng.below(cfg.pool.size());
  picked.insert(first);
  out.selected.push_back(cfg.pool[first]);

  ScoreParts added_score;  // score of the most recently added point
  std::vector<double> warm_weights;
  for (int round = 0;; ++round) {
    TrainConfig round_cfg = cfg.train;
    round_cfg.train_points = out.selected;
    if (cfg.cold_start) {
      round_cfg.initial_weights =
          init_encoder(cfg.train.encoder, substream(cfg.train.seed, 0, 2 + round))
              .weights;
    } else if (!warm_weights.empty()) {
      round_cfg.initial_weights = warm_weights;
    }
    out.model = train(round_cfg);
    warm_weights = out.model.encoder.weights;

    const auto records = evaluate_on_grid(cfg.train.circuit, out.model.encoder,
                                          exact, cfg.test_grid);
    const double tmre = max_rel_err(records);

    RoundRecord& rec = out.rounds.emplace_back();
    rec.round = round;
    rec.added_point = out.selected.back();
    rec.test_max_rel_err = tmre;
    if (round > 0) {
      rec.score = added_score.score;
      rec.variance_term = added_score.variance_term;
      rec.distance_term = added_score.distance_term;
    }

    if (tmre < cfg.stop_threshold) break;
    if (static_cast<int>(out.selected.size()) >= cfg.max_points) break;

    const auto scores = acquisition_scores(cfg.train.circuit, out.model.encoder,
                                           exact.family(), cfg.pool,
                                           out.selected, cfg.mu);
    std::size_t best = cfg.pool.size();
    for (std::size_t i = 0; i < cfg.pool.size(); ++i) {
      if (picked.count(i)) continue;
      if (best == cfg.pool.size() || scores[i].score > scores[best].score)
        best = i;
    }
    if (best == cfg.pool.size()) break;  // pool exhausted

    picked.insert(best);
    out.selected.push_back(cfg.pool[best]);
    added_score = scores[best];
  }
  return out;
}

}  // namespace nnvqe
