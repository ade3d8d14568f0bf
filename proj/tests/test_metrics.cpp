#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nnvqe/experiment.hpp"
#include "nnvqe/metrics.hpp"
#include "nnvqe/train.hpp"
#include "oracles.hpp"

using namespace nnvqe;

TEST_CASE("state overlap fidelity", "[metrics]") {
  StateVector a = StateVector::zero(3);
  a.amp[0] = 1.0;
  StateVector b = StateVector::zero(3);
  b.amp[0] = 0.0;
  b.amp[5] = 1.0;

  CHECK(fidelity(a, a) == Catch::Approx(1.0));
  CHECK(fidelity(a, b) == Catch::Approx(0.0).margin(1e-15));

  // Phase never matters.
  StateVector c = a;
  c.amp[0] = cx(0.0, 1.0);
  CHECK(fidelity(a, c) == Catch::Approx(1.0));

  StateVector d = StateVector::zero(2);
  d.amp[0] = 1.0;
  CHECK_THROWS_AS(fidelity(a, d), structural_error);
}

TEST_CASE("projector fidelity handles degenerate ground spaces",
          "[metrics]") {
  // Zero-field ferromagnet: |0000> and |1111> are degenerate minima.
  const GroundSpace gs = exact_ground_space(build_xxz(4, -2.0, 0.0));
  REQUIRE(gs.basis.size() >= 2);

  StateVector up = StateVector::zero(4);
  up.amp[0] = 1.0;
  CHECK(ground_space_fidelity(up, gs) == Catch::Approx(1.0).margin(1e-9));

  StateVector cat = StateVector::zero(4);
  cat.amp[0] = std::sqrt(0.5);
  cat.amp[15] = -std::sqrt(0.5);
  CHECK(ground_space_fidelity(cat, gs) == Catch::Approx(1.0).margin(1e-9));

  StateVector wrong = StateVector::zero(4);
  wrong.amp[0] = 0.0;
  wrong.amp[1] = 1.0;  // single flipped spin, an excited state
  CHECK(ground_space_fidelity(wrong, gs) < 0.1);
}

TEST_CASE("relative error guards the denominator", "[metrics]") {
  CHECK(relative_error(-9.0, -10.0) == Catch::Approx(0.1));
  CHECK(relative_error(5.0, 5.0) == 0.0);
  CHECK_THROWS_AS(relative_error(1.0, 1e-9), numeric_error);
}

TEST_CASE("parameter update magnitude is an l1 distance", "[metrics]") {
  CHECK(parameter_update_magnitude({0.0, 0.0}, {0.5, -0.5}) ==
        Catch::Approx(1.0));
  CHECK(parameter_update_magnitude({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK_THROWS_AS(parameter_update_magnitude({1.0}, {1.0, 2.0}),
                  structural_error);
}

TEST_CASE("grid evaluation is ordered, bounded and variational",
          "[metrics]") {
  TrainConfig cfg;
  cfg.family = xxz_family(4, 0.75);
  cfg.circuit = build_hea(4, 1);
  cfg.encoder = EncoderSpec{EncoderKind::MLP, 1, 8, cfg.circuit.n_params, 0.0};
  cfg.train_points = grid1d(linspace(-2.0, 2.0, 5));
  cfg.max_epochs = 150;
  cfg.lr.initial = 0.02;
  cfg.seed = 8;
  const TrainedModel m = train(cfg);

  ExactCache exact(cfg.family);
  const auto grid = grid1d(linspace(-2.0, 2.0, 11));
  const auto records = evaluate_on_grid(cfg.circuit, m.encoder, exact, grid);

  REQUIRE(records.size() == 11);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EvalRecord& r = records[i];
    REQUIRE(r.point == grid[i]);
    CHECK(r.e_pred >= r.e_exact - 1e-8);
    CHECK(r.rel_err == Catch::Approx(std::abs(r.e_pred - r.e_exact) /
                                     std::abs(r.e_exact)));
    CHECK(r.fidelity >= 0.0);
    CHECK(r.fidelity <= 1.0 + 1e-10);
    CHECK(r.variance >= 0.0);
  }

  // Training went somewhere useful: high fidelity implies low energy error.
  for (const EvalRecord& r : records)
    if (r.fidelity > 0.999) CHECK(r.rel_err < 0.02);
}

TEST_CASE("summary statistics over records", "[metrics]") {
  std::vector<EvalRecord> recs(4);
  recs[0].rel_err = 0.4;
  recs[1].rel_err = 0.1;
  recs[2].rel_err = 0.3;
  recs[3].rel_err = 0.2;
  CHECK(max_rel_err(recs) == Catch::Approx(0.4));
  CHECK(median_rel_err(recs) == Catch::Approx(0.25));

  recs.resize(3);
  CHECK(median_rel_err(recs) == Catch::Approx(0.3));
  CHECK_THROWS_AS(median_rel_err({}), usage_error);
  CHECK(max_rel_err({}) == 0.0);
}

TEST_CASE("angle dump layout and linear-encoder structure", "[metrics]") {
  const Circuit circuit = build_hea(4, 1);
  const EncoderSpec spec{EncoderKind::AFFINE, 1, 0, circuit.n_params, 0.0};
  const Encoder enc = init_encoder(spec, 44);

  const auto grid = grid1d(linspace(-3.0, 3.0, 21));
  const ParamDump dump = dump_circuit_parameters(circuit, enc, grid);

  REQUIRE(dump.columns.size() == 1 + 2 * 32);
  CHECK(dump.columns[0] == "delta");
  CHECK(dump.columns[1] == "theta_0");
  CHECK(dump.columns[33] == "cos_theta_0");
  REQUIRE(dump.rows.size() == 21);

  // Affine angles are exactly linear in delta: vanishing second differences.
  const double h = grid[1][0] - grid[0][0];
  for (int k = 1; k <= 32; ++k) {
    for (std::size_t r = 1; r + 1 < dump.rows.size(); ++r) {
      const double second = dump.rows[r + 1][k] - 2 * dump.rows[r][k] +
                            dump.rows[r - 1][k];
      REQUIRE(std::abs(second) < 1e-12 * std::max(1.0, std::abs(h)));
    }
  }

  // Cosine columns really are cosines of the angle columns.
  for (std::size_t r = 0; r < dump.rows.size(); ++r)
    for (int k = 1; k <= 32; ++k)
      REQUIRE(dump.rows[r][32 + k] ==
              Catch::Approx(std::cos(dump.rows[r][k])).margin(1e-15));
}

TEST_CASE("network encoders bend where linear ones cannot", "[metrics]") {
  const Circuit circuit = build_hea(4, 1);
  const auto grid = grid1d(linspace(-3.0, 3.0, 31));

  const Encoder affine = init_encoder(
      EncoderSpec{EncoderKind::AFFINE, 1, 0, circuit.n_params, 0.0}, 15);
  const Encoder mlp = init_encoder(
      EncoderSpec{EncoderKind::MLP, 1, 16, circuit.n_params, 0.0}, 15);

  auto max_second_difference = [&](const Encoder& enc) {
    const ParamDump dump = dump_circuit_parameters(circuit, enc, grid);
    double worst = 0.0;
    for (std::size_t k = 1; k <= static_cast<std::size_t>(circuit.n_params);
         ++k)
      for (std::size_t r = 1; r + 1 < dump.rows.size(); ++r)
        worst = std::max(worst,
                         std::abs(dump.rows[r + 1][k] - 2 * dump.rows[r][k] +
                                  dump.rows[r - 1][k]));
    return worst;
  };

  const double bend_affine = max_second_difference(affine);
  const double bend_mlp = max_second_difference(mlp);
  CHECK(bend_mlp > 10.0 * std::max(bend_affine, 1e-14));
}

TEST_CASE("direct encoders give constant angle columns", "[metrics]") {
  const Circuit circuit = build_hea(4, 1);
  const Encoder enc = init_encoder(
      EncoderSpec{EncoderKind::DIRECT, 1, 0, circuit.n_params, 0.0}, 3);
  const ParamDump dump =
      dump_circuit_parameters(circuit, enc, grid1d(linspace(-2.0, 2.0, 7)));
  for (int k = 1; k <= circuit.n_params; ++k)
    for (const auto& row : dump.rows)
      REQUIRE(row[k] == dump.rows[0][k]);
}
