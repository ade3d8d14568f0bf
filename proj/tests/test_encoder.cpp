#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "nnvqe/encoder.hpp"
#include "oracles.hpp"

using namespace nnvqe;

namespace {

EncoderSpec mlp_spec(int p, int h, int m, double dropout = 0.0) {
  EncoderSpec s;
  s.kind = EncoderKind::MLP;
  s.input_dim = p;
  s.hidden_dim = h;
  s.output_dim = m;
  s.dropout = dropout;
  return s;
}

EncoderSpec affine_spec(int p, int m) {
  EncoderSpec s;
  s.kind = EncoderKind::AFFINE;
  s.input_dim = p;
  s.output_dim = m;
  return s;
}

EncoderSpec direct_spec(int p, int m) {
  EncoderSpec s;
  s.kind = EncoderKind::DIRECT;
  s.input_dim = p;
  s.output_dim = m;
  return s;
}

}  // namespace

TEST_CASE("weight counts per encoder kind", "[encoder]") {
  CHECK(mlp_spec(1, 20, 124).n_weights() == (1 + 1) * 20 + (20 + 1) * 124);
  CHECK(mlp_spec(2, 40, 156).n_weights() == 3 * 40 + 41 * 156);
  CHECK(affine_spec(1, 64).n_weights() == 128);
  CHECK(affine_spec(3, 10).n_weights() == 40);
  CHECK(direct_spec(1, 96).n_weights() == 96);
}

TEST_CASE("spec validation", "[encoder]") {
  CHECK_THROWS_AS(mlp_spec(0, 4, 4).validate(), config_error);
  CHECK_THROWS_AS(mlp_spec(1, 0, 4).validate(), config_error);
  CHECK_THROWS_AS(mlp_spec(1, 4, 0).validate(), config_error);
  CHECK_THROWS_AS(mlp_spec(1, 4, 4, 1.0).validate(), config_error);
  CHECK_THROWS_AS(mlp_spec(1, 4, 4, -0.1).validate(), config_error);
  CHECK_NOTHROW(mlp_spec(1, 4, 4, 0.99).validate());

  EncoderSpec bad = affine_spec(1, 4);
  bad.dropout = 0.2;
  CHECK_THROWS_AS(bad.validate(), config_error);
}

TEST_CASE("initialization is gaussian and seed-stable", "[encoder]") {
  const EncoderSpec s = mlp_spec(1, 200, 100);
  const Encoder a = init_encoder(s, 42);
  const Encoder b = init_encoder(s, 42);
  const Encoder c = init_encoder(s, 43);

  REQUIRE(a.weights.size() == static_cast<std::size_t>(s.n_weights()));
  REQUIRE(a.weights == b.weights);
  REQUIRE(a.weights != c.weights);

  const double n = static_cast<double>(a.weights.size());
  const double mean =
      std::accumulate(a.weights.begin(), a.weights.end(), 0.0) / n;
  double var = 0.0;
  for (double w : a.weights) var += (w - mean) * (w - mean);
  var /= n;
  CHECK(std::abs(mean) < 0.003);
  CHECK(var == Catch::Approx(0.01).margin(0.002));
}

TEST_CASE("mlp forward against a hand computation", "[encoder]") {
  Encoder enc;
  enc.spec = mlp_spec(1, 2, 1);
  // [W1 | b1 | W2 | b2] = [2, -1 | 0.5, 0 | 1, 3 | -0.25]
  enc.weights = {2.0, -1.0, 0.5, 0.0, 1.0, 3.0, -0.25};

  const auto out = encoder_forward(enc, {0.3});
  const double expect =
      std::tanh(2.0 * 0.3 + 0.5) + 3.0 * std::tanh(-0.3) - 0.25;
  REQUIRE(out.size() == 1);
  CHECK(out[0] == Catch::Approx(expect).margin(1e-15));
}

TEST_CASE("affine forward is w x + b", "[encoder]") {
  Encoder enc;
  enc.spec = affine_spec(2, 2);
  enc.weights = {1.0, 2.0, 3.0, 4.0, 0.5, -0.5};  // rows (1,2),(3,4); bias
  const auto out = encoder_forward(enc, {2.0, -1.0});
  CHECK(out[0] == Catch::Approx(1.0 * 2 + 2.0 * -1 + 0.5));
  CHECK(out[1] == Catch::Approx(3.0 * 2 + 4.0 * -1 - 0.5));
}

TEST_CASE("direct forward returns the weights themselves", "[encoder]") {
  Encoder enc;
  enc.spec = direct_spec(1, 3);
  enc.weights = {0.1, -0.2, 0.3};
  CHECK(encoder_forward(enc, {5.0}) == enc.weights);
  CHECK_THROWS_AS(encoder_forward(enc, {1.0, 2.0}), structural_error);
}

TEST_CASE("backward matches finite differences", "[encoder][oracle]") {
  // Scalar loss L = sum_j c_j * theta_j probed by bumping each weight.
  Rng rng(substream(7));
  for (const EncoderSpec& s :
       {mlp_spec(2, 5, 3), affine_spec(2, 3), direct_spec(2, 3)}) {
    Encoder enc = init_encoder(s, 99);
    const std::vector<double> x = {0.4, -1.2};
    std::vector<double> c(s.output_dim);
    for (double& v : c) v = rng.uniform(-1.0, 1.0);

    EncoderCache cache;
    encoder_forward(enc, x, &cache);
    std::vector<double> grad(s.n_weights(), 0.0);
    encoder_backward(enc, cache, c, grad);

    const double step = 1e-6;
    for (int w = 0; w < s.n_weights(); ++w) {
      Encoder probe = enc;
      auto loss = [&](double delta) {
        probe.weights[w] = enc.weights[w] + delta;
        const auto th = encoder_forward(probe, x);
        double acc = 0.0;
        for (int j = 0; j < s.output_dim; ++j) acc += c[j] * th[j];
        return acc;
      };
      const double fd = (loss(step) - loss(-step)) / (2 * step);
      INFO(encoder_kind_name(s.kind) << " weight " << w);
      REQUIRE(grad[w] == Catch::Approx(fd).margin(1e-8));
    }
  }
}

TEST_CASE("dropout masks are inverted and stream-stable", "[encoder]") {
  Encoder enc = init_encoder(mlp_spec(1, 64, 4, 0.5), 10);
  const std::vector<double> x = {0.7};

  EncoderCache cache;
  Rng rng_a(substream(3, 1, 1));
  encoder_forward(enc, x, &cache, &rng_a);
  int dropped = 0;
  for (double mk : cache.mask) {
    REQUIRE((mk == 0.0 || mk == 2.0));
    dropped += mk == 0.0;
  }
  CHECK(dropped > 10);
  CHECK(dropped < 54);

  // Same substream reproduces the mask; another epoch tag differs.
  EncoderCache cache_b, cache_c;
  Rng rng_b(substream(3, 1, 1)), rng_c(substream(3, 1, 2));
  encoder_forward(enc, x, &cache_b, &rng_b);
  encoder_forward(enc, x, &cache_c, &rng_c);
  CHECK(cache.mask == cache_b.mask);
  CHECK(cache.mask != cache_c.mask);
}

TEST_CASE("evaluation mode ignores dropout entirely", "[encoder]") {
  Encoder enc = init_encoder(mlp_spec(1, 16, 8, 0.4), 5);
  const auto a = encoder_forward(enc, {1.1});
  const auto b = encoder_forward(enc, {1.1});
  REQUIRE(a == b);

  EncoderCache cache;
  encoder_forward(enc, {1.1}, &cache);
  for (double mk : cache.mask) REQUIRE(mk == 1.0);

  // Rate zero with an rng attached is also a plain pass.
  Encoder plain = init_encoder(mlp_spec(1, 16, 8, 0.0), 5);
  Rng rng(substream(2, 1, 1));
  const auto c = encoder_forward(plain, {1.1}, nullptr, &rng);
  CHECK(c == encoder_forward(plain, {1.1}));
}

TEST_CASE("backward under an active mask still matches differences",
          "[encoder][oracle]") {
  Encoder enc = init_encoder(mlp_spec(1, 6, 2, 0.5), 77);
  const std::vector<double> x = {-0.9};
  const std::vector<double> c = {0.8, -0.3};

  EncoderCache cache;
  Rng rng(substream(12, 2, 4));
  encoder_forward(enc, x, &cache, &rng);
  std::vector<double> grad(enc.spec.n_weights(), 0.0);
  encoder_backward(enc, cache, c, grad);

  const double step = 1e-6;
  for (int w = 0; w < enc.spec.n_weights(); ++w) {
    auto loss = [&](double delta) {
      Encoder probe = enc;
      probe.weights[w] += delta;
      Rng replay(substream(12, 2, 4));  // pin the same mask draw
      const auto th = encoder_forward(probe, x, nullptr, &replay);
      return c[0] * th[0] + c[1] * th[1];
    };
    const double fd = (loss(step) - loss(-step)) / (2 * step);
    REQUIRE(grad[w] == Catch::Approx(fd).margin(1e-8));
  }
}

TEST_CASE("checkpoints round-trip bit-exactly", "[encoder]") {
  const std::string path = "encoder_roundtrip.bin";
  Encoder enc = init_encoder(mlp_spec(2, 9, 5, 0.25), 321);
  enc.weights[3] = 1.0 / 3.0;  // value with a non-terminating binary print

  save_encoder(path, enc);
  const Encoder back = load_encoder(path);

  CHECK(back.spec.kind == enc.spec.kind);
  CHECK(back.spec.input_dim == enc.spec.input_dim);
  CHECK(back.spec.hidden_dim == enc.spec.hidden_dim);
  CHECK(back.spec.output_dim == enc.spec.output_dim);
  CHECK(back.spec.dropout == enc.spec.dropout);
  REQUIRE(back.weights.size() == enc.weights.size());
  for (std::size_t i = 0; i < enc.weights.size(); ++i)
    REQUIRE(back.weights[i] == enc.weights[i]);
  std::remove(path.c_str());
}

TEST_CASE("corrupt checkpoints are rejected", "[encoder]") {
  const std::string path = "encoder_corrupt.bin";
  {
    std::ofstream os(path, std::ios::binary);
    os << "not a checkpoint";
  }
  CHECK_THROWS_AS(load_encoder(path), resource_error);

  save_encoder(path, init_encoder(direct_spec(1, 4), 1));
  {
    std::ofstream os(path, std::ios::binary | std::ios::in);
    os.seekp(0);
    const std::uint32_t bad = 0xdeadbeefu;
    os.write(reinterpret_cast<const char*>(&bad), sizeof bad);
  }
  CHECK_THROWS_AS(load_encoder(path), resource_error);
  CHECK_THROWS_AS(load_encoder("no_such_file.bin"), resource_error);
  std::remove(path.c_str());
}
