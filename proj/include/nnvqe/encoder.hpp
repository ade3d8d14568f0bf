#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "nnvqe/error.hpp"
#include "nnvqe/rng.hpp"

namespace nnvqe {

/// Classical map from Hamiltonian parameters to circuit angles.
///
///   MLP    theta = W2 * dropout(tanh(W1 x + b1)) + b2
///   AFFINE theta = W x + b
///   DIRECT theta = weights (input ignored; plain VQE)
enum class EncoderKind { MLP, AFFINE, DIRECT };

inline const char* encoder_kind_name(EncoderKind k) {
  switch (k) {
    case EncoderKind::MLP: return "mlp";
    case EncoderKind::AFFINE: return "affine";
    default: return "direct";
  }
}

struct EncoderSpec {
  EncoderKind kind = EncoderKind::MLP;
  int input_dim = 1;
  int hidden_dim = 0;   // MLP only
  int output_dim = 0;
  double dropout = 0.0; // MLP hidden layer only

  int n_weights() const {
    switch (kind) {
      case EncoderKind::MLP:
        return (input_dim + 1) * hidden_dim + (hidden_dim + 1) * output_dim;
      case EncoderKind::AFFINE:
        return (input_dim + 1) * output_dim;
      default:
        return output_dim;
    }
  }

  void validate() const {
    if (input_dim < 1 || output_dim < 1)
      throw config_error("encoder: input and output dims must be >= 1");
    if (kind == EncoderKind::MLP && hidden_dim < 1)
      throw config_error("encoder: mlp needs hidden_dim >= 1");
    if (dropout < 0.0 || dropout >= 1.0)
      throw config_error("encoder: dropout must lie in [0, 1)");
    if (kind != EncoderKind::MLP && dropout != 0.0)
      throw config_error("encoder: dropout only applies to the mlp kind");
  }
};

/// Weight layout is flat and fixed:
///   MLP    [W1 row-major (h x p), b1 (h), W2 row-major (m x h), b2 (m)]
///   AFFINE [W row-major (m x p), b (m)]
///   DIRECT [theta (m)]
struct Encoder {
  EncoderSpec spec;
  std::vector<double> weights;
};

/// All weights and biases drawn i.i.d. from N(0, 0.1^2).
inline Encoder init_encoder(const EncoderSpec& spec, std::uint64_t seed) {
  spec.validate();
  Encoder enc;
  enc.spec = spec;
  enc.weights.resize(spec.n_weights());
  Rng rng(substream(seed, 0, 0));
  for (double& w : enc.weights) w = rng.normal(0.0, 0.1);
  return enc;
}

/// Intermediates kept around for the backward pass.
struct EncoderCache {
  std::vector<double> input;
  std::vector<double> pre;     // W1 x + b1
  std::vector<double> hidden;  // mask .* tanh(pre)
  std::vector<double> mask;    // inverted-dropout factors, 1.0 when inactive
};

/// Forward pass. Dropout fires only when an rng is supplied (training mode)
/// and the rate is nonzero; kept units are scaled by 1/(1-rate) so the
/// evaluation pass needs no rescaling.
inline std::vector<double> encoder_forward(const Encoder& enc,
                                           const std::vector<double>& x,
                                           EncoderCache* cache = nullptr,
                                           Rng* dropout_rng = nullptr) {
  const EncoderSpec& s = enc.spec;
  if (static_cast<int>(x.size()) != s.input_dim)
    throw structural_error("encoder_forward: expected " +
                           std::to_string(s.input_dim) + " inputs, got " +
                           std::to_string(x.size()));
  if (static_cast<int>(enc.weights.size()) != s.n_weights())
    throw structural_error("encoder_forward: weight vector has wrong size");

  if (s.kind == EncoderKind::DIRECT) {
    if (cache) cache->input = x;
    return enc.weights;
  }

  const double* w = enc.weights.data();
  if (s.kind == EncoderKind::AFFINE) {
    const double* bias = w + s.output_dim * s.input_dim;
    std::vector<double> out(s.output_dim);
    for (int j = 0; j < s.output_dim; ++j) {
      double acc = bias[j];
      for (int i = 0; i < s.input_dim; ++i) acc += w[j * s.input_dim + i] * x[i];
      out[j] = acc;
    }
    if (cache) cache->input = x;
    return out;
  }

  const int p = s.input_dim, h = s.hidden_dim, m = s.output_dim;
  const double* w1 = w;
  const double* b1 = w1 + h * p;
  const double* w2 = b1 + h;
  const double* b2 = w2 + m * h;

  std::vector<double> pre(h), hidden(h), mask(h, 1.0);
  for (int k = 0; k < h; ++k) {
    double acc = b1[k];
    for (int i = 0; i < p; ++i) acc += w1[k * p + i] * x[i];
    pre[k] = acc;
    hidden[k] = std::tanh(acc);
  }
  if (dropout_rng && s.dropout > 0.0) {
    const double keep = 1.0 - s.dropout;
    for (int k = 0; k < h; ++k) {
      mask[k] = (dropout_rng->uniform() < keep) ? 1.0 / keep : 0.0;
      hidden[k] *= mask[k];
    }
  }

  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) {
    double acc = b2[j];
    for (int k = 0; k < h; ++k) acc += w2[j * h + k] * hidden[k];
    out[j] = acc;
  }

  if (cache) {
    cache->input = x;
    cache->pre = std::move(pre);
    cache->hidden = std::move(hidden);
    cache->mask = std::move(mask);
  }
  return out;
}

/// Accumulate d(cost)/d(weights) given d(cost)/d(theta), reusing the cached
/// forward intermediates. grad_w must already have n_weights() entries.
inline void encoder_backward(const Encoder& enc, const EncoderCache& cache,
                             const std::vector<double>& grad_theta,
                             std::vector<double>& grad_w) {
  const EncoderSpec& s = enc.spec;
  if (static_cast<int>(grad_theta.size()) != s.output_dim)
    throw structural_error("encoder_backward: grad_theta has wrong size");
  if (static_cast<int>(grad_w.size()) != s.n_weights())
    throw structural_error("encoder_backward: grad_w has wrong size");

  if (s.kind == EncoderKind::DIRECT) {
    for (int j = 0; j < s.output_dim; ++j) grad_w[j] += grad_theta[j];
    return;
  }

  if (s.kind == EncoderKind::AFFINE) {
    const int p = s.input_dim, m = s.output_dim;
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < p; ++i)
        grad_w[j * p + i] += grad_theta[j] * cache.input[i];
      grad_w[m * p + j] += grad_theta[j];
    }
    return;
  }

  const int p = s.input_dim, h = s.hidden_dim, m = s.output_dim;
  const double* w2 = enc.weights.data() + h * p + h;
  double* gw1 = grad_w.data();
  double* gb1 = gw1 + h * p;
  double* gw2 = gb1 + h;
  double* gb2 = gw2 + m * h;

  std::vector<double> ghid(h, 0.0);
  for (int j = 0; j < m; ++j) {
    const double gj = grad_theta[j];
    for (int k = 0; k < h; ++k) {
      gw2[j * h + k] += gj * cache.hidden[k];
      ghid[k] += gj * w2[j * h + k];
    }
    gb2[j] += gj;
  }
  for (int k = 0; k < h; ++k) {
    const double t = std::tanh(cache.pre[k]);
    const double gpre = ghid[k] * cache.mask[k] * (1.0 - t * t);
    for (int i = 0; i < p; ++i) gw1[k * p + i] += gpre * cache.input[i];
    gb1[k] += gpre;
  }
}

// --- binary checkpoints ----------------------------------------------------
// Fixed little-endian layout; doubles are stored bit-exactly so a reload
// reproduces the encoder down to the last ulp.

namespace detail {

constexpr std::uint32_t k_checkpoint_magic = 0x4e56514eu;  // "NQVN"
constexpr std::uint32_t k_checkpoint_version = 1;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace detail

inline void save_encoder(const std::string& path, const Encoder& enc) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw resource_error("save_encoder: cannot open " + path);
  detail::put(os, detail::k_checkpoint_magic);
  detail::put(os, detail::k_checkpoint_version);
  detail::put(os, static_cast<std::uint32_t>(enc.spec.kind));
  detail::put(os, static_cast<std::int32_t>(enc.spec.input_dim));
  detail::put(os, static_cast<std::int32_t>(enc.spec.hidden_dim));
  detail::put(os, static_cast<std::int32_t>(enc.spec.output_dim));
  detail::put(os, enc.spec.dropout);
  detail::put(os, static_cast<std::uint64_t>(enc.weights.size()));
  os.write(reinterpret_cast<const char*>(enc.weights.data()),
           static_cast<std::streamsize>(enc.weights.size() * sizeof(double)));
  if (!os) throw resource_error("save_encoder: short write to " + path);
}

inline Encoder load_encoder(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw resource_error("load_encoder: cannot open " + path);
  if (detail::get<std::uint32_t>(is) != detail::k_checkpoint_magic)
    throw resource_error("load_encoder: bad magic in " + path);
  if (detail::get<std::uint32_t>(is) != detail::k_checkpoint_version)
    throw resource_error("load_encoder: unsupported version in " + path);

  Encoder enc;
  enc.spec.kind = static_cast<EncoderKind>(detail::get<std::uint32_t>(is));
  enc.spec.input_dim = detail::get<std::int32_t>(is);
  enc.spec.hidden_dim = detail::get<std::int32_t>(is);
  enc.spec.output_dim = detail::get<std::int32_t>(is);
  enc.spec.dropout = detail::get<double>(is);
  const auto count = detail::get<std::uint64_t>(is);
  enc.spec.validate();
  if (count != static_cast<std::uint64_t>(enc.spec.n_weights()))
    throw resource_error("load_encoder: weight count mismatch in " + path);
  enc.weights.resize(count);
  is.read(reinterpret_cast<char*>(enc.weights.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!is) throw resource_error("load_encoder: truncated file " + path);
  return enc;
}

}  // namespace nnvqe
