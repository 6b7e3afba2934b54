#pragma once

// Encoder -> Euclidean embedding -> shared mapping head (FC, clip, exp_0) ->
// hyperbolic embedding. Proxies live in Euclidean space and reach the ball
// through the same head, so P_H is always head(P_E).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "chest/autodiff.hpp"
#include "chest/geometry.hpp"
#include "chest/losses.hpp"
#include "chest/tensor.hpp"

namespace chest {

enum class EncoderKind { Linear, Mlp2 };

struct EncoderSpec {
  EncoderKind kind = EncoderKind::Linear;
  std::size_t input_dim = 64;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 0;  // mlp2 only

  void validate() const;
};

std::string to_string(EncoderKind kind);
EncoderKind encoder_kind_from_string(const std::string& s);

struct ModelDims {
  EncoderSpec encoder;
  std::size_t hyp_dim = 16;
  std::size_t classes = 2;
  std::size_t per_class = 1;

  void validate() const;
};

namespace param_names {
inline constexpr const char* kEncoderW1 = "encoder.w1";
inline constexpr const char* kEncoderB1 = "encoder.b1";
inline constexpr const char* kEncoderW2 = "encoder.w2";
inline constexpr const char* kEncoderB2 = "encoder.b2";
inline constexpr const char* kHeadWeight = "head.weight";
inline constexpr const char* kHeadBias = "head.bias";
inline constexpr const char* kProxies = "proxies";
}  // namespace param_names

inline constexpr double kInitWeightStd = 0.02;
inline constexpr double kInitProxyStd = 0.01;

/// Weights ~ N(0, 0.02^2), biases 0, proxies ~ N(0, 0.01^2); a pure function of (seed, dims).
ParamSet init_params(std::uint64_t seed, const ModelDims& dims);

/// Inputs B x input_dim -> embeddings B x D_E.
Tensor encode(const ParamSet& params, const EncoderSpec& spec, const Tensor& inputs);
Var encode_graph(const ParamVars& params, const EncoderSpec& spec, Var inputs);

struct MappingHead {
  Tensor weight;  // D_H x D_E
  Tensor bias;    // D_H
  BallConfig ball;

  static MappingHead from_params(const ParamSet& params, const BallConfig& ball);

  /// Row-wise head over an N x D_E matrix.
  Tensor apply_rows(const Tensor& x_E) const;
};

/// exp_0(clip(W x + b)); strictly inside the ball.
PoincarePoint map_to_hyperbolic(const MappingHead& head, const EuclideanVector& x_E);
Var map_graph(Var weight, Var bias, Var x_E, const BallConfig& ball);

struct ProxyBank {
  Tensor proxies;  // C x K x D_E, unnormalized
  std::size_t classes = 0;
  std::size_t per_class = 0;

  static ProxyBank from_params(const ParamSet& params);
};

ProxyViews proxy_views(const ProxyBank& bank, const MappingHead& head);

// Checkpoint: text, one header line, one shape line and one value line per tensor.
inline constexpr const char* kCheckpointMagic = "chest-checkpoint";
inline constexpr int kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const ParamSet& params);
ParamSet read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const ParamSet& params);
ParamSet load_checkpoint(const std::filesystem::path& path);

}  // namespace chest
