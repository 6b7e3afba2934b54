#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "chest/autodiff.hpp"
#include "chest/data.hpp"
#include "chest/geometry.hpp"
#include "chest/losses.hpp"
#include "chest/model.hpp"

namespace chest {

inline constexpr double kDefaultBeta1 = 0.9;
inline constexpr double kDefaultBeta2 = 0.999;
inline constexpr double kDefaultAdamEps = 1e-8;
inline constexpr double kDefaultWeightDecay = 0.01;

/// Benchmark-scale training settings (batch size, steps, learning rates, K, M).
struct TrainingPreset {
  const char* name;
  std::size_t batch_size;
  std::size_t steps;
  double lr_backbone;
  double lr_proxy;
  std::size_t per_class;
  std::size_t triplets;
};

inline constexpr TrainingPreset kCub200Preset{"cub200", 200, 120, 3.0e-5, 1.0e-2, 10, 100};
inline constexpr TrainingPreset kCars196Preset{"cars196", 198, 1800, 1.0e-5, 1.0e-2, 10, 98};
inline constexpr TrainingPreset kInShopPreset{"inshop", 100, 30000, 1.0e-5, 1.0e-1, 2, 3997};
inline constexpr TrainingPreset kSopPreset{"sop", 75, 50000, 1.0e-5, 1.0e-1, 2, 11318};

struct TrainConfig {
  std::size_t batch_size = 64;
  std::size_t steps = 600;
  double lr_backbone = 1e-3;
  double lr_proxy = 1e-2;
  double weight_decay = kDefaultWeightDecay;
  double beta1 = kDefaultBeta1;
  double beta2 = kDefaultBeta2;
  double adam_eps = kDefaultAdamEps;
  std::size_t triplets_per_step = 8;
  std::uint64_t seed = 1;

  /// Cross-checks against the loss weights and proxies per class.
  void validate(const LossParams& loss, std::size_t per_class) const;
};

using Rng = std::mt19937_64;

struct Batch {
  Tensor inputs;
  std::vector<int> labels;
  std::vector<std::size_t> indices;
};

/// B distinct items drawn uniformly; throws Error(Size) when B exceeds the dataset.
Batch sample_batch(const VectorDataset& data, std::size_t batch_size, Rng& rng);

/// M triplets: anchor class uniform over C, ordered (i, j) uniform over distinct pairs,
/// negative class uniform over the other C - 1, negative index uniform over K.
std::vector<Triplet> sample_triplets(std::size_t classes, std::size_t per_class, std::size_t count,
                                     Rng& rng);

class TripletSampler {
 public:
  TripletSampler(std::uint64_t seed, std::size_t classes, std::size_t per_class)
      : rng_(seed), classes_(classes), per_class_(per_class) {}

  std::vector<Triplet> sample(std::size_t count) {
    ++calls_;
    return sample_triplets(classes_, per_class_, count, rng_);
  }
  std::size_t calls() const noexcept { return calls_; }

 private:
  Rng rng_;
  std::size_t classes_;
  std::size_t per_class_;
  std::size_t calls_ = 0;
};

enum class ParamGroup { Backbone, Proxy };
ParamGroup group_of(std::string_view param_name) noexcept;

struct AdamWState {
  struct Moments {
    std::vector<double> m;
    std::vector<double> v;
  };
  std::map<std::string, Moments, std::less<>> moments;
  std::size_t backbone_steps = 0;
  std::size_t proxy_steps = 0;
};

/// Decoupled-weight-decay Adam over the tensors of one group. The learning rate is
/// lr_proxy for the proxy group and lr_backbone otherwise. Aborts before touching any
/// value if a gradient in the group is non-finite.
void adamw_step(ParamSet& params, const GradientReport& grads, AdamWState& state,
                const TrainConfig& cfg, ParamGroup group);

class Trainer {
 public:
  Trainer(ModelDims dims, BallConfig ball, LossParams loss, TrainConfig train);
  Trainer(ModelDims dims, BallConfig ball, LossParams loss, TrainConfig train, ParamSet initial);

  /// Forward, backward and one AdamW update per group on the given batch.
  /// Returns the losses at the pre-update parameters.
  LossBreakdown train_step(const Batch& batch);
  /// Samples a batch from `data` and runs train_step.
  LossBreakdown step(const VectorDataset& data);

  /// Loss at the current parameters without updating them (triplets drawn from a
  /// copy of the sampler state so training is unaffected).
  LossBreakdown evaluate_loss(const Batch& batch) const;

  const ParamSet& params() const noexcept { return params_; }
  const ModelDims& dims() const noexcept { return dims_; }
  std::size_t steps_taken() const noexcept { return steps_; }
  std::size_t triplet_sampler_calls() const noexcept { return sampler_.calls(); }

 private:
  LossFn make_loss(const Batch& batch, const std::vector<Triplet>& triplets, LossBreakdown& out) const;
  std::vector<Triplet> draw_triplets(TripletSampler& sampler) const;

  ModelDims dims_;
  BallConfig ball_;
  LossParams loss_;
  TrainConfig train_;
  ParamSet params_;
  AdamWState opt_;
  Rng batch_rng_;
  TripletSampler sampler_;
  std::size_t steps_ = 0;
};

}  // namespace chest
