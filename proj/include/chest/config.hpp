#pragma once

// Experiment configuration: JSON on disk, dotted-path command-line overrides
// (e.g. loss.delta_H=20), and whole-config validation that reports every
// violated rule at once.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "chest/data.hpp"
#include "chest/geometry.hpp"
#include "chest/losses.hpp"
#include "chest/model.hpp"
#include "chest/train.hpp"

namespace chest {

struct DataSource {
  std::string train_path;  // empty -> synthetic hierarchy
  std::string test_path;
  HierarchySpec synthetic;

  bool synthetic_source() const noexcept { return train_path.empty(); }
};

struct EvalConfig {
  std::vector<std::size_t> ks{1, 2, 4};
  std::size_t every = 0;  // evaluate during training every N steps; 0 = final only
  std::string checkpoint;
};

struct AblationConfig {
  std::size_t k_max = 2;
  double tau = kDefaultTau;
  std::vector<std::uint64_t> seeds;  // empty -> {train.seed}
};

struct ExperimentConfig {
  BallConfig ball;
  LossParams loss;
  TrainConfig train;
  EncoderSpec encoder;
  std::size_t hyp_dim = 16;
  std::size_t per_class = 2;
  std::size_t log_every = 1;
  DataSource data;
  EvalConfig eval;
  AblationConfig ablate;
  std::string out_dir = "runs/chest";

  ModelDims model_dims(std::size_t classes) const;

  /// Throws one Error(Validation) listing every violated rule.
  void validate() const;
};

/// Desk-scale defaults: synthetic 2x4 hierarchy, linear encoder 64->32, D_H = 16, K = 2.
ExperimentConfig default_config();

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Keys absent from `j` keep their defaults; unknown keys are a validation error.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Applies "a.b.c=value". The value is parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Defaults <- file (if non-empty path) <- overrides, then validate.
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

}  // namespace chest
