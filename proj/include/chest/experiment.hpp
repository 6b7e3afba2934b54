#pragma once

// Run orchestration shared by the CLI and the acceptance suite.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chest/config.hpp"
#include "chest/eval.hpp"
#include "chest/metrics_log.hpp"

namespace chest {

struct DataSplits {
  VectorDataset train;
  VectorDataset test;
};

DataSplits load_splits(const ExperimentConfig& cfg);

struct RunResult {
  ParamSet params;
  LossBreakdown last_losses;
  DualMetrics test_metrics;
  std::size_t steps = 0;
  std::size_t triplet_sampler_calls = 0;
  double seconds = 0.0;
};

// Trains for cfg.train.steps, logging every cfg.log_every steps (and the
// final step) to `log` when given, then evaluates on the test split.
RunResult run_training(const ExperimentConfig& cfg, const DataSplits& data, MetricsLog* log);

// Writes config.json, metrics.jsonl and checkpoint.txt under `dir`.
RunResult run_training_to(const ExperimentConfig& cfg, const DataSplits& data, const std::filesystem::path& dir);

MetricsRecord evaluation_record(const ExperimentConfig& cfg, const ParamSet& params, const VectorDataset& split);

struct AblationCell {
  double eta_H = 1.0;
  double eta_E = 1.0;
  std::size_t per_class = 1;
  double tau = 0.0;

  std::string label() const;
  bool combined() const noexcept { return eta_H > 0.0 && eta_E > 0.0; }
};

std::vector<AblationCell> ablation_grid(std::size_t k_max, double tau);

ExperimentConfig cell_config(const ExperimentConfig& base, const AblationCell& cell, std::uint64_t seed);

struct AblationRun {
  std::size_t cell = 0;
  std::uint64_t seed = 0;
  bool diverged = false;
  std::string failure;
  double recall1_H = 0.0;
  double recall1_E = 0.0;
  double map_H = 0.0;
  double map_E = 0.0;
};

struct CellSummary {
  AblationCell cell;
  std::size_t runs = 0;
  std::size_t diverged = 0;
  double mean_recall1_H = 0.0;
  double mean_recall1_E = 0.0;
  double mean_map_H = 0.0;
  double mean_map_E = 0.0;
};

struct AblationResult {
  std::vector<AblationCell> cells;
  std::vector<AblationRun> runs;

  std::vector<CellSummary> summarize() const;
};

// Runs every cell for every seed sequentially. With `out_root` set, each run
// gets its own directory `cell<i>_seed<s>`.
AblationResult run_ablation(const ExperimentConfig& base, const DataSplits& data,
                            const std::optional<std::filesystem::path>& out_root, std::ostream* progress);

void write_ablation_csv(std::ostream& out, const std::vector<CellSummary>& rows);
void write_ablation_runs_csv(std::ostream& out, const AblationResult& result);

struct AblationComparison {
  std::string combined;
  std::string single;
  double combined_recall1_H = 0.0;
  double single_recall1_H = 0.0;
  bool pass = false;
};

// Pairs each combined cell with the single-space cells sharing its (K, tau).
std::vector<AblationComparison> compare_cells(const std::vector<CellSummary>& rows, double margin);

}  // namespace chest
