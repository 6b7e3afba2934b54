#pragma once

// Retrieval metrics over a single pool: every item queries all others, self
// excluded, distance ties broken by the lower item index.

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "chest/data.hpp"
#include "chest/geometry.hpp"
#include "chest/model.hpp"
#include "chest/tensor.hpp"

namespace chest {

enum class Space { Euclidean, Hyperbolic };

const char* space_tag(Space s) noexcept;  // "E" / "H"

struct RetrievalIndex {
  Tensor embeddings;  // N x D
  std::vector<int> labels;
  Space space = Space::Euclidean;

  void validate(const BallConfig& cfg) const;
};

struct MetricsReport {
  std::map<std::size_t, double> recall_at;
  double map_at_r = 0.0;
  Space space = Space::Euclidean;
};

std::map<std::size_t, double> recall_at_k(const RetrievalIndex& index, std::span<const std::size_t> ks,
                                          const BallConfig& cfg);
double map_at_r(const RetrievalIndex& index, const BallConfig& cfg);
MetricsReport evaluate_index(const RetrievalIndex& index, std::span<const std::size_t> ks,
                             const BallConfig& cfg);

struct DualMetrics {
  MetricsReport euclidean;
  MetricsReport hyperbolic;
};

/// Embeds every item once; E uses the encoder output, H the mapped output.
DualMetrics evaluate_both(const ParamSet& params, const EncoderSpec& encoder, const BallConfig& cfg,
                          const VectorDataset& split, std::span<const std::size_t> ks);

}  // namespace chest
