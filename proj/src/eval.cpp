#include "chest/eval.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chest/error.hpp"

namespace chest {

const char* space_tag(Space s) noexcept { return s == Space::Hyperbolic ? "H" : "E"; }

void RetrievalIndex::validate(const BallConfig& cfg) const {
  if (labels.size() < 2) throw Error(ErrorKind::Size, "retrieval index needs N >= 2");
  if (embeddings.rows() != labels.size()) throw Error(ErrorKind::Dimension, "embeddings and labels differ in count");
  if (!embeddings.all_finite()) throw Error(ErrorKind::InvalidInput, "non-finite embedding");
  if (space == Space::Hyperbolic) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!inside_ball(embeddings.row(i), cfg)) throw Error(ErrorKind::Boundary, "hyperbolic embedding " + std::to_string(i) + " outside the ball");
    }
  }
}

namespace {

using Ranked = std::vector<std::pair<double, std::size_t>>;

// Distances from `q` to every other item, ordered by (distance, index) over the first `depth` slots.
Ranked rank_neighbors(const RetrievalIndex& index, std::size_t q, std::size_t depth, const BallConfig& cfg) {
  const std::size_t n = index.labels.size();
  Ranked out;
  out.reserve(n - 1);
  const auto x = index.embeddings.row(q);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == q) continue;
    const auto y = index.embeddings.row(j);
    const double d = index.space == Space::Hyperbolic
                         ? raw::poincare_distance(x, y, cfg.curvature, cfg.arctanh_eps)
                         : raw::euclidean_distance(x, y);
    out.emplace_back(d, j);
  }
  depth = std::min(depth, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(depth), out.end());
  out.resize(depth);
  return out;
}

void check_ks(std::span<const std::size_t> ks, std::size_t n) {
  for (std::size_t k : ks) {
    if (k == 0 || k >= n) {
      throw Error(ErrorKind::Parameter, "recall k=" + std::to_string(k) + " must satisfy 1 <= k < N=" + std::to_string(n));
    }
  }
}

struct QueryStats {
  std::vector<std::size_t> first_hit;  // 1-based rank of the first positive, 0 if none within depth
  double map_sum = 0.0;
  std::size_t map_queries = 0;
};

QueryStats scan(const RetrievalIndex& index, std::size_t max_k, bool want_map, const BallConfig& cfg) {
  const std::size_t n = index.labels.size();
  std::vector<std::size_t> class_count;
  for (int l : index.labels) {
    if (l < 0) throw Error(ErrorKind::Index, "negative label");
    if (static_cast<std::size_t>(l) >= class_count.size()) class_count.resize(static_cast<std::size_t>(l) + 1, 0);
    ++class_count[static_cast<std::size_t>(l)];
  }
  QueryStats st;
  st.first_hit.assign(n, 0);
  for (std::size_t q = 0; q < n; ++q) {
    const int label = index.labels[q];
    const std::size_t R = class_count[static_cast<std::size_t>(label)] - 1;
    const std::size_t depth = std::max(max_k, want_map ? R : std::size_t{0});
    const Ranked ranked = rank_neighbors(index, q, depth, cfg);
    for (std::size_t i = 0; i < std::min(max_k, ranked.size()); ++i) {
      if (index.labels[ranked[i].second] == label) {
        st.first_hit[q] = i + 1;
        break;
      }
    }
    if (want_map && R > 0) {
      std::size_t hits = 0;
      double ap = 0.0;
      for (std::size_t i = 0; i < R; ++i) {
        if (index.labels[ranked[i].second] == label) {
          ++hits;
          ap += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
      }
      st.map_sum += ap / static_cast<double>(R);
      ++st.map_queries;
    }
  }
  return st;
}

std::map<std::size_t, double> recall_from(const QueryStats& st, std::span<const std::size_t> ks) {
  std::map<std::size_t, double> out;
  const double n = static_cast<double>(st.first_hit.size());
  for (std::size_t k : ks) {
    std::size_t hits = 0;
    for (std::size_t r : st.first_hit) hits += (r != 0 && r <= k) ? 1 : 0;
    out[k] = static_cast<double>(hits) / n;
  }
  return out;
}

}  // namespace

std::map<std::size_t, double> recall_at_k(const RetrievalIndex& index, std::span<const std::size_t> ks,
                                          const BallConfig& cfg) {
  index.validate(cfg);
  check_ks(ks, index.labels.size());
  const std::size_t max_k = ks.empty() ? 0 : *std::max_element(ks.begin(), ks.end());
  return recall_from(scan(index, max_k, false, cfg), ks);
}

double map_at_r(const RetrievalIndex& index, const BallConfig& cfg) {
  index.validate(cfg);
  const QueryStats st = scan(index, 0, true, cfg);
  if (st.map_queries == 0) throw Error(ErrorKind::UndefinedMetric, "MAP@R undefined: no query has a same-class item");
  return st.map_sum / static_cast<double>(st.map_queries);
}

MetricsReport evaluate_index(const RetrievalIndex& index, std::span<const std::size_t> ks,
                             const BallConfig& cfg) {
  index.validate(cfg);
  check_ks(ks, index.labels.size());
  const std::size_t max_k = ks.empty() ? 0 : *std::max_element(ks.begin(), ks.end());
  const QueryStats st = scan(index, max_k, true, cfg);
  if (st.map_queries == 0) throw Error(ErrorKind::UndefinedMetric, "MAP@R undefined: no query has a same-class item");
  MetricsReport r;
  r.space = index.space;
  r.recall_at = recall_from(st, ks);
  r.map_at_r = st.map_sum / static_cast<double>(st.map_queries);
  return r;
}

DualMetrics evaluate_both(const ParamSet& params, const EncoderSpec& encoder, const BallConfig& cfg,
                          const VectorDataset& split, std::span<const std::size_t> ks) {
  if (split.size() == 0) throw Error(ErrorKind::Size, "evaluation split is empty");
  RetrievalIndex e{encode(params, encoder, split.features), split.labels, Space::Euclidean};
  RetrievalIndex h{MappingHead::from_params(params, cfg).apply_rows(e.embeddings), split.labels, Space::Hyperbolic};
  return {evaluate_index(e, ks, cfg), evaluate_index(h, ks, cfg)};
}

}  // namespace chest
