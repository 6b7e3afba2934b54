#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chest/error.hpp"
#include "chest/eval.hpp"
#include "chest/experiment.hpp"
#include "support.hpp"

namespace chest {
namespace {

using testing::Gen;

// Quadratic reference: full distance matrix, stable sort by (distance, index).
struct Oracle {
  std::vector<std::vector<std::size_t>> ranked;  // per query, self excluded
  const std::vector<int>* labels;

  Oracle(const RetrievalIndex& idx, const BallConfig& cfg) : labels(&idx.labels) {
    const std::size_t n = idx.labels.size();
    const std::size_t d = idx.embeddings.cols();
    ranked.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<std::pair<double, std::size_t>> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == q) continue;
        double dist;
        if (idx.space == Space::Euclidean) {
          double s = 0;
          for (std::size_t k = 0; k < d; ++k) s += std::pow(idx.embeddings.data[q * d + k] - idx.embeddings.data[j * d + k], 2);
          dist = std::sqrt(s);
        } else {
          std::vector<double> u(idx.embeddings.row(q).begin(), idx.embeddings.row(q).end());
          std::vector<double> v(idx.embeddings.row(j).begin(), idx.embeddings.row(j).end());
          dist = poincare_distance(PoincarePoint(u), PoincarePoint(v), cfg);
        }
        row.emplace_back(dist, j);
      }
      std::sort(row.begin(), row.end());
      for (const auto& [dist, j] : row) ranked[q].push_back(j);
    }
  }

  double recall(std::size_t k) const {
    double hits = 0;
    for (std::size_t q = 0; q < ranked.size(); ++q) {
      for (std::size_t r = 0; r < k; ++r) {
        if ((*labels)[ranked[q][r]] == (*labels)[q]) {
          hits += 1;
          break;
        }
      }
    }
    return hits / static_cast<double>(ranked.size());
  }

  double map_at_r() const {
    double total = 0;
    std::size_t used = 0;
    for (std::size_t q = 0; q < ranked.size(); ++q) {
      const auto R = static_cast<std::size_t>(std::count(labels->begin(), labels->end(), (*labels)[q])) - 1;
      if (R == 0) continue;
      double ap = 0, rel = 0;
      for (std::size_t i = 0; i < R; ++i) {
        if ((*labels)[ranked[q][i]] == (*labels)[q]) {
          rel += 1;
          ap += rel / static_cast<double>(i + 1);
        }
      }
      total += ap / static_cast<double>(R);
      ++used;
    }
    return total / static_cast<double>(used);
  }
};

RetrievalIndex line_fixture() {
  return RetrievalIndex{Tensor::matrix(4, 1, {0.0, 1.0, 2.0, 10.0}), {0, 0, 1, 1}, Space::Euclidean};
}

TEST(Recall, LineFixtureFromOracle) {
  BallConfig cfg;
  const RetrievalIndex idx = line_fixture();
  const Oracle o(idx, cfg);
  const std::vector<std::size_t> ks{1};
  const auto r = recall_at_k(idx, ks, cfg);
  EXPECT_EQ(r.at(1), o.recall(1));
  EXPECT_EQ(r.at(1), 0.75);
}

TEST(Recall, TrivialCases) {
  BallConfig cfg;
  const std::vector<std::size_t> k1{1};
  EXPECT_EQ(recall_at_k(RetrievalIndex{Tensor::matrix(2, 1, {0.0, 5.0}), {3, 3}}, k1, cfg).at(1), 1.0);
  const RetrievalIndex distinct{Tensor::matrix(4, 1, {0, 1, 2, 3}), {0, 1, 2, 3}};
  const std::vector<std::size_t> ks{1, 2, 3};
  for (const auto& [k, v] : recall_at_k(distinct, ks, cfg)) EXPECT_EQ(v, 0.0);
}

TEST(Recall, TiesBrokenByLowerIndex) {
  BallConfig cfg;
  // Query 1 at 0 is equidistant from item 0 (label B) and item 2 (label A): index 0 wins.
  const RetrievalIndex idx{Tensor::matrix(3, 1, {-1.0, 0.0, 1.0}), {1, 0, 0}};
  const std::vector<std::size_t> k1{1};
  // Queries: 0 -> 1 (miss), 1 -> 0 (miss, tie), 2 -> 1 (hit).
  EXPECT_NEAR(recall_at_k(idx, k1, cfg).at(1), 1.0 / 3.0, 1e-15);
}

TEST(Recall, Errors) {
  BallConfig cfg;
  const RetrievalIndex idx = line_fixture();
  const std::vector<std::size_t> too_big{4};
  try {
    recall_at_k(idx, too_big, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parameter);
  }
  const std::vector<std::size_t> zero{0};
  EXPECT_THROW(recall_at_k(idx, zero, cfg), Error);
}

TEST(MapAtR, Examples) {
  BallConfig cfg;
  // Perfect ranking.
  const RetrievalIndex perfect{Tensor::matrix(4, 1, {0.0, 0.1, 5.0, 5.1}), {0, 0, 1, 1}};
  EXPECT_EQ(map_at_r(perfect, cfg), 1.0);
  // No relevant item within top-R for any query.
  const RetrievalIndex worst{Tensor::matrix(4, 1, {0.0, 10.0, 0.1, 10.1}), {0, 0, 1, 1}};
  EXPECT_EQ(map_at_r(worst, cfg), 0.0);
  // Single query with R = 2, relevant at ranks 1 and 3: (1 + 0) / 2.
  const RetrievalIndex one{Tensor::matrix(4, 1, {0.0, 1.0, 2.0, 3.0}), {0, 0, 1, 0}};
  const Oracle o(one, cfg);
  EXPECT_EQ(o.ranked[0], (std::vector<std::size_t>{1, 2, 3}));
  // Every item is a query here; isolate query 0 through the oracle.
  double ap = 0, rel = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    if (one.labels[o.ranked[0][i]] == 0) ap += ++rel / static_cast<double>(i + 1);
  }
  EXPECT_EQ(ap / 2.0, 0.5);
  EXPECT_EQ(map_at_r(one, cfg), o.map_at_r());
}

TEST(MapAtR, AllQueriesWithoutPositivesIsUndefined) {
  BallConfig cfg;
  const RetrievalIndex idx{Tensor::matrix(3, 1, {0, 1, 2}), {0, 1, 2}};
  try {
    map_at_r(idx, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UndefinedMetric);
  }
}

RetrievalIndex random_index(Gen& g, std::size_t n, std::size_t dim, int classes, Space space, double c) {
  RetrievalIndex idx;
  idx.space = space;
  idx.embeddings = Tensor({n, dim});
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = space == Space::Hyperbolic ? g.in_ball(dim, 0.95 / std::sqrt(c)) : g.vec(dim);
    std::copy(v.begin(), v.end(), idx.embeddings.row(i).begin());
    idx.labels.push_back(g.label(classes));
  }
  return idx;
}

TEST(Oracle, ProductionMatchesQuadraticReferenceExactly) {
  Gen g(1);
  BallConfig cfg;
  const std::vector<std::size_t> ks{1, 2, 4, 8};
  for (std::size_t n : {5u, 40u, 200u, 500u}) {
    for (Space s : {Space::Euclidean, Space::Hyperbolic}) {
      const RetrievalIndex idx = random_index(g, n, 6, 5, s, cfg.curvature);
      const Oracle o(idx, cfg);
      const MetricsReport r = evaluate_index(idx, n > 8 ? ks : std::vector<std::size_t>{1, 2, 4}, cfg);
      for (const auto& [k, v] : r.recall_at) EXPECT_EQ(v, o.recall(k)) << "n=" << n << " k=" << k;
      EXPECT_EQ(r.map_at_r, o.map_at_r()) << "n=" << n;
    }
  }
}

TEST(Oracle, DuplicatePointsExerciseTies) {
  BallConfig cfg;
  Gen g(2);
  RetrievalIndex idx;
  idx.embeddings = Tensor({60, 2});
  for (std::size_t i = 0; i < 60; ++i) {
    idx.embeddings.row(i)[0] = static_cast<double>(g.index(4)) * 0.1;
    idx.embeddings.row(i)[1] = static_cast<double>(g.index(3)) * 0.1;
    idx.labels.push_back(g.label(3));
  }
  const std::vector<std::size_t> ks{1, 3, 5};
  for (Space s : {Space::Euclidean, Space::Hyperbolic}) {
    idx.space = s;
    const Oracle os(idx, cfg);
    const MetricsReport r = evaluate_index(idx, ks, cfg);
    for (const auto& [k, v] : r.recall_at) EXPECT_EQ(v, os.recall(k));
    EXPECT_EQ(r.map_at_r, os.map_at_r());
  }
}

TEST(Properties, RecallMonotoneAndRelabelInvariant) {
  Gen g(3);
  BallConfig cfg;
  for (int rep = 0; rep < 20; ++rep) {
    RetrievalIndex idx = random_index(g, 80, 4, 6, rep % 2 ? Space::Hyperbolic : Space::Euclidean, cfg.curvature);
    std::vector<std::size_t> ks(20);
    std::iota(ks.begin(), ks.end(), 1);
    const MetricsReport r = evaluate_index(idx, ks, cfg);
    double prev = 0.0;
    for (const auto& [k, v] : r.recall_at) {
      EXPECT_GE(v, prev);
      prev = v;
    }
    std::vector<int> perm{4, 2, 0, 5, 1, 3};
    for (int& l : idx.labels) l = perm[static_cast<std::size_t>(l)];
    const MetricsReport q = evaluate_index(idx, ks, cfg);
    EXPECT_EQ(q.recall_at, r.recall_at);
    EXPECT_EQ(q.map_at_r, r.map_at_r);
  }
}

TEST(Properties, HyperbolicMembershipValidated) {
  BallConfig cfg;
  RetrievalIndex idx{Tensor::matrix(2, 1, {0.0, 2.0}), {0, 0}, Space::Hyperbolic};
  EXPECT_THROW(idx.validate(cfg), Error);
  RetrievalIndex one{Tensor::matrix(1, 1, {0.0}), {0}, Space::Euclidean};
  EXPECT_THROW(one.validate(cfg), Error);
}

TEST(EvaluateBoth, DeterministicOnTrainedToy) {
  ExperimentConfig cfg;
  cfg.train.steps = 60;
  cfg.data.synthetic.train_per_class = 30;
  cfg.data.synthetic.test_per_class = 15;
  const DataSplits data = load_splits(cfg);
  const RunResult run = run_training(cfg, data, nullptr);
  const DualMetrics a = evaluate_both(run.params, cfg.encoder, cfg.ball, data.test, cfg.eval.ks);
  const DualMetrics b = evaluate_both(run.params, cfg.encoder, cfg.ball, data.test, cfg.eval.ks);
  EXPECT_EQ(a.euclidean.recall_at, b.euclidean.recall_at);
  EXPECT_EQ(a.hyperbolic.map_at_r, b.hyperbolic.map_at_r);
  EXPECT_EQ(a.hyperbolic.recall_at, run.test_metrics.hyperbolic.recall_at);
}

}  // namespace
}  // namespace chest
