#pragma once

// CHEST loss components: softmin class similarities, the two-space margin
// softmax similarity loss, the proxy-triplet hierarchical-clustering
// regularizer, and their weighted combination.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "chest/autodiff.hpp"
#include "chest/geometry.hpp"
#include "chest/tensor.hpp"

namespace chest {

inline constexpr double kDefaultGamma = 5.0;       // softmin temperature, both spaces
inline constexpr double kDefaultLambda = 20.0;     // softmax scale, both spaces
inline constexpr double kDefaultEta = 1.0;         // space weight, both spaces
inline constexpr double kDefaultGammaHyp = 1.0;    // regularizer softmax temperature
inline constexpr double kDefaultTau = 0.5;         // regularizer weight
inline constexpr double kDefaultDeltaHyperbolic = 1.0;
inline constexpr double kDefaultDeltaEuclidean = 1.0;

struct LossParams {
  double gamma_E = kDefaultGamma;
  double gamma_H = kDefaultGamma;
  double lambda_E = kDefaultLambda;
  double lambda_H = kDefaultLambda;
  double delta_E = kDefaultDeltaEuclidean;
  double delta_H = kDefaultDeltaHyperbolic;
  double eta_E = kDefaultEta;
  double eta_H = kDefaultEta;
  double gamma_hyp = kDefaultGammaHyp;
  double tau = kDefaultTau;

  /// Lists every violated rule in one Error(Validation).
  void validate() const;
};

struct LossBreakdown {
  double l_hyperbolic = 0.0;
  double l_euclidean = 0.0;
  double l_hyphc = 0.0;
  double total = 0.0;
};

struct ProxyRef {
  std::size_t cls = 0;
  std::size_t index = 0;
  bool operator==(const ProxyRef&) const = default;
};

/// Anchor and positive share a class with distinct proxy indices; negative is another class.
struct Triplet {
  ProxyRef anchor;
  ProxyRef positive;
  ProxyRef negative;

  bool valid() const noexcept {
    return anchor.cls == positive.cls && anchor.index != positive.index && negative.cls != anchor.cls;
  }
  /// Row indices into a class-major (C*K) x D proxy matrix.
  std::array<std::size_t, 3> rows(std::size_t per_class) const noexcept {
    return {anchor.cls * per_class + anchor.index, positive.cls * per_class + positive.index,
            negative.cls * per_class + negative.index};
  }
};

enum class Metric { Euclidean, Hyperbolic };

/// Proxies for C classes with K each, stored class-major: shape C x K x D.
struct ProxyViews {
  Tensor euclidean;   // C x K x D_E
  Tensor hyperbolic;  // C x K x D_H
  std::size_t classes = 0;
  std::size_t per_class = 0;
};

/// -sum_k softmax_k(-d/gamma) d_k over the given distances.
double softmin_from_distances(std::span<const double> distances, double gamma);

/// Similarity of x to K proxies (rows of `proxies`, K x n) under the chosen metric.
double softmin_similarity(std::span<const double> x, const Tensor& proxies, Metric metric,
                          double gamma, const BallConfig& cfg);

struct SimilarityLoss {
  std::vector<double> per_example;  // eta_H L_H(x_i) + eta_E L_E(x_i)
  double mean_hyperbolic = 0.0;
  double mean_euclidean = 0.0;
};

SimilarityLoss chest_similarity_loss(const Tensor& batch_E, const Tensor& batch_H,
                                     std::span<const int> labels, const ProxyViews& proxies,
                                     const LossParams& params, const BallConfig& cfg);

/// exp(-D_H(p_i, p_j))
double proxy_similarity(const PoincarePoint& p_i, const PoincarePoint& p_j, const BallConfig& cfg);

/// sum_{j<k} S_jk - sum_{j<k} S_jk softmax(d_jk / gamma_hyp) over the three pairs.
double hyphc_regularization(const std::array<PoincarePoint, 3>& points, double gamma_hyp,
                            const BallConfig& cfg);

/// total = eta_H * l_H + eta_E * l_E + tau * l_hyphc. Throws Error(Propagation) naming a non-finite input.
LossBreakdown combined_loss(double l_hyperbolic, double l_euclidean, double l_hyphc,
                            const LossParams& params);

// Differentiable builders used by training.
namespace loss_graph {

struct SimilarityTerms {
  Var l_hyperbolic;  // batch mean
  Var l_euclidean;   // batch mean
};

/// x_E: B x D_E, x_H: B x D_H, proxy rows class-major (C*K) x D.
SimilarityTerms similarity(Var x_E, Var x_H, std::span<const int> labels, Var proxies_E,
                           Var proxies_H, std::size_t per_class, const LossParams& params,
                           const BallConfig& cfg);

/// Mean regularizer over the triplets; every triplet must be valid.
Var hyphc(Var proxies_H, std::span<const Triplet> triplets, std::size_t per_class,
          double gamma_hyp, const BallConfig& cfg);

/// Scalar graph node for the combined objective.
Var combined(Var l_hyperbolic, Var l_euclidean, Var l_hyphc, const LossParams& params);

}  // namespace loss_graph
}  // namespace chest
