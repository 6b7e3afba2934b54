#include "chest/losses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "chest/error.hpp"
#include "chest/ops.hpp"

namespace chest {

void LossParams::validate() const {
  std::ostringstream bad;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) bad << " " << name << " must be > 0;";
  };
  auto non_negative = [&](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) bad << " " << name << " must be >= 0;";
  };
  positive(gamma_E, "loss.gamma_E");
  positive(gamma_H, "loss.gamma_H");
  positive(lambda_E, "loss.lambda_E");
  positive(lambda_H, "loss.lambda_H");
  positive(gamma_hyp, "loss.gamma_hyp");
  non_negative(delta_E, "loss.delta_E");
  non_negative(delta_H, "loss.delta_H");
  non_negative(eta_E, "loss.eta_E");
  non_negative(eta_H, "loss.eta_H");
  non_negative(tau, "loss.tau");
  if (!(eta_E + eta_H > 0.0)) bad << " loss.eta_E + loss.eta_H must be > 0;";
  if (!bad.str().empty()) throw Error(ErrorKind::Validation, "loss params:" + bad.str());
}

double softmin_from_distances(std::span<const double> distances, double gamma) {
  if (distances.empty()) throw Error(ErrorKind::EmptyProxy, "softmin similarity over zero proxies");
  const double dmin = *std::min_element(distances.begin(), distances.end());
  double z = 0.0;
  double acc = 0.0;
  for (double d : distances) {
    const double w = std::exp(-(d - dmin) / gamma);
    z += w;
    acc += w * d;
  }
  return -acc / z;
}

double softmin_similarity(std::span<const double> x, const Tensor& proxies, Metric metric,
                          double gamma, const BallConfig& cfg) {
  if (proxies.size() == 0) throw Error(ErrorKind::EmptyProxy, "softmin similarity over zero proxies");
  if (proxies.cols() != x.size()) throw Error(ErrorKind::Dimension, "point and proxies differ in dimension");
  std::vector<double> d(proxies.rows());
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (metric == Metric::Euclidean) {
      d[k] = raw::euclidean_distance(x, proxies.row(k));
    } else {
      d[k] = poincare_distance(PoincarePoint({x.begin(), x.end()}),
                               PoincarePoint({proxies.row(k).begin(), proxies.row(k).end()}), cfg);
    }
  }
  return softmin_from_distances(d, gamma);
}

namespace {

void check_views(const ProxyViews& v) {
  if (v.classes < 2) throw Error(ErrorKind::DegenerateProblem, "need at least 2 classes, got " + std::to_string(v.classes));
  if (v.per_class == 0) throw Error(ErrorKind::EmptyProxy, "proxy bank has K = 0");
  if (v.euclidean.rows() != v.classes * v.per_class || v.hyperbolic.rows() != v.classes * v.per_class) {
    throw Error(ErrorKind::Dimension, "proxy views do not hold C*K rows");
  }
}

Tensor as_rows(const Tensor& t) { return Tensor({t.rows(), t.cols()}, t.data); }

}  // namespace

SimilarityLoss chest_similarity_loss(const Tensor& batch_E, const Tensor& batch_H,
                                     std::span<const int> labels, const ProxyViews& proxies,
                                     const LossParams& params, const BallConfig& cfg) {
  check_views(proxies);
  if (batch_E.rows() == 0) throw Error(ErrorKind::Size, "empty batch");
  if (batch_E.rows() != batch_H.rows()) throw Error(ErrorKind::Dimension, "Euclidean and hyperbolic batches differ in size");
  for (std::size_t i = 0; i < batch_H.rows(); ++i) {
    if (!inside_ball(batch_H.row(i), cfg)) throw Error(ErrorKind::Boundary, "hyperbolic embedding " + std::to_string(i) + " outside the ball");
  }
  Tape tape(false);
  const Var xE = tape.constant(as_rows(batch_E));
  const Var xH = tape.constant(as_rows(batch_H));
  const Var pE = tape.constant(as_rows(proxies.euclidean));
  const Var pH = tape.constant(as_rows(proxies.hyperbolic));
  const std::size_t K = proxies.per_class;

  const Var sE = ops::softmin_similarity(ops::euclidean_distances(xE, pE), K, params.gamma_E);
  const Var sH = ops::softmin_similarity(ops::poincare_distances(xH, pH, cfg), K, params.gamma_H);
  const Var lE = ops::soft_triple_rows(sE, labels, params.lambda_E, params.delta_E);
  const Var lH = ops::soft_triple_rows(sH, labels, params.lambda_H, params.delta_H);

  SimilarityLoss out;
  out.per_example.resize(batch_E.rows());
  double sum_h = 0.0;
  double sum_e = 0.0;
  for (std::size_t i = 0; i < out.per_example.size(); ++i) {
    const double h = lH.value().data[i];
    const double e = lE.value().data[i];
    out.per_example[i] = params.eta_H * h + params.eta_E * e;
    sum_h += h;
    sum_e += e;
  }
  out.mean_hyperbolic = sum_h / static_cast<double>(out.per_example.size());
  out.mean_euclidean = sum_e / static_cast<double>(out.per_example.size());
  return out;
}

double proxy_similarity(const PoincarePoint& p_i, const PoincarePoint& p_j, const BallConfig& cfg) {
  return std::exp(-poincare_distance(p_i, p_j, cfg));
}

double hyphc_regularization(const std::array<PoincarePoint, 3>& points, double gamma_hyp,
                            const BallConfig& cfg) {
  static constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
  std::array<double, 3> d{};
  for (int p = 0; p < 3; ++p) d[p] = poincare_distance(points[kPairs[p][0]], points[kPairs[p][1]], cfg);
  const double dmax = std::max({d[0], d[1], d[2]});
  std::array<double, 3> w{};
  double z = 0.0;
  for (int p = 0; p < 3; ++p) z += (w[p] = std::exp((d[p] - dmax) / gamma_hyp));
  double sum_s = 0.0;
  double weighted = 0.0;
  for (int p = 0; p < 3; ++p) {
    const double s = std::exp(-d[p]);
    sum_s += s;
    weighted += s * w[p] / z;
  }
  return sum_s - weighted;
}

LossBreakdown combined_loss(double l_hyperbolic, double l_euclidean, double l_hyphc,
                            const LossParams& params) {
  if (!std::isfinite(l_hyperbolic)) throw Error(ErrorKind::Propagation, "non-finite hyperbolic similarity loss");
  if (!std::isfinite(l_euclidean)) throw Error(ErrorKind::Propagation, "non-finite Euclidean similarity loss");
  if (!std::isfinite(l_hyphc)) throw Error(ErrorKind::Propagation, "non-finite HypHC regularization");
  LossBreakdown b;
  b.l_hyperbolic = l_hyperbolic;
  b.l_euclidean = l_euclidean;
  b.l_hyphc = l_hyphc;
  b.total = params.eta_H * l_hyperbolic + params.eta_E * l_euclidean + params.tau * l_hyphc;
  return b;
}

namespace loss_graph {

SimilarityTerms similarity(Var x_E, Var x_H, std::span<const int> labels, Var proxies_E,
                           Var proxies_H, std::size_t per_class, const LossParams& params,
                           const BallConfig& cfg) {
  const Var sE = ops::softmin_similarity(ops::euclidean_distances(x_E, proxies_E), per_class, params.gamma_E);
  const Var sH = ops::softmin_similarity(ops::poincare_distances(x_H, proxies_H, cfg), per_class, params.gamma_H);
  return {ops::mean(ops::soft_triple_rows(sH, labels, params.lambda_H, params.delta_H)),
          ops::mean(ops::soft_triple_rows(sE, labels, params.lambda_E, params.delta_E))};
}

Var hyphc(Var proxies_H, std::span<const Triplet> triplets, std::size_t per_class,
          double gamma_hyp, const BallConfig& cfg) {
  if (triplets.empty()) throw Error(ErrorKind::Size, "regularizer needs at least one triplet");
  std::vector<std::array<std::size_t, 3>> rows;
  rows.reserve(triplets.size());
  for (const Triplet& t : triplets) {
    if (!t.valid()) throw Error(ErrorKind::Constraint, "triplet violates c != c' and i != j");
    if (t.anchor.index >= per_class || t.positive.index >= per_class || t.negative.index >= per_class) {
      throw Error(ErrorKind::Index, "triplet proxy index >= K");
    }
    rows.push_back(t.rows(per_class));
  }
  return ops::mean(ops::hyphc_rows(proxies_H, rows, gamma_hyp, cfg));
}

Var combined(Var l_hyperbolic, Var l_euclidean, Var l_hyphc, const LossParams& params) {
  const std::array<std::pair<Var, double>, 3> terms{
      {{l_hyperbolic, params.eta_H}, {l_euclidean, params.eta_E}, {l_hyphc, params.tau}}};
  return ops::weighted_sum(terms);
}

}  // namespace loss_graph
}  // namespace chest
