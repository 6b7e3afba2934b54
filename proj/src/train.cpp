#include "chest/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chest/error.hpp"
#include "chest/ops.hpp"

namespace chest {

void TrainConfig::validate(const LossParams& loss, std::size_t per_class) const {
  std::ostringstream bad;
  if (batch_size < 1) bad << " train.batch_size must be >= 1;";
  if (steps < 1) bad << " train.steps must be >= 1;";
  if (!(lr_backbone > 0.0)) bad << " train.lr_backbone must be > 0;";
  if (!(lr_proxy > 0.0)) bad << " train.lr_proxy must be > 0;";
  if (!(weight_decay >= 0.0)) bad << " train.weight_decay must be >= 0;";
  if (!(beta1 > 0.0 && beta1 < 1.0)) bad << " train.beta1 must be in (0,1);";
  if (!(beta2 > 0.0 && beta2 < 1.0)) bad << " train.beta2 must be in (0,1);";
  if (!(adam_eps > 0.0)) bad << " train.adam_eps must be > 0;";
  if (loss.tau > 0.0) {
    if (triplets_per_step < 1) bad << " tau > 0 requires train.triplets_per_step (M) >= 1;";
    if (per_class < 2) bad << " tau > 0 requires model.per_class (K) >= 2;";
  }
  if (!bad.str().empty()) throw Error(ErrorKind::Validation, "train config:" + bad.str());
}

Batch sample_batch(const VectorDataset& data, std::size_t batch_size, Rng& rng) {
  const std::size_t n = data.size();
  if (n == 0) throw Error(ErrorKind::Size, "cannot sample from an empty dataset");
  if (batch_size > n) {
    throw Error(ErrorKind::Size, "batch size " + std::to_string(batch_size) + " exceeds dataset size " + std::to_string(n));
  }
  // Partial Fisher-Yates: the first batch_size slots are a uniform draw without replacement.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < batch_size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  Batch b;
  b.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(batch_size));
  const std::size_t d = data.input_dim();
  b.inputs = Tensor({batch_size, d});
  b.labels.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) {
    const auto src = data.features.row(b.indices[i]);
    std::copy(src.begin(), src.end(), b.inputs.row(i).begin());
    b.labels.push_back(data.labels[b.indices[i]]);
  }
  return b;
}

std::vector<Triplet> sample_triplets(std::size_t classes, std::size_t per_class, std::size_t count,
                                     Rng& rng) {
  if (count == 0) return {};
  if (classes < 2) throw Error(ErrorKind::Constraint, "triplets need at least 2 classes");
  if (per_class < 2) throw Error(ErrorKind::Constraint, "triplets need K >= 2 for a same-class pair with i != j");
  std::uniform_int_distribution<std::size_t> cls(0, classes - 1);
  std::uniform_int_distribution<std::size_t> other_cls(0, classes - 2);
  std::uniform_int_distribution<std::size_t> idx(0, per_class - 1);
  std::uniform_int_distribution<std::size_t> other_idx(0, per_class - 2);
  std::vector<Triplet> out;
  out.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    Triplet t;
    t.anchor.cls = cls(rng);
    t.anchor.index = idx(rng);
    t.positive.cls = t.anchor.cls;
    const std::size_t j = other_idx(rng);
    t.positive.index = j >= t.anchor.index ? j + 1 : j;
    const std::size_t c2 = other_cls(rng);
    t.negative.cls = c2 >= t.anchor.cls ? c2 + 1 : c2;
    t.negative.index = idx(rng);
    out.push_back(t);
  }
  return out;
}

ParamGroup group_of(std::string_view param_name) noexcept {
  return param_name == param_names::kProxies ? ParamGroup::Proxy : ParamGroup::Backbone;
}

void adamw_step(ParamSet& params, const GradientReport& grads, AdamWState& state,
                const TrainConfig& cfg, ParamGroup group) {
  std::vector<std::string> names;
  for (const auto& [name, t] : params.entries()) {
    if (group_of(name) != group) continue;
    const Tensor& g = grads.grad(name);
    if (g.size() != t.size()) throw Error(ErrorKind::Dimension, "gradient shape mismatch for '" + name + "'");
    if (!g.all_finite()) throw Error(ErrorKind::Evaluation, "non-finite gradient in '" + name + "'; step aborted");
    names.push_back(name);
  }
  if (names.empty()) return;

  std::size_t& t = group == ParamGroup::Proxy ? state.proxy_steps : state.backbone_steps;
  ++t;
  const double lr = group == ParamGroup::Proxy ? cfg.lr_proxy : cfg.lr_backbone;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (const std::string& name : names) {
    auto w = params.values(name);
    const auto& g = grads.grad(name).data;
    auto& mom = state.moments[name];
    if (mom.m.empty()) {
      mom.m.assign(w.size(), 0.0);
      mom.v.assign(w.size(), 0.0);
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      mom.m[i] = cfg.beta1 * mom.m[i] + (1.0 - cfg.beta1) * g[i];
      mom.v[i] = cfg.beta2 * mom.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = mom.m[i] / bc1;
      const double v_hat = mom.v[i] / bc2;
      w[i] = w[i] - lr * (m_hat / (std::sqrt(v_hat) + cfg.adam_eps)) - lr * cfg.weight_decay * w[i];
    }
  }
}

namespace {
constexpr std::uint64_t kTripletStream = 0x9e3779b97f4a7c15ULL;
}

Trainer::Trainer(ModelDims dims, BallConfig ball, LossParams loss, TrainConfig train)
    : Trainer(dims, ball, loss, train, init_params(train.seed, dims)) {}

Trainer::Trainer(ModelDims dims, BallConfig ball, LossParams loss, TrainConfig train, ParamSet initial)
    : dims_(dims),
      ball_(ball),
      loss_(loss),
      train_(train),
      params_(std::move(initial)),
      batch_rng_(train.seed),
      sampler_(train.seed ^ kTripletStream, dims.classes, dims.per_class) {
  dims_.validate();
  ball_.validate();
  loss_.validate();
  train_.validate(loss_, dims_.per_class);
}

std::vector<Triplet> Trainer::draw_triplets(TripletSampler& sampler) const {
  if (loss_.tau > 0.0 && train_.triplets_per_step > 0) return sampler.sample(train_.triplets_per_step);
  return {};
}

LossFn Trainer::make_loss(const Batch& batch, const std::vector<Triplet>& triplets, LossBreakdown& out) const {
  return [this, &batch, &triplets, &out](Tape& tape, const ParamVars& p) {
    const Var inputs = tape.constant(batch.inputs);
    const Var weight = p[param_names::kHeadWeight];
    const Var bias = p[param_names::kHeadBias];
    const Var proxies_E = p[param_names::kProxies];
    const Var x_E = encode_graph(p, dims_.encoder, inputs);
    const Var x_H = map_graph(weight, bias, x_E, ball_);
    const Var proxies_H = map_graph(weight, bias, proxies_E, ball_);
    const auto sim = loss_graph::similarity(x_E, x_H, batch.labels, proxies_E, proxies_H,
                                            dims_.per_class, loss_, ball_);
    const Var reg = triplets.empty()
                        ? tape.constant(Tensor::scalar(0.0))
                        : loss_graph::hyphc(proxies_H, triplets, dims_.per_class, loss_.gamma_hyp, ball_);
    out = combined_loss(sim.l_hyperbolic.value().item(), sim.l_euclidean.value().item(), reg.value().item(), loss_);
    return loss_graph::combined(sim.l_hyperbolic, sim.l_euclidean, reg, loss_);
  };
}

LossBreakdown Trainer::train_step(const Batch& batch) {
  const std::vector<Triplet> triplets = draw_triplets(sampler_);
  LossBreakdown breakdown;
  const GradientReport grads = backward(make_loss(batch, triplets, breakdown), params_);
  if (!grads.finite) {
    for (const auto& [name, g] : grads.grads) {
      if (!g.all_finite()) throw Error(ErrorKind::Evaluation, "non-finite gradient in '" + name + "' at step " + std::to_string(steps_));
    }
  }
  adamw_step(params_, grads, opt_, train_, ParamGroup::Backbone);
  adamw_step(params_, grads, opt_, train_, ParamGroup::Proxy);
  for (const auto& [name, t] : params_.entries()) {
    if (!t.all_finite()) throw Error(ErrorKind::Evaluation, "parameter '" + name + "' became non-finite at step " + std::to_string(steps_));
  }
  ++steps_;
  return breakdown;
}

LossBreakdown Trainer::step(const VectorDataset& data) {
  return train_step(sample_batch(data, train_.batch_size, batch_rng_));
}

LossBreakdown Trainer::evaluate_loss(const Batch& batch) const {
  TripletSampler probe = sampler_;
  const std::vector<Triplet> triplets = draw_triplets(probe);
  LossBreakdown breakdown;
  evaluate(make_loss(batch, triplets, breakdown), params_);
  return breakdown;
}

}  // namespace chest
