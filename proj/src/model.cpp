#include "chest/model.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "chest/error.hpp"
#include "chest/ops.hpp"

namespace chest {

void EncoderSpec::validate() const {
  std::ostringstream bad;
  if (input_dim == 0) bad << " encoder.input_dim must be > 0;";
  if (embed_dim == 0) bad << " encoder.embed_dim must be > 0;";
  if (kind == EncoderKind::Mlp2 && hidden_dim == 0) bad << " encoder.hidden_dim must be > 0 for mlp2;";
  if (!bad.str().empty()) throw Error(ErrorKind::Validation, "encoder:" + bad.str());
}

std::string to_string(EncoderKind kind) { return kind == EncoderKind::Mlp2 ? "mlp2" : "linear"; }

EncoderKind encoder_kind_from_string(const std::string& s) {
  if (s == "linear") return EncoderKind::Linear;
  if (s == "mlp2") return EncoderKind::Mlp2;
  throw Error(ErrorKind::Validation, "encoder.kind must be linear or mlp2, got '" + s + "'");
}

void ModelDims::validate() const {
  encoder.validate();
  std::ostringstream bad;
  if (hyp_dim == 0) bad << " model.hyp_dim must be > 0;";
  if (classes < 2) bad << " need at least 2 classes;";
  if (per_class < 1) bad << " proxies.per_class must be >= 1;";
  if (!bad.str().empty()) throw Error(ErrorKind::Validation, "model:" + bad.str());
}

ParamSet init_params(std::uint64_t seed, const ModelDims& dims) {
  dims.validate();
  std::mt19937_64 rng(seed);
  auto gaussian = [&](std::vector<std::size_t> shape, double stddev) {
    Tensor t(std::move(shape));
    std::normal_distribution<double> dist(0.0, stddev);
    for (double& v : t.data) v = dist(rng);
    return t;
  };
  const EncoderSpec& e = dims.encoder;
  ParamSet p;
  if (e.kind == EncoderKind::Linear) {
    p.add(param_names::kEncoderW1, gaussian({e.embed_dim, e.input_dim}, kInitWeightStd));
    p.add(param_names::kEncoderB1, Tensor({e.embed_dim}));
  } else {
    p.add(param_names::kEncoderW1, gaussian({e.hidden_dim, e.input_dim}, kInitWeightStd));
    p.add(param_names::kEncoderB1, Tensor({e.hidden_dim}));
    p.add(param_names::kEncoderW2, gaussian({e.embed_dim, e.hidden_dim}, kInitWeightStd));
    p.add(param_names::kEncoderB2, Tensor({e.embed_dim}));
  }
  p.add(param_names::kHeadWeight, gaussian({dims.hyp_dim, e.embed_dim}, kInitWeightStd));
  p.add(param_names::kHeadBias, Tensor({dims.hyp_dim}));
  p.add(param_names::kProxies, gaussian({dims.classes, dims.per_class, e.embed_dim}, kInitProxyStd));
  return p;
}

Var encode_graph(const ParamVars& params, const EncoderSpec& spec, Var inputs) {
  if (inputs.value().cols() != spec.input_dim) {
    throw Error(ErrorKind::Dimension, "encoder expects " + std::to_string(spec.input_dim) +
                                          " input features, got " + std::to_string(inputs.value().cols()));
  }
  Var h = ops::linear(inputs, params[param_names::kEncoderW1], params[param_names::kEncoderB1]);
  if (spec.kind == EncoderKind::Mlp2) {
    h = ops::linear(ops::relu(h), params[param_names::kEncoderW2], params[param_names::kEncoderB2]);
  }
  return h;
}

Tensor encode(const ParamSet& params, const EncoderSpec& spec, const Tensor& inputs) {
  Tape tape(false);
  ParamVars vars;
  for (const auto& [name, t] : params.entries()) vars.add(name, tape.constant(t));
  return encode_graph(vars, spec, tape.constant(inputs)).value();
}

MappingHead MappingHead::from_params(const ParamSet& params, const BallConfig& ball) {
  return MappingHead{params.get(param_names::kHeadWeight), params.get(param_names::kHeadBias), ball};
}

Var map_graph(Var weight, Var bias, Var x_E, const BallConfig& ball) {
  return ops::exp_map_zero_rows(ops::clip_rows(ops::linear(x_E, weight, bias), ball.clip_radius), ball);
}

Tensor MappingHead::apply_rows(const Tensor& x_E) const {
  Tape tape(false);
  const Var rows = tape.constant(Tensor({x_E.rows(), x_E.cols()}, x_E.data));
  return map_graph(tape.constant(weight), tape.constant(bias), rows, ball).value();
}

PoincarePoint map_to_hyperbolic(const MappingHead& head, const EuclideanVector& x_E) {
  for (double v : x_E.coords) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "non-finite Euclidean feature");
  }
  const Tensor out = head.apply_rows(Tensor({1, x_E.dim()}, x_E.coords));
  return PoincarePoint(out.data);
}

ProxyBank ProxyBank::from_params(const ParamSet& params) {
  const Tensor& p = params.get(param_names::kProxies);
  if (p.rank() != 3) throw Error(ErrorKind::Dimension, "proxies must be C x K x D");
  return ProxyBank{p, p.shape[0], p.shape[1]};
}

ProxyViews proxy_views(const ProxyBank& bank, const MappingHead& head) {
  if (bank.proxies.cols() != head.weight.cols()) {
    throw Error(ErrorKind::Dimension, "proxy dimension " + std::to_string(bank.proxies.cols()) +
                                          " != head input " + std::to_string(head.weight.cols()));
  }
  ProxyViews v;
  v.classes = bank.classes;
  v.per_class = bank.per_class;
  v.euclidean = bank.proxies;
  Tensor mapped = head.apply_rows(bank.proxies);
  v.hyperbolic = Tensor({bank.classes, bank.per_class, mapped.cols()}, std::move(mapped.data));
  return v;
}

void write_checkpoint(std::ostream& out, const ParamSet& params) {
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "tensors " << params.size() << '\n';
  out << std::setprecision(17);
  for (const auto& [name, t] : params.entries()) {
    out << "tensor " << name << ' ' << t.rank();
    for (std::size_t d : t.shape) out << ' ' << d;
    out << '\n';
    for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t.data[i];
    out << '\n';
  }
  out << "end\n";
}

ParamSet read_checkpoint(std::istream& in) {
  auto fail = [](const std::string& msg) { return Error(ErrorKind::Parse, "checkpoint: " + msg); };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kCheckpointMagic) throw fail("missing header");
  if (version != kCheckpointVersion) throw fail("unsupported version " + std::to_string(version));
  std::string word;
  std::size_t count = 0;
  if (!(in >> word >> count) || word != "tensors") throw fail("missing tensor count");
  ParamSet params;
  for (std::size_t n = 0; n < count; ++n) {
    std::string name;
    std::size_t rank = 0;
    if (!(in >> word >> name >> rank) || word != "tensor") throw fail("bad tensor header #" + std::to_string(n));
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) {
      if (!(in >> d)) throw fail("bad shape for '" + name + "'");
    }
    std::vector<double> data(shape_size(shape));
    for (auto& v : data) {
      if (!(in >> v)) throw fail("truncated values for '" + name + "'");
    }
    params.add(name, Tensor(std::move(shape), std::move(data)));
  }
  if (!(in >> word) || word != "end") throw fail("missing end marker");
  return params;
}

void save_checkpoint(const std::filesystem::path& path, const ParamSet& params) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write checkpoint " + path.string());
  write_checkpoint(out, params);
  if (!out) throw Error(ErrorKind::Io, "failed writing checkpoint " + path.string());
}

ParamSet load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace chest
