#include "chest/config.hpp"

#include <fstream>
#include <sstream>

#include "chest/error.hpp"

namespace chest {

using nlohmann::json;

ModelDims ExperimentConfig::model_dims(std::size_t classes) const {
  return ModelDims{encoder, hyp_dim, classes, per_class};
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  auto collect = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      problems.emplace_back(e.what());
    }
  };
  collect([&] { ball.validate(); });
  collect([&] { loss.validate(); });
  collect([&] { train.validate(loss, per_class); });
  collect([&] { encoder.validate(); });
  if (data.synthetic_source()) {
    collect([&] { data.synthetic.validate(); });
    if (data.synthetic.input_dim != encoder.input_dim) {
      problems.emplace_back("model.input_dim (" + std::to_string(encoder.input_dim) +
                            ") must equal data.synthetic.input_dim (" +
                            std::to_string(data.synthetic.input_dim) + ")");
    }
  } else if (data.test_path.empty()) {
    problems.emplace_back("data.test_path is required when data.train_path is set");
  }
  if (hyp_dim == 0) problems.emplace_back("model.hyp_dim must be > 0");
  if (per_class < 1) problems.emplace_back("model.per_class (K) must be >= 1");
  if (log_every < 1) problems.emplace_back("train.log_every must be >= 1");
  for (std::size_t k : eval.ks) {
    if (k == 0) problems.emplace_back("eval.ks entries must be >= 1");
  }
  if (ablate.k_max < 2) problems.emplace_back("ablate.k_max must be >= 2");
  if (!(ablate.tau > 0.0)) problems.emplace_back("ablate.tau must be > 0");
  if (problems.empty()) return;
  std::string msg = std::to_string(problems.size()) + " problem(s):";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw Error(ErrorKind::Validation, msg);
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

json to_json(const ExperimentConfig& c) {
  json j;
  j["ball"] = {{"curvature", c.ball.curvature},
               {"clip_radius", c.ball.clip_radius},
               {"boundary_eps", c.ball.boundary_eps},
               {"arctanh_eps", c.ball.arctanh_eps}};
  j["loss"] = {{"gamma_E", c.loss.gamma_E},   {"gamma_H", c.loss.gamma_H},
               {"lambda_E", c.loss.lambda_E}, {"lambda_H", c.loss.lambda_H},
               {"delta_E", c.loss.delta_E},   {"delta_H", c.loss.delta_H},
               {"eta_E", c.loss.eta_E},       {"eta_H", c.loss.eta_H},
               {"gamma_hyp", c.loss.gamma_hyp}, {"tau", c.loss.tau}};
  j["train"] = {{"batch_size", c.train.batch_size},
                {"steps", c.train.steps},
                {"lr_backbone", c.train.lr_backbone},
                {"lr_proxy", c.train.lr_proxy},
                {"weight_decay", c.train.weight_decay},
                {"beta1", c.train.beta1},
                {"beta2", c.train.beta2},
                {"adam_eps", c.train.adam_eps},
                {"triplets_per_step", c.train.triplets_per_step},
                {"seed", c.train.seed},
                {"log_every", c.log_every}};
  j["model"] = {{"encoder", to_string(c.encoder.kind)},
                {"input_dim", c.encoder.input_dim},
                {"embed_dim", c.encoder.embed_dim},
                {"hidden_dim", c.encoder.hidden_dim},
                {"hyp_dim", c.hyp_dim},
                {"per_class", c.per_class}};
  const HierarchySpec& h = c.data.synthetic;
  j["data"] = {{"train_path", c.data.train_path},
               {"test_path", c.data.test_path},
               {"synthetic",
                {{"super_classes", h.super_classes},
                 {"sub_per_super", h.sub_per_super},
                 {"train_per_class", h.train_per_class},
                 {"test_per_class", h.test_per_class},
                 {"input_dim", h.input_dim},
                 {"super_scale", h.super_scale},
                 {"sub_scale", h.sub_scale},
                 {"noise_scale", h.noise_scale},
                 {"seed", h.seed}}}};
  j["eval"] = {{"ks", c.eval.ks}, {"every", c.eval.every}, {"checkpoint", c.eval.checkpoint}};
  j["ablate"] = {{"k_max", c.ablate.k_max}, {"tau", c.ablate.tau}, {"seeds", c.ablate.seeds}};
  j["output"] = {{"dir", c.out_dir}};
  return j;
}

namespace {

// Recursively overlays `src` onto `dst`, rejecting keys that `dst` does not have.
void merge_known(json& dst, const json& src, const std::string& prefix, std::vector<std::string>& unknown) {
  for (auto it = src.begin(); it != src.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!dst.contains(it.key())) {
      unknown.push_back(key);
      continue;
    }
    json& target = dst[it.key()];
    if (target.is_object() && it->is_object()) {
      merge_known(target, *it, key, unknown);
    } else {
      target = *it;
    }
  }
}

template <typename T>
T get_as(const json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Validation, std::string(section) + "." + key + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& input) {
  if (!input.is_object()) throw Error(ErrorKind::Validation, "config root must be an object");
  json j = to_json(default_config());
  std::vector<std::string> unknown;
  merge_known(j, input, "", unknown);
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw Error(ErrorKind::Validation, msg);
  }
  ExperimentConfig c;
  c.ball.curvature = get_as<double>(j, "ball", "curvature");
  c.ball.clip_radius = get_as<double>(j, "ball", "clip_radius");
  c.ball.boundary_eps = get_as<double>(j, "ball", "boundary_eps");
  c.ball.arctanh_eps = get_as<double>(j, "ball", "arctanh_eps");

  c.loss.gamma_E = get_as<double>(j, "loss", "gamma_E");
  c.loss.gamma_H = get_as<double>(j, "loss", "gamma_H");
  c.loss.lambda_E = get_as<double>(j, "loss", "lambda_E");
  c.loss.lambda_H = get_as<double>(j, "loss", "lambda_H");
  c.loss.delta_E = get_as<double>(j, "loss", "delta_E");
  c.loss.delta_H = get_as<double>(j, "loss", "delta_H");
  c.loss.eta_E = get_as<double>(j, "loss", "eta_E");
  c.loss.eta_H = get_as<double>(j, "loss", "eta_H");
  c.loss.gamma_hyp = get_as<double>(j, "loss", "gamma_hyp");
  c.loss.tau = get_as<double>(j, "loss", "tau");

  c.train.batch_size = get_as<std::size_t>(j, "train", "batch_size");
  c.train.steps = get_as<std::size_t>(j, "train", "steps");
  c.train.lr_backbone = get_as<double>(j, "train", "lr_backbone");
  c.train.lr_proxy = get_as<double>(j, "train", "lr_proxy");
  c.train.weight_decay = get_as<double>(j, "train", "weight_decay");
  c.train.beta1 = get_as<double>(j, "train", "beta1");
  c.train.beta2 = get_as<double>(j, "train", "beta2");
  c.train.adam_eps = get_as<double>(j, "train", "adam_eps");
  c.train.triplets_per_step = get_as<std::size_t>(j, "train", "triplets_per_step");
  c.train.seed = get_as<std::uint64_t>(j, "train", "seed");
  c.log_every = get_as<std::size_t>(j, "train", "log_every");

  c.encoder.kind = encoder_kind_from_string(get_as<std::string>(j, "model", "encoder"));
  c.encoder.input_dim = get_as<std::size_t>(j, "model", "input_dim");
  c.encoder.embed_dim = get_as<std::size_t>(j, "model", "embed_dim");
  c.encoder.hidden_dim = get_as<std::size_t>(j, "model", "hidden_dim");
  c.hyp_dim = get_as<std::size_t>(j, "model", "hyp_dim");
  c.per_class = get_as<std::size_t>(j, "model", "per_class");

  c.data.train_path = get_as<std::string>(j, "data", "train_path");
  c.data.test_path = get_as<std::string>(j, "data", "test_path");
  const json& s = j["data"]["synthetic"];
  try {
    c.data.synthetic.super_classes = s.at("super_classes").get<std::size_t>();
    c.data.synthetic.sub_per_super = s.at("sub_per_super").get<std::size_t>();
    c.data.synthetic.train_per_class = s.at("train_per_class").get<std::size_t>();
    c.data.synthetic.test_per_class = s.at("test_per_class").get<std::size_t>();
    c.data.synthetic.input_dim = s.at("input_dim").get<std::size_t>();
    c.data.synthetic.super_scale = s.at("super_scale").get<double>();
    c.data.synthetic.sub_scale = s.at("sub_scale").get<double>();
    c.data.synthetic.noise_scale = s.at("noise_scale").get<double>();
    c.data.synthetic.seed = s.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("data.synthetic: ") + e.what());
  }

  c.eval.ks = get_as<std::vector<std::size_t>>(j, "eval", "ks");
  c.eval.every = get_as<std::size_t>(j, "eval", "every");
  c.eval.checkpoint = get_as<std::string>(j, "eval", "checkpoint");
  c.ablate.k_max = get_as<std::size_t>(j, "ablate", "k_max");
  c.ablate.tau = get_as<double>(j, "ablate", "tau");
  c.ablate.seeds = get_as<std::vector<std::uint64_t>>(j, "ablate", "seeds");
  c.out_dir = get_as<std::string>(j, "output", "dir");
  return c;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorKind::Validation, "override '" + assignment + "' is not key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw Error(ErrorKind::Validation, "override path '" + path + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
    j = json::parse(in, nullptr, false, true);
    if (j.is_discarded()) throw Error(ErrorKind::Parse, "config " + path.string() + " is not valid JSON");
  }
  for (const auto& o : overrides) apply_override(j, o);
  ExperimentConfig c = config_from_json(j);
  c.validate();
  return c;
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write config " + path.string());
  out << to_json(cfg).dump(2) << '\n';
}

}  // namespace chest
