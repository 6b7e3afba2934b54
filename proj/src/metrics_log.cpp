#include "chest/metrics_log.hpp"

#include <cmath>

#include <json.hpp>

#include "chest/error.hpp"

namespace chest {

using nlohmann::json;
// Records keep their field order on disk.
using ordered = nlohmann::ordered_json;

SpaceMetrics to_space_metrics(const MetricsReport& r) { return SpaceMetrics{r.recall_at, r.map_at_r}; }

MetricsRecord MetricsRecord::from_losses(std::size_t step, const LossBreakdown& b, double wall_time) {
  MetricsRecord r;
  r.step = step;
  r.l_hyperbolic = b.l_hyperbolic;
  r.l_euclidean = b.l_euclidean;
  r.l_hyphc = b.l_hyphc;
  r.total = b.total;
  r.wall_time = wall_time;
  return r;
}

namespace {

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw Error(ErrorKind::Evaluation, std::string("refusing to log non-finite ") + field);
}

ordered space_json(const SpaceMetrics& m) {
  ordered recall = ordered::object();
  for (const auto& [k, v] : m.recall_at) {
    require_finite(v, "recall");
    recall[std::to_string(k)] = v;
  }
  require_finite(m.map_at_r, "map_at_r");
  return {{"recall_at", recall}, {"map_at_r", m.map_at_r}};
}

SpaceMetrics space_from(const json& j) {
  SpaceMetrics m;
  for (auto it = j.at("recall_at").begin(); it != j.at("recall_at").end(); ++it) {
    m.recall_at[static_cast<std::size_t>(std::stoull(it.key()))] = it->get<double>();
  }
  m.map_at_r = j.at("map_at_r").get<double>();
  return m;
}

}  // namespace

std::string format_record(const MetricsRecord& r) {
  require_finite(r.l_hyperbolic, "l_hyperbolic");
  require_finite(r.l_euclidean, "l_euclidean");
  require_finite(r.l_hyphc, "l_hyphc");
  require_finite(r.total, "total");
  require_finite(r.wall_time, "wall_time");
  ordered j = {{"step", r.step},
            {"l_hyperbolic", r.l_hyperbolic},
            {"l_euclidean", r.l_euclidean},
            {"l_hyphc", r.l_hyphc},
            {"total", r.total}};
  if (r.eval_E) j["eval_E"] = space_json(*r.eval_E);
  if (r.eval_H) j["eval_H"] = space_json(*r.eval_H);
  j["wall_time"] = r.wall_time;
  return j.dump();
}

MetricsRecord parse_record(std::string_view line) {
  const json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::Parse, "metrics record is not a JSON object");
  try {
    MetricsRecord r;
    r.step = j.at("step").get<std::size_t>();
    r.l_hyperbolic = j.at("l_hyperbolic").get<double>();
    r.l_euclidean = j.at("l_euclidean").get<double>();
    r.l_hyphc = j.at("l_hyphc").get<double>();
    r.total = j.at("total").get<double>();
    if (j.contains("eval_E")) r.eval_E = space_from(j.at("eval_E"));
    if (j.contains("eval_H")) r.eval_H = space_from(j.at("eval_H"));
    r.wall_time = j.at("wall_time").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("metrics record: ") + e.what());
  }
}

MetricsLog::MetricsLog(const std::filesystem::path& path) : file_(path, std::ios::app) {
  if (!file_) throw Error(ErrorKind::Io, "cannot open metrics log " + path.string());
  out_ = &file_;
}

void MetricsLog::emit(const MetricsRecord& r) {
  if (last_step_ && r.step < *last_step_) {
    throw Error(ErrorKind::InvalidInput, "metrics step " + std::to_string(r.step) + " after step " + std::to_string(*last_step_));
  }
  const std::string line = format_record(r);
  *out_ << line << '\n';
  out_->flush();
  if (!*out_) throw Error(ErrorKind::Io, "failed writing metrics record");
  last_step_ = r.step;
}

}  // namespace chest
