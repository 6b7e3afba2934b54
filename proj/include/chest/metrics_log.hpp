#pragma once

// One JSON object per line. Doubles are written in shortest round-trip form,
// so parse(format(r)) == r exactly.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "chest/eval.hpp"
#include "chest/losses.hpp"

namespace chest {

struct SpaceMetrics {
  std::map<std::size_t, double> recall_at;
  double map_at_r = 0.0;
  bool operator==(const SpaceMetrics&) const = default;
};

SpaceMetrics to_space_metrics(const MetricsReport& r);

struct MetricsRecord {
  std::size_t step = 0;
  double l_hyperbolic = 0.0;
  double l_euclidean = 0.0;
  double l_hyphc = 0.0;
  double total = 0.0;
  std::optional<SpaceMetrics> eval_E;
  std::optional<SpaceMetrics> eval_H;
  double wall_time = 0.0;

  static MetricsRecord from_losses(std::size_t step, const LossBreakdown& b, double wall_time);
  bool operator==(const MetricsRecord&) const = default;
};

/// Throws Error(Evaluation) if any numeric field is non-finite.
std::string format_record(const MetricsRecord& r);
MetricsRecord parse_record(std::string_view line);

/// Append-only sink; step numbers must not decrease.
class MetricsLog {
 public:
  explicit MetricsLog(const std::filesystem::path& path);
  explicit MetricsLog(std::ostream& out) : out_(&out) {}

  void emit(const MetricsRecord& r);

 private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
  std::optional<std::size_t> last_step_;
};

}  // namespace chest
