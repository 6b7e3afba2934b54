#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "chest/error.hpp"
#include "chest/metrics_log.hpp"
#include "support.hpp"

namespace chest {
namespace {

MetricsRecord sample_record(std::size_t step) {
  MetricsRecord r;
  r.step = step;
  r.l_hyperbolic = 0.1 + 1.0 / 3.0;
  r.l_euclidean = 2.718281828459045;
  r.l_hyphc = 1e-17;
  r.total = r.l_hyperbolic + r.l_euclidean + 0.5 * r.l_hyphc;
  r.wall_time = 0.25 * static_cast<double>(step);
  return r;
}

TEST(MetricsRecord, RoundTripIsExact) {
  testing::Gen g(3);
  for (int i = 0; i < 200; ++i) {
    MetricsRecord r = sample_record(static_cast<std::size_t>(i));
    r.l_hyperbolic = g.normal() * 1e3;
    r.l_euclidean = std::exp(g.normal() * 30.0);
    if (i % 2 == 0) {
      SpaceMetrics m;
      m.recall_at = {{1, g.uniform(0.0, 1.0)}, {4, g.uniform(0.0, 1.0)}};
      m.map_at_r = g.uniform(0.0, 1.0);
      r.eval_E = m;
      m.map_at_r = g.uniform(0.0, 1.0);
      r.eval_H = m;
    }
    EXPECT_EQ(parse_record(format_record(r)), r);
  }
}

TEST(MetricsRecord, FieldOrder) {
  const std::string line = format_record(sample_record(3));
  const auto step = line.find("\"step\"");
  const auto lh = line.find("\"l_hyperbolic\"");
  const auto total = line.find("\"total\"");
  const auto wall = line.find("\"wall_time\"");
  ASSERT_NE(step, std::string::npos);
  EXPECT_LT(step, lh);
  EXPECT_LT(lh, total);
  EXPECT_LT(total, wall);
}

TEST(MetricsRecord, NonFiniteRefused) {
  MetricsRecord r = sample_record(1);
  r.l_hyphc = NAN;
  EXPECT_THROW(format_record(r), Error);
  r = sample_record(1);
  r.total = INFINITY;
  EXPECT_THROW(format_record(r), Error);
  r = sample_record(1);
  r.eval_H = SpaceMetrics{{{1, NAN}}, 0.5};
  EXPECT_THROW(format_record(r), Error);
}

TEST(MetricsRecord, MalformedLines) {
  EXPECT_THROW(parse_record("not json"), Error);
  EXPECT_THROW(parse_record("[1,2]"), Error);
  EXPECT_THROW(parse_record(R"({"step": 1})"), Error);
}

TEST(MetricsLog, TwoRecordsTwoLines) {
  std::ostringstream out;
  MetricsLog log(out);
  log.emit(sample_record(1));
  log.emit(sample_record(2));
  std::istringstream in(out.str());
  std::string a, b, c;
  ASSERT_TRUE(std::getline(in, a));
  ASSERT_TRUE(std::getline(in, b));
  EXPECT_FALSE(std::getline(in, c));
  EXPECT_EQ(parse_record(a).step, 1u);
  EXPECT_EQ(parse_record(b).step, 2u);
}

TEST(MetricsLog, StepsMustNotDecrease) {
  std::ostringstream out;
  MetricsLog log(out);
  log.emit(sample_record(5));
  log.emit(sample_record(5));
  EXPECT_THROW(log.emit(sample_record(4)), Error);
  EXPECT_NO_THROW(log.emit(sample_record(6)));
}

TEST(MetricsLog, FileAppend) {
  const auto dir = testing::temp_dir("metrics_log");
  const auto path = dir / "m.jsonl";
  std::filesystem::remove(path);
  {
    MetricsLog log(path);
    log.emit(sample_record(1));
  }
  {
    MetricsLog log(path);
    log.emit(sample_record(2));
  }
  std::ifstream in(path);
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 2u);
  EXPECT_THROW(MetricsLog(dir / "no_such_dir" / "m.jsonl"), Error);
}

}  // namespace
}  // namespace chest
