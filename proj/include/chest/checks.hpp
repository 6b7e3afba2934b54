#pragma once

// Self-check suites behind `chest check-geometry` and `chest check-grad`.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace chest {

struct CheckItem {
  std::string name;
  double curvature = 0.0;
  std::size_t samples = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckItem> items;
  double seconds = 0.0;

  bool pass() const noexcept;
};

struct GeometrySuiteOptions {
  std::vector<double> curvatures{0.5, 1.0};
  std::size_t samples = 10000;
  std::size_t anchor_samples = 1000;
  std::size_t dim = 8;
  std::uint64_t seed = 2024;
};

struct GradientSuiteOptions {
  std::size_t configurations = 100;
  double curvature = 0.5;
  double clip_radius = 2.3;
  double step = 1e-5;
  double tolerance = 1e-4;
  std::uint64_t seed = 99;
};

CheckReport run_geometry_suite(const GeometrySuiteOptions& opts);
CheckReport run_gradient_suite(const GradientSuiteOptions& opts);

void print_report(std::ostream& out, const CheckReport& report);

}  // namespace chest
