#pragma once

// Hand-rolled generators shared by the test suites.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "chest/tensor.hpp"

namespace chest::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double sd = 1.0) { return std::normal_distribution<double>(0.0, sd)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  int label(int classes) { return std::uniform_int_distribution<int>(0, classes - 1)(rng_); }

  std::vector<double> vec(std::size_t n, double sd = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = normal(sd);
    return v;
  }

  // Uniform direction with norm uniform in [0, max_norm].
  std::vector<double> in_ball(std::size_t n, double max_norm) {
    std::vector<double> v = vec(n);
    double nn = 0.0;
    for (double x : v) nn += x * x;
    const double s = uniform(0.0, max_norm) / std::sqrt(nn);
    for (double& x : v) x *= s;
    return v;
  }

  Tensor tensor(std::vector<std::size_t> shape, double sd = 1.0) {
    Tensor t(std::move(shape));
    for (double& x : t.data) x = normal(sd);
    return t;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline std::filesystem::path temp_dir(const std::string& name) {
  const char* base = std::getenv("CHEST_TEST_TMP");
  std::filesystem::path root = base ? base : std::filesystem::temp_directory_path() / "chest_tests";
  std::filesystem::path dir = root / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace chest::testing
