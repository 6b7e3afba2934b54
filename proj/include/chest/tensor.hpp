#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chest {

/// Dense row-major double tensor. Rank-2 views treat every axis but the last as rows.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape_);
  Tensor(std::vector<std::size_t> shape_, std::vector<double> data_);

  static Tensor scalar(double v) { return Tensor({}, {v}); }
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t size() const noexcept { return data.size(); }
  std::size_t rank() const noexcept { return shape.size(); }
  std::size_t cols() const noexcept { return shape.empty() ? 1 : shape.back(); }
  std::size_t rows() const noexcept { return cols() == 0 ? 0 : data.size() / cols(); }

  std::span<const double> row(std::size_t i) const noexcept { return {data.data() + i * cols(), cols()}; }
  std::span<double> row(std::size_t i) noexcept { return {data.data() + i * cols(), cols()}; }

  double item() const;
  bool all_finite() const noexcept;
  bool operator==(const Tensor&) const = default;
};

std::size_t shape_size(const std::vector<std::size_t>& shape) noexcept;
std::string shape_string(const std::vector<std::size_t>& shape);

/// Ordered, uniquely named tensors. Shapes are fixed once added; values may be updated in place.
class ParamSet {
 public:
  void add(std::string name, Tensor value);

  bool contains(std::string_view name) const noexcept;
  const Tensor& get(std::string_view name) const;
  // Mutable access to values only; the shape is not exposed for modification.
  std::span<double> values(std::string_view name);

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<std::pair<std::string, Tensor>>& entries() const noexcept { return entries_; }
  std::vector<std::string> names() const;

  bool operator==(const ParamSet&) const = default;

 private:
  std::size_t index_of(std::string_view name) const;

  std::vector<std::pair<std::string, Tensor>> entries_;
};

}  // namespace chest
