#include "chest/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "chest/error.hpp"

namespace chest {

std::size_t shape_size(const std::vector<std::size_t>& shape) noexcept {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(std::vector<std::size_t> shape_)
    : shape(std::move(shape_)), data(shape_size(shape), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape_, std::vector<double> data_)
    : shape(std::move(shape_)), data(std::move(data_)) {
  if (shape_size(shape) != data.size()) {
    throw Error(ErrorKind::Dimension, "tensor of shape " + shape_string(shape) + " given " +
                                          std::to_string(data.size()) + " values");
  }
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

double Tensor::item() const {
  if (data.size() != 1) throw Error(ErrorKind::Dimension, "item() on tensor of size " + std::to_string(data.size()));
  return data[0];
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); });
}

void ParamSet::add(std::string name, Tensor value) {
  if (contains(name)) throw Error(ErrorKind::InvalidInput, "duplicate parameter name '" + name + "'");
  if (!value.all_finite()) throw Error(ErrorKind::InvalidInput, "parameter '" + name + "' has non-finite entries");
  entries_.emplace_back(std::move(name), std::move(value));
}

bool ParamSet::contains(std::string_view name) const noexcept {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == name; });
}

std::size_t ParamSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].first == name) return i;
  }
  throw Error(ErrorKind::InvalidInput, "unknown parameter '" + std::string(name) + "'");
}

const Tensor& ParamSet::get(std::string_view name) const { return entries_[index_of(name)].second; }

std::span<double> ParamSet::values(std::string_view name) { return entries_[index_of(name)].second.data; }

std::vector<std::string> ParamSet::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

}  // namespace chest
