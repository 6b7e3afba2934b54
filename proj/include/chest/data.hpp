#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "chest/tensor.hpp"

namespace chest {

enum class Split { Train, Test };

struct VectorDataset {
  Tensor features;          // N x input_dim
  std::vector<int> labels;  // contiguous in [0, C)
  Split split = Split::Train;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t input_dim() const noexcept { return features.cols(); }
  std::size_t num_classes() const noexcept;

  /// Every class in [0, C) has at least one item; shapes agree; features finite.
  void validate() const;
};

struct HierarchySpec {
  std::size_t super_classes = 2;
  std::size_t sub_per_super = 4;
  std::size_t train_per_class = 100;
  std::size_t test_per_class = 50;
  std::size_t input_dim = 64;
  double super_scale = 3.0;
  double sub_scale = 1.0;
  double noise_scale = 0.5;
  std::uint64_t seed = 7;

  std::size_t classes() const noexcept { return super_classes * sub_per_super; }
  void validate() const;
};

/// Two-level Gaussian hierarchy: super means, sub-class means around them, samples around those.
/// Class id = super * sub_per_super + sub.
std::pair<VectorDataset, VectorDataset> generate_hierarchy(const HierarchySpec& spec);

struct LoadedDataset {
  VectorDataset data;
  // (label as written in the file, contiguous label), sorted by original label.
  std::vector<std::pair<long long, int>> label_mapping;
};

/// Rows are `label,f1,...,fd`; blank lines and lines starting with '#' are skipped.
LoadedDataset parse_dataset(std::istream& in, Split split, const std::string& source = "<stream>");
LoadedDataset load_dataset(const std::filesystem::path& path, Split split);

/// Writes labels as stored and features with 17 significant digits.
void write_dataset(std::ostream& out, const VectorDataset& data);
void save_dataset(const std::filesystem::path& path, const VectorDataset& data);

}  // namespace chest
