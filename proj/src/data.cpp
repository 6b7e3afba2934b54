#include "chest/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "chest/error.hpp"

namespace chest {

std::size_t VectorDataset::num_classes() const noexcept {
  if (labels.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
}

void VectorDataset::validate() const {
  if (labels.empty()) throw Error(ErrorKind::Validation, "dataset is empty");
  if (features.rows() != labels.size()) throw Error(ErrorKind::Dimension, "feature rows and labels differ in count");
  if (!features.all_finite()) throw Error(ErrorKind::Validation, "dataset has non-finite features");
  std::vector<std::size_t> counts(num_classes(), 0);
  for (int l : labels) {
    if (l < 0) throw Error(ErrorKind::Validation, "negative label");
    ++counts[static_cast<std::size_t>(l)];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) throw Error(ErrorKind::Validation, "class " + std::to_string(c) + " has no items");
  }
}

void HierarchySpec::validate() const {
  std::ostringstream bad;
  if (super_classes == 0) bad << " data.synthetic.super_classes must be > 0;";
  if (sub_per_super == 0) bad << " data.synthetic.sub_per_super must be > 0;";
  if (super_classes * sub_per_super < 2) bad << " need at least 2 classes;";
  if (train_per_class == 0 || test_per_class == 0) bad << " samples per class must be > 0;";
  if (input_dim == 0) bad << " data.synthetic.input_dim must be > 0;";
  if (!(super_scale > 0.0) || !(sub_scale > 0.0) || !(noise_scale > 0.0)) bad << " scales must be > 0;";
  if (!bad.str().empty()) throw Error(ErrorKind::Validation, "hierarchy:" + bad.str());
}

std::pair<VectorDataset, VectorDataset> generate_hierarchy(const HierarchySpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const std::size_t d = spec.input_dim;
  const std::size_t C = spec.classes();

  std::vector<double> super_means(spec.super_classes * d);
  for (double& v : super_means) v = spec.super_scale * unit(rng);
  std::vector<double> class_means(C * d);
  for (std::size_t s = 0; s < spec.super_classes; ++s) {
    for (std::size_t j = 0; j < spec.sub_per_super; ++j) {
      const std::size_t c = s * spec.sub_per_super + j;
      for (std::size_t k = 0; k < d; ++k) class_means[c * d + k] = super_means[s * d + k] + spec.sub_scale * unit(rng);
    }
  }
  auto sample = [&](std::size_t per_class, Split split) {
    VectorDataset ds;
    ds.split = split;
    ds.features = Tensor({C * per_class, d});
    ds.labels.reserve(C * per_class);
    std::size_t row = 0;
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t n = 0; n < per_class; ++n, ++row) {
        auto r = ds.features.row(row);
        for (std::size_t k = 0; k < d; ++k) r[k] = class_means[c * d + k] + spec.noise_scale * unit(rng);
        ds.labels.push_back(static_cast<int>(c));
      }
    }
    return ds;
  };
  VectorDataset train = sample(spec.train_per_class, Split::Train);
  VectorDataset test = sample(spec.test_per_class, Split::Test);
  return {std::move(train), std::move(test)};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

LoadedDataset parse_dataset(std::istream& in, Split split, const std::string& source) {
  auto fail = [&](std::size_t line, const std::string& msg) {
    return Error(ErrorKind::Parse, source + ": line " + std::to_string(line) + ": " + msg);
  };
  std::vector<long long> raw_labels;
  std::vector<double> values;
  std::size_t width = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::size_t fields = 0;
    std::size_t pos = 0;
    std::vector<double> row;
    long long label = 0;
    while (true) {
      const std::size_t comma = text.find(',', pos);
      const std::string_view field = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (fields == 0) {
        const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), label);
        if (ec != std::errc() || p != field.data() + field.size()) throw fail(lineno, "label '" + std::string(field) + "' is not an integer");
      } else {
        // strtod rather than from_chars<double>: the latter is missing from older libstdc++.
        const std::string owned(field);
        char* end = nullptr;
        const double v = std::strtod(owned.c_str(), &end);
        if (owned.empty() || end != owned.c_str() + owned.size() || !std::isfinite(v)) {
          throw fail(lineno, "field " + std::to_string(fields + 1) + " '" + owned + "' is not a finite number");
        }
        row.push_back(v);
      }
      ++fields;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (row.empty()) throw fail(lineno, "row has no features");
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw fail(lineno, "row has " + std::to_string(row.size()) + " features, expected " + std::to_string(width));
    }
    raw_labels.push_back(label);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (raw_labels.empty()) throw fail(lineno, "empty file: no data rows");

  std::map<long long, int> mapping;
  for (long long l : raw_labels) mapping.emplace(l, 0);
  int next = 0;
  for (auto& [orig, mapped] : mapping) mapped = next++;

  LoadedDataset out;
  out.data.split = split;
  out.data.features = Tensor({raw_labels.size(), width}, std::move(values));
  out.data.labels.reserve(raw_labels.size());
  for (long long l : raw_labels) out.data.labels.push_back(mapping[l]);
  out.label_mapping.assign(mapping.begin(), mapping.end());
  out.data.validate();
  return out;
}

LoadedDataset load_dataset(const std::filesystem::path& path, Split split) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open dataset " + path.string());
  return parse_dataset(in, split, path.string());
}

void write_dataset(std::ostream& out, const VectorDataset& data) {
  out << "# label,features (" << data.size() << " rows, " << data.input_dim() << " features)\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.labels[i];
    for (double v : data.features.row(i)) out << ',' << v;
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const VectorDataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write dataset " + path.string());
  write_dataset(out, data);
}

}  // namespace chest
