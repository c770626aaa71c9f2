#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riccinet/nn.hpp"

namespace riccinet::experiment {

/// Where a dataset comes from and how it is binarised.
struct DatasetInfo {
  std::string name;
  bool synthetic = false;
  data::Family family = data::Family::A;
  /// "mnist" or "fmnist" for image datasets.
  std::string source;
  int class_a = 0;
  int class_b = 0;
  /// Accuracy a network must strictly exceed to be analysed.
  double default_threshold = 0.99;
};

/// Known selectors: A, B, C, mnist-1v7, mnist-6v8, fmnist-sandal-boot, fmnist-shirt-coat.
const DatasetInfo& dataset_info(const std::string& name);
const std::vector<DatasetInfo>& known_datasets();

struct ExperimentConfig {
  std::vector<std::string> datasets = {"A"};
  std::vector<nn::WidthClass> widths = {nn::WidthClass::Narrow, nn::WidthClass::Wide,
                                        nn::WidthClass::Bottleneck};
  std::vector<nn::DepthClass> depths = {nn::DepthClass::Shallow, nn::DepthClass::Deep};
  std::size_t ensemble_size = 5;
  /// Per-dataset overrides of the default accuracy thresholds.
  std::map<std::string, double> thresholds;
  /// Empty means the default list for the dataset kind.
  std::vector<std::size_t> k_values;
  std::uint64_t master_seed = 0;
  std::string output_dir = "riccinet_out";

  /// Empty means 100 for synthetic data, 20 for images.
  std::optional<std::size_t> epochs;
  std::size_t batch_size = 32;
  double learning_rate = 0.001;

  std::size_t samples_per_class = 1000;
  double noise_scale = 0.05;

  std::string mnist_dir;
  std::string fmnist_dir;
  /// Keep only the first N filtered rows of each image split (0 = all).
  std::size_t image_train_limit = 0;
  std::size_t image_test_limit = 0;

  /// Worker threads; 0 = one per hardware thread. Never changes results.
  std::size_t threads = 0;
  /// Regress accuracy on rho instead of the Fisher-adjusted z.
  bool regress_on_rho = false;

  double threshold_for(const std::string& dataset) const;
  std::size_t epochs_for(const std::string& dataset) const;
  std::vector<std::size_t> k_values_for(const std::string& dataset) const;

  /// Throws InvalidArgument on any broken invariant.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Applies one `key = value` setting. Unknown keys throw InvalidArgument.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads a key-value config: one `key = value` per line, `#` starts a comment,
/// lists are comma separated. Threshold overrides use `threshold.<dataset>`.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Canonical key-value rendering (parse_config(render_config(c)) == c).
std::string render_config(const ExperimentConfig& cfg);

std::vector<std::size_t> parse_size_list(const std::string& s);

}  // namespace riccinet::experiment
