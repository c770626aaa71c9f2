#include "riccinet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "riccinet/error.hpp"
#include "riccinet/ricci.hpp"

namespace riccinet::experiment {

const std::vector<DatasetInfo>& known_datasets() {
  using data::Family;
  static const std::vector<DatasetInfo> all = {
      {"A", true, Family::A, "", 0, 0, 0.99},
      {"B", true, Family::B, "", 0, 0, 0.99},
      {"C", true, Family::C, "", 0, 0, 0.91},
      {"mnist-1v7", false, Family::A, "mnist", 1, 7, 0.99},
      {"mnist-6v8", false, Family::A, "mnist", 6, 8, 0.99},
      // fashion-MNIST classes: 4 coat, 5 sandal, 6 shirt, 9 ankle boot
      {"fmnist-sandal-boot", false, Family::A, "fmnist", 5, 9, 0.98},
      {"fmnist-shirt-coat", false, Family::A, "fmnist", 6, 4, 0.90},
  };
  return all;
}

const DatasetInfo& dataset_info(const std::string& name) {
  for (const auto& d : known_datasets())
    if (d.name == name) return d;
  throw InvalidArgument("unknown dataset '" + name + "'");
}

double ExperimentConfig::threshold_for(const std::string& dataset) const {
  if (auto it = thresholds.find(dataset); it != thresholds.end()) return it->second;
  return dataset_info(dataset).default_threshold;
}

std::size_t ExperimentConfig::epochs_for(const std::string& dataset) const {
  if (epochs) return *epochs;
  return dataset_info(dataset).synthetic ? 100 : 20;
}

std::vector<std::size_t> ExperimentConfig::k_values_for(const std::string& dataset) const {
  if (!k_values.empty()) return k_values;
  return dataset_info(dataset).synthetic ? ricci::default_synthetic_k() : ricci::default_image_k();
}

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw InvalidArgument("config: no datasets selected");
  for (const auto& d : datasets) {
    const auto& info = dataset_info(d);
    if (!info.synthetic) {
      const auto& dir = info.source == "mnist" ? mnist_dir : fmnist_dir;
      if (dir.empty())
        throw InvalidArgument("config: dataset '" + d + "' needs " + info.source + "_dir");
    }
  }
  if (widths.empty() || depths.empty()) throw InvalidArgument("config: empty architecture grid");
  if (ensemble_size < 1) throw InvalidArgument("config: ensemble_size must be >= 1");
  for (const auto& [name, t] : thresholds) {
    dataset_info(name);
    if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("config: threshold for " + name + " not in (0, 1]");
  }
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] == 0) throw InvalidArgument("config: k values must be positive");
    if (i > 0 && k_values[i] <= k_values[i - 1])
      throw InvalidArgument("config: k values must be strictly ascending");
  }
  if (batch_size < 1) throw InvalidArgument("config: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("config: learning_rate must be > 0");
  if (samples_per_class < 2) throw InvalidArgument("config: samples_per_class must be >= 2");
  if (!(noise_scale >= 0.0)) throw InvalidArgument("config: noise_scale must be >= 0");
  if (output_dir.empty()) throw InvalidArgument("config: output_dir is empty");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto v = trim(value);
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw InvalidArgument("config: bad value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const auto v = trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("config: bad boolean '" + value + "' for " + key);
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(s)) out.push_back(parse_number<std::size_t>("list", item));
  return out;
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "datasets") {
    cfg.datasets = split_list(value);
    for (const auto& d : cfg.datasets) dataset_info(d);
  } else if (key == "widths") {
    cfg.widths.clear();
    for (const auto& w : split_list(value)) cfg.widths.push_back(nn::parse_width(w));
  } else if (key == "depths") {
    cfg.depths.clear();
    for (const auto& d : split_list(value)) cfg.depths.push_back(nn::parse_depth(d));
  } else if (key == "ensemble_size") {
    cfg.ensemble_size = parse_number<std::size_t>(key, value);
  } else if (key.rfind("threshold.", 0) == 0) {
    const std::string ds = key.substr(10);
    dataset_info(ds);
    cfg.thresholds[ds] = parse_number<double>(key, value);
  } else if (key == "k_values") {
    cfg.k_values = parse_size_list(value);
  } else if (key == "seed") {
    cfg.master_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    cfg.output_dir = trim(value);
  } else if (key == "epochs") {
    const auto v = trim(value);
    if (v == "auto") cfg.epochs.reset();
    else cfg.epochs = parse_number<std::size_t>(key, v);
  } else if (key == "batch_size") {
    cfg.batch_size = parse_number<std::size_t>(key, value);
  } else if (key == "learning_rate") {
    cfg.learning_rate = parse_number<double>(key, value);
  } else if (key == "samples_per_class") {
    cfg.samples_per_class = parse_number<std::size_t>(key, value);
  } else if (key == "noise_scale") {
    cfg.noise_scale = parse_number<double>(key, value);
  } else if (key == "mnist_dir") {
    cfg.mnist_dir = trim(value);
  } else if (key == "fmnist_dir") {
    cfg.fmnist_dir = trim(value);
  } else if (key == "image_train_limit") {
    cfg.image_train_limit = parse_number<std::size_t>(key, value);
  } else if (key == "image_test_limit") {
    cfg.image_test_limit = parse_number<std::size_t>(key, value);
  } else if (key == "threads") {
    cfg.threads = parse_number<std::size_t>(key, value);
  } else if (key == "regress_on") {
    const auto v = trim(value);
    if (v != "z" && v != "rho") throw InvalidArgument("config: regress_on must be z or rho");
    cfg.regress_on_rho = v == "rho";
  } else if (key == "regress_on_rho") {
    cfg.regress_on_rho = parse_bool(key, value);
  } else {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  return parse_config(in);
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  auto join = [](const auto& items, auto&& fmt) {
    std::string s;
    for (const auto& x : items) {
      if (!s.empty()) s += ",";
      s += fmt(x);
    }
    return s;
  };
  out << "datasets = " << join(cfg.datasets, [](const std::string& s) { return s; }) << '\n';
  out << "widths = " << join(cfg.widths, [](nn::WidthClass w) { return nn::to_string(w); }) << '\n';
  out << "depths = " << join(cfg.depths, [](nn::DepthClass d) { return nn::to_string(d); }) << '\n';
  out << "ensemble_size = " << cfg.ensemble_size << '\n';
  for (const auto& [ds, t] : cfg.thresholds) out << "threshold." << ds << " = " << fmt_double(t) << '\n';
  out << "k_values = " << join(cfg.k_values, [](std::size_t k) { return std::to_string(k); }) << '\n';
  out << "seed = " << cfg.master_seed << '\n';
  out << "out = " << cfg.output_dir << '\n';
  out << "epochs = " << (cfg.epochs ? std::to_string(*cfg.epochs) : "auto") << '\n';
  out << "batch_size = " << cfg.batch_size << '\n';
  out << "learning_rate = " << fmt_double(cfg.learning_rate) << '\n';
  out << "samples_per_class = " << cfg.samples_per_class << '\n';
  out << "noise_scale = " << fmt_double(cfg.noise_scale) << '\n';
  if (!cfg.mnist_dir.empty()) out << "mnist_dir = " << cfg.mnist_dir << '\n';
  if (!cfg.fmnist_dir.empty()) out << "fmnist_dir = " << cfg.fmnist_dir << '\n';
  out << "image_train_limit = " << cfg.image_train_limit << '\n';
  out << "image_test_limit = " << cfg.image_test_limit << '\n';
  out << "threads = " << cfg.threads << '\n';
  out << "regress_on = " << (cfg.regress_on_rho ? "rho" : "z") << '\n';
  return out.str();
}

}  // namespace riccinet::experiment
