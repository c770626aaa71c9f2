// riccinet: train ReLU classifier ensembles and measure Ricci-flow-like
// behaviour of their layer representations.
//
//   riccinet generate --family B --out data/
//   riccinet run --config experiment.cfg --seed 7 --ensemble-size 5
//
// `run` is train + analyze + regress + report in one pass. The staged
// subcommands read and write the same files under --out, so they can be
// invoked one after another with the same config.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "riccinet/config.hpp"
#include "riccinet/data.hpp"
#include "riccinet/error.hpp"
#include "riccinet/experiment.hpp"
#include "riccinet/report.hpp"

namespace fs = std::filesystem;
using namespace riccinet;
using experiment::ExperimentConfig;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> k_list;
  std::optional<std::size_t> ensemble_size;
  std::optional<std::size_t> threads;
  std::optional<std::string> datasets;
  std::optional<std::size_t> epochs;
  std::vector<std::string> settings;
};

void add_experiment_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "Key-value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--k-list", o.k_list, "Comma-separated ascending k values");
  cmd->add_option("--ensemble-size", o.ensemble_size, "Networks per (dataset, width, depth)");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores); results do not depend on it");
  cmd->add_option("--datasets", o.datasets, "Comma-separated dataset selectors");
  cmd->add_option("--epochs", o.epochs, "Training epochs for every dataset");
  cmd->add_option("--set", o.settings, "Extra key=value config settings (repeatable)");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : experiment::load_config(o.config_path);
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + kv + "'");
    experiment::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.k_list) cfg.k_values = experiment::parse_size_list(*o.k_list);
  if (o.ensemble_size) cfg.ensemble_size = *o.ensemble_size;
  if (o.threads) cfg.threads = *o.threads;
  if (o.datasets) experiment::apply_setting(cfg, "datasets", *o.datasets);
  if (o.epochs) cfg.epochs = *o.epochs;
  cfg.validate();
  return cfg;
}

experiment::DataStore load_data(const ExperimentConfig& cfg) {
  experiment::DataStore data;
  for (const auto& ds : cfg.datasets) data.emplace(ds, experiment::prepare_dataset(cfg, ds));
  return data;
}

fs::path network_path(const ExperimentConfig& cfg, const std::string& id) {
  return fs::path(cfg.output_dir) / "networks" / (id + ".json");
}

std::vector<experiment::NetworkRecord> read_records(const ExperimentConfig& cfg) {
  const auto path = fs::path(cfg.output_dir) / "networks.csv";
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'; run `riccinet train` first");
  return report::read_networks_csv(in);
}

void write_records(const ExperimentConfig& cfg, const std::vector<experiment::NetworkRecord>& recs) {
  std::ofstream out(fs::path(cfg.output_dir) / "networks.csv");
  report::write_networks_csv(out, recs);
}

experiment::NetworkStore load_networks(const ExperimentConfig& cfg,
                                       const std::vector<experiment::NetworkRecord>& recs) {
  experiment::NetworkStore nets;
  for (const auto& r : recs)
    if (r.gate_passed()) nets.emplace(r.id, nn::load(network_path(cfg, r.id).string()));
  return nets;
}

int cmd_generate(const std::string& family, std::size_t per_class, double noise, std::uint64_t seed,
                 const std::string& out) {
  data::SyntheticSpec spec{data::parse_family(family), per_class, noise, seed};
  const auto split = data::synthetic_split(spec);
  fs::create_directories(out);
  const auto stem = fs::path(out) / data::to_string(spec.family);
  data::write_csv(stem.string() + "_train.csv", split.train);
  data::write_csv(stem.string() + "_test.csv", split.test);
  std::cout << "wrote " << split.train.size() << " train and " << split.test.size()
            << " test points to " << out << '\n';
  return 0;
}

int cmd_train(const ExperimentConfig& cfg) {
  const auto data = load_data(cfg);
  experiment::NetworkStore nets;
  std::vector<std::string> failures;
  auto recs = experiment::train_stage(cfg, data, nets, failures);
  fs::create_directories(fs::path(cfg.output_dir) / "networks");
  for (const auto& [id, net] : nets) nn::save(network_path(cfg, id).string(), net);
  write_records(cfg, recs);
  std::size_t passed = 0;
  for (const auto& r : recs) passed += r.gate_passed();
  std::cout << "trained " << recs.size() << ", passed gate " << passed << '\n';
  for (const auto& f : failures) std::cerr << "failure: " << f << '\n';
  return 0;
}

int cmd_analyze(const ExperimentConfig& cfg) {
  auto recs = read_records(cfg);
  const auto nets = load_networks(cfg, recs);
  const auto data = load_data(cfg);
  std::vector<std::string> failures;
  const auto sweeps = experiment::analyze_stage(cfg, data, nets, recs, nullptr, failures);
  write_records(cfg, recs);
  std::ofstream ks(fs::path(cfg.output_dir) / "ksweep.csv");
  report::write_ksweep_csv(ks, sweeps);
  for (const auto& s : sweeps)
    std::cout << s.dataset << ' ' << nn::to_string(s.width) << ' ' << nn::to_string(s.depth)
              << ": optimal k " << (s.optimal_k ? std::to_string(*s.optimal_k) : "-") << '\n';
  for (const auto& f : failures) std::cerr << "failure: " << f << '\n';
  return 0;
}

int cmd_regress(const ExperimentConfig& cfg) {
  const auto recs = read_records(cfg);
  const auto result = experiment::regress_stage(cfg, recs);
  std::ofstream out(fs::path(cfg.output_dir) / "regression.csv");
  stats::write_regression_csv(out, result);
  stats::write_regression_csv(std::cout, result);
  return 0;
}

int cmd_report(const ExperimentConfig& cfg) {
  const auto recs = read_records(cfg);
  const auto nets = load_networks(cfg, recs);
  const auto data = load_data(cfg);
  experiment::GeometryStore geoms;
  for (const auto& r : recs) {
    if (r.status != experiment::NetworkStatus::Analysed || !r.k) continue;
    const auto acts = nn::forward(nets.at(r.id), data.at(r.dataset).test.points).activations;
    auto g = ricci::layer_geometry(acts, *r.k, cfg.threads);
    g.network_id = r.id;
    geoms.emplace(r.id, std::move(g));
  }
  std::vector<std::string> warnings;
  report::write_plot_data(cfg, data, nets, recs, geoms, warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "plot data written under " << cfg.output_dir << '\n';
  return 0;
}

int cmd_run(const ExperimentConfig& cfg) {
  const auto record = experiment::run_experiment(cfg);
  report::write_manifest(std::cout, record);
  return record.counts().reconciled() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ricci-flow-like analysis of feedforward binary classifiers"};
  app.require_subcommand(1);

  std::string family = "A", gen_out = ".";
  std::size_t per_class = 1000;
  double noise = 0.05;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset (train/test CSV)");
  gen->add_option("--family", family, "A (nested spheres), B (linked rings) or C (intersecting planes)");
  gen->add_option("--samples-per-class", per_class, "Points per class before the train/test split");
  gen->add_option("--noise", noise, "Gaussian noise standard deviation");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output directory");

  Overrides o;
  struct Stage {
    const char* name;
    const char* help;
    int (*fn)(const ExperimentConfig&);
  };
  const Stage stages[] = {
      {"train", "Train and gate the ensemble grid; writes networks/ and networks.csv", cmd_train},
      {"analyze", "k-sweep and per-network Ricci coefficients; writes ksweep.csv", cmd_analyze},
      {"regress", "Accuracy ~ coefficient + dataset + width + depth; writes regression.csv", cmd_regress},
      {"report", "Scatter and PCA plot data for analysed networks", cmd_report},
      {"run", "All stages; exit 0 only if the record reconciles", cmd_run},
  };
  std::vector<std::pair<CLI::App*, const Stage*>> stage_cmds;
  for (const auto& s : stages) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_experiment_options(cmd, o);
    stage_cmds.emplace_back(cmd, &s);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(family, per_class, noise, gen_seed, gen_out);
    for (const auto& [cmd, stage] : stage_cmds) {
      if (!cmd->parsed()) continue;
      const auto cfg = resolve(o);
      fs::create_directories(cfg.output_dir);
      return stage->fn(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "riccinet: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
