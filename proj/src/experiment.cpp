#include "riccinet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "riccinet/error.hpp"
#include "riccinet/parallel.hpp"
#include "riccinet/random.hpp"
#include "riccinet/report.hpp"

namespace riccinet::experiment {

namespace fs = std::filesystem;

std::string to_string(NetworkStatus s) {
  switch (s) {
    case NetworkStatus::Analysed: return "analysed";
    case NetworkStatus::GatedOut: return "gated_out";
    case NetworkStatus::Excluded: return "excluded";
  }
  return "?";
}

NetworkStatus parse_status(const std::string& s) {
  if (s == "analysed") return NetworkStatus::Analysed;
  if (s == "gated_out") return NetworkStatus::GatedOut;
  if (s == "excluded") return NetworkStatus::Excluded;
  throw InvalidArgument("unknown network status '" + s + "'");
}

std::string NetworkRecord::group() const {
  return dataset + "_" + nn::to_string(width) + "_" + nn::to_string(depth);
}

Counts ExperimentRecord::counts() const {
  Counts c;
  for (const auto& n : networks) {
    ++c.trained;
    switch (n.status) {
      case NetworkStatus::Analysed: ++c.analysed; break;
      case NetworkStatus::GatedOut: ++c.gated_out; break;
      case NetworkStatus::Excluded: ++c.excluded; break;
    }
  }
  return c;
}

std::uint64_t network_seed(std::uint64_t master, const std::string& dataset, nn::WidthClass w,
                           nn::DepthClass d, std::size_t replicate) {
  return SeedHasher(master)
      .add(dataset)
      .add(nn::to_string(w))
      .add(nn::to_string(d))
      .add(static_cast<std::uint64_t>(replicate))
      .value();
}

std::uint64_t dataset_seed(std::uint64_t master, const std::string& dataset) {
  return SeedHasher(master).add("data").add(dataset).value();
}

std::string network_id(const std::string& dataset, nn::WidthClass w, nn::DepthClass d,
                       std::size_t replicate) {
  return dataset + "_" + nn::to_string(w) + "_" + nn::to_string(d) + "_r" + std::to_string(replicate);
}

namespace {

data::LabeledDataset head(data::LabeledDataset ds, std::size_t limit) {
  if (limit == 0 || limit >= ds.size()) return ds;
  const auto n = static_cast<Eigen::Index>(limit);
  ds.points = ds.points.topRows(n).eval();
  ds.labels.resize(limit);
  ds.source_index.resize(limit);
  return ds;
}

}  // namespace

data::TrainTestSplit prepare_dataset(const ExperimentConfig& cfg, const std::string& dataset) {
  const DatasetInfo& info = dataset_info(dataset);
  if (info.synthetic) {
    data::SyntheticSpec spec;
    spec.family = info.family;
    spec.samples_per_class = cfg.samples_per_class;
    spec.noise_scale = cfg.noise_scale;
    spec.seed = dataset_seed(cfg.master_seed, dataset);
    auto split = data::synthetic_split(spec);
    split.train.name = split.test.name = dataset;
    return split;
  }
  const fs::path dir = info.source == "mnist" ? cfg.mnist_dir : cfg.fmnist_dir;
  const auto train_raw = data::load_idx_pair((dir / "train-images-idx3-ubyte").string(),
                                             (dir / "train-labels-idx1-ubyte").string());
  const auto test_raw = data::load_idx_pair((dir / "t10k-images-idx3-ubyte").string(),
                                            (dir / "t10k-labels-idx1-ubyte").string());
  data::TrainTestSplit split;
  split.train = head(data::binary_filter(train_raw, info.class_a, info.class_b, dataset, data::Split::Train),
                     cfg.image_train_limit);
  split.test = head(data::binary_filter(test_raw, info.class_a, info.class_b, dataset, data::Split::Test),
                    cfg.image_test_limit);
  return split;
}

std::vector<NetworkRecord> train_stage(const ExperimentConfig& cfg, const DataStore& data,
                                       NetworkStore& networks, std::vector<std::string>& failures) {
  std::vector<NetworkRecord> jobs;
  for (const auto& ds : cfg.datasets)
    for (auto w : cfg.widths)
      for (auto d : cfg.depths)
        for (std::size_t r = 0; r < cfg.ensemble_size; ++r) {
          NetworkRecord rec;
          rec.id = network_id(ds, w, d, r);
          rec.dataset = ds;
          rec.width = w;
          rec.depth = d;
          rec.replicate = r;
          rec.seed = network_seed(cfg.master_seed, ds, w, d, r);
          rec.threshold = cfg.threshold_for(ds);
          jobs.push_back(rec);
        }

  std::vector<std::optional<nn::TrainedNetwork>> trained(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    NetworkRecord& rec = jobs[i];
    const auto& split = data.at(rec.dataset);
    nn::NetworkSpec spec;
    spec.layer_widths = nn::make_architecture(rec.width, rec.depth);
    spec.input_dim = split.train.dim();
    spec.seed = rec.seed;
    spec.learning_rate = cfg.learning_rate;
    spec.epochs = cfg.epochs_for(rec.dataset);
    spec.batch_size = cfg.batch_size;
    rec.layers = spec.depth();
    try {
      nn::TrainedNetwork net = nn::train(spec, split.train);
      rec.test_accuracy = nn::accuracy(net, split.test);
      if (rec.test_accuracy > rec.threshold) {
        rec.status = NetworkStatus::Excluded;  // provisional until analysis
        rec.reason = "pending analysis";
      } else {
        rec.status = NetworkStatus::GatedOut;
        rec.reason = "test accuracy " + report::fmt(rec.test_accuracy) + " <= threshold " +
                     report::fmt(rec.threshold);
      }
      trained[i] = std::move(net);
    } catch (const TrainingDiverged& e) {
      rec.status = NetworkStatus::GatedOut;
      rec.reason = std::string("training failed: ") + e.what();
    }
  });

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (trained[i]) networks.insert_or_assign(jobs[i].id, std::move(*trained[i]));
    if (jobs[i].reason.rfind("training failed", 0) == 0) failures.push_back(jobs[i].id + ": " + jobs[i].reason);
  }
  return jobs;
}

std::vector<GroupSweep> analyze_stage(const ExperimentConfig& cfg, const DataStore& data,
                                      const NetworkStore& networks,
                                      std::vector<NetworkRecord>& records,
                                      GeometryStore* geometries, std::vector<std::string>& failures) {
  std::vector<GroupSweep> sweeps;
  for (const auto& ds : cfg.datasets) {
    const auto& test = data.at(ds).test;
    std::vector<std::size_t> ks;
    for (std::size_t k : cfg.k_values_for(ds))
      if (k < test.size()) ks.push_back(k);

    for (auto w : cfg.widths) {
      for (auto d : cfg.depths) {
        GroupSweep sweep;
        sweep.dataset = ds;
        sweep.width = w;
        sweep.depth = d;
        std::vector<NetworkRecord*> members;
        for (auto& rec : records)
          if (rec.dataset == ds && rec.width == w && rec.depth == d && rec.gate_passed())
            members.push_back(&rec);

        auto exclude_all = [&](const std::string& why) {
          sweep.failure = why;
          for (auto* rec : members) {
            rec->status = NetworkStatus::Excluded;
            rec->reason = why;
          }
          failures.push_back(ds + "_" + nn::to_string(w) + "_" + nn::to_string(d) + ": " + why);
        };

        if (members.empty()) {
          sweep.failure = "no network passed the accuracy gate";
          sweeps.push_back(std::move(sweep));
          continue;
        }
        if (ks.empty()) {
          exclude_all("no k value below the test-set size " + std::to_string(test.size()));
          sweeps.push_back(std::move(sweep));
          continue;
        }

        std::vector<ricci::LayerRankings> rankings(members.size());
        parallel_for(members.size(), cfg.threads, [&](std::size_t i) {
          const auto acts = nn::forward(networks.at(members[i]->id), test.points).activations;
          rankings[i] = ricci::rank_layers(acts, ks.back(), members[i]->id);
        });

        const ricci::KSweepResult result = ricci::k_sweep(rankings, ks, cfg.threads);
        sweep.rows = result.rows;
        sweep.optimal_k = result.optimal_k;
        if (!result.optimal_k) {
          exclude_all("no k yields a defined aggregated coefficient");
          sweeps.push_back(std::move(sweep));
          continue;
        }
        const std::size_t best_k = *result.optimal_k;
        const auto row =
            static_cast<std::size_t>(std::find(ks.begin(), ks.end(), best_k) - ks.begin());

        for (std::size_t i = 0; i < members.size(); ++i) {
          NetworkRecord& rec = *members[i];
          const ricci::LayerGeometry& geom = result.geometries[row][i];
          rec.k = best_k;
          rec.rho.reset();
          rec.z_adjusted.reset();
          if (geom.excluded()) {
            rec.status = NetworkStatus::Excluded;
            rec.reason = "disconnected at k = " + std::to_string(geom.k) + " (layer " +
                         std::to_string(*geom.disconnected_layer + 1) + ")";
            continue;
          }
          try {
            const double rho = ricci::ricci_coefficient(geom);
            rec.rho = rho;
            rec.z_adjusted = std::abs(rho) < 1.0
                                 ? ricci::fisher_adjust(rho, geom.layers())
                                 : std::copysign(std::numeric_limits<double>::infinity(), rho);
            rec.status = NetworkStatus::Analysed;
            rec.reason = std::abs(rho) < 1.0 ? "" : "|rho| = 1; z reported as infinite";
            if (geometries) geometries->insert_or_assign(rec.id, geom);
          } catch (const UndefinedCoefficient& e) {
            rec.status = NetworkStatus::Excluded;
            rec.reason = std::string("undefined coefficient: ") + e.what();
          }
        }
        sweeps.push_back(std::move(sweep));
      }
    }
  }
  return sweeps;
}

stats::RegressionResult regress_stage(const ExperimentConfig& cfg,
                                      const std::vector<NetworkRecord>& records) {
  std::vector<double> predictor, response;
  stats::Factor dataset{"dataset", {}}, width{"width", {}}, depth{"depth", {}};
  for (const auto& rec : records) {
    if (rec.status != NetworkStatus::Analysed || !rec.z_adjusted || !std::isfinite(*rec.z_adjusted))
      continue;
    predictor.push_back(cfg.regress_on_rho ? *rec.rho : *rec.z_adjusted);
    response.push_back(rec.test_accuracy);
    dataset.values.push_back(rec.dataset);
    width.values.push_back(nn::to_string(rec.width));
    depth.values.push_back(nn::to_string(rec.depth));
  }
  const auto design = stats::dummy_code(cfg.regress_on_rho ? "ricci_rho" : "ricci_z", predictor,
                                        {dataset, width, depth});
  const Eigen::Map<const Eigen::VectorXd> y(response.data(), static_cast<Eigen::Index>(response.size()));
  return stats::ols_fit(design.matrix, y, design.names);
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentRecord record;
  DataStore data;
  for (const auto& ds : cfg.datasets) data.emplace(ds, prepare_dataset(cfg, ds));

  NetworkStore networks;
  record.networks = train_stage(cfg, data, networks, record.failures);

  GeometryStore geometries;
  record.sweeps = analyze_stage(cfg, data, networks, record.networks, &geometries, record.failures);

  try {
    record.regression = regress_stage(cfg, record.networks);
  } catch (const Error& e) {
    record.failures.push_back(std::string("regression: ") + e.what());
  }

  fs::create_directories(cfg.output_dir);
  for (const auto& [name, split] : data) {
    if (!dataset_info(name).synthetic) continue;
    fs::create_directories(fs::path(cfg.output_dir) / "data");
    data::write_csv((fs::path(cfg.output_dir) / "data" / (name + "_train.csv")).string(), split.train);
    data::write_csv((fs::path(cfg.output_dir) / "data" / (name + "_test.csv")).string(), split.test);
  }
  fs::create_directories(fs::path(cfg.output_dir) / "networks");
  for (const auto& [id, net] : networks)
    nn::save((fs::path(cfg.output_dir) / "networks" / (id + ".json")).string(), net);
  report::write_plot_data(cfg, data, networks, record.networks, geometries, record.warnings);
  report::write_all(cfg, record);
  return record;
}

}  // namespace riccinet::experiment
