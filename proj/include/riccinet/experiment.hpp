#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riccinet/config.hpp"
#include "riccinet/data.hpp"
#include "riccinet/nn.hpp"
#include "riccinet/ricci.hpp"
#include "riccinet/stats.hpp"

namespace riccinet::experiment {

enum class NetworkStatus : std::uint8_t { Analysed, GatedOut, Excluded };
std::string to_string(NetworkStatus s);
NetworkStatus parse_status(const std::string& s);

/// One trained network and what happened to it.
struct NetworkRecord {
  std::string id;
  std::string dataset;
  nn::WidthClass width = nn::WidthClass::Narrow;
  nn::DepthClass depth = nn::DepthClass::Shallow;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::size_t layers = 0;
  double test_accuracy = 0.0;
  double threshold = 0.0;
  NetworkStatus status = NetworkStatus::GatedOut;
  std::string reason;
  /// Filled for analysed networks: the group's optimal k and the coefficients there.
  std::optional<std::size_t> k;
  std::optional<double> rho;
  /// +-infinity when |rho| == 1; such rows stay analysed but skip the regression.
  std::optional<double> z_adjusted;

  bool gate_passed() const { return status != NetworkStatus::GatedOut; }
  std::string group() const;
};

struct GroupSweep {
  std::string dataset;
  nn::WidthClass width = nn::WidthClass::Narrow;
  nn::DepthClass depth = nn::DepthClass::Shallow;
  /// Rows are empty when the group had no analysable network.
  std::vector<ricci::KSweepRow> rows;
  std::optional<std::size_t> optimal_k;
  std::string failure;
};

struct Counts {
  std::size_t trained = 0;
  std::size_t gated_out = 0;
  std::size_t analysed = 0;
  std::size_t excluded = 0;
  bool reconciled() const { return trained == gated_out + analysed + excluded; }
};

struct ExperimentRecord {
  std::vector<NetworkRecord> networks;
  std::vector<GroupSweep> sweeps;
  std::optional<stats::RegressionResult> regression;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;

  Counts counts() const;
};

/// Per-network seed: SeedHasher(master) over (dataset, width, depth, replicate).
std::uint64_t network_seed(std::uint64_t master, const std::string& dataset, nn::WidthClass w,
                           nn::DepthClass d, std::size_t replicate);
/// Seed for the synthetic generator of one dataset.
std::uint64_t dataset_seed(std::uint64_t master, const std::string& dataset);

std::string network_id(const std::string& dataset, nn::WidthClass w, nn::DepthClass d,
                       std::size_t replicate);

/// Builds the train/test split for one dataset selector.
data::TrainTestSplit prepare_dataset(const ExperimentConfig& cfg, const std::string& dataset);

/// Networks kept in memory between stages, keyed by network id.
using NetworkStore = std::map<std::string, nn::TrainedNetwork>;
using DataStore = std::map<std::string, data::TrainTestSplit>;

/// Trains the full ensemble grid and applies the accuracy gate. Diverged
/// training is recorded as gated out with the diagnostic as reason.
std::vector<NetworkRecord> train_stage(const ExperimentConfig& cfg, const DataStore& data,
                                       NetworkStore& networks, std::vector<std::string>& failures);

/// Geometry of each analysed network at its group's optimal k, by id.
using GeometryStore = std::map<std::string, ricci::LayerGeometry>;

/// Runs the k-sweep per (dataset, width, depth) group over the gated networks,
/// then fills in rho and z at the optimal k, marking disconnected or
/// undefined networks as excluded.
std::vector<GroupSweep> analyze_stage(const ExperimentConfig& cfg, const DataStore& data,
                                      const NetworkStore& networks,
                                      std::vector<NetworkRecord>& records,
                                      GeometryStore* geometries, std::vector<std::string>& failures);

/// Regresses test accuracy on z (or rho), dataset, width and depth over the
/// analysed networks with a finite coefficient.
stats::RegressionResult regress_stage(const ExperimentConfig& cfg,
                                      const std::vector<NetworkRecord>& records);

/// train -> gate -> capture -> sweep -> coefficients -> regression, writing
/// every artefact under cfg.output_dir.
ExperimentRecord run_experiment(const ExperimentConfig& cfg);

}  // namespace riccinet::experiment
