#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "riccinet/data.hpp"
#include "riccinet/experiment.hpp"
#include "riccinet/pca.hpp"
#include "riccinet/ricci.hpp"

namespace riccinet::report {

/// Shortest round-trip-safe rendering used in every CSV ("%.17g"; empty for nullopt).
std::string fmt(double v);

struct ScatterRow {
  std::size_t layer = 0;  // 1-based l
  double curvature = 0.0;
  double eta = 0.0;
};

/// (l, Ric_l, eta_l) for l = 1..L-1. Throws InvalidArgument for an excluded geometry.
std::vector<ScatterRow> scatter_rows(const ricci::LayerGeometry& geom);
/// CSV "layer,ric,eta,rho"; rho repeated on every row (empty if undefined).
void emit_scatter_data(std::ostream& out, const ricci::LayerGeometry& geom);

/// CSV "pc1,pc2,label" (missing components left empty).
void emit_pca_layer(std::ostream& out, const pca::Projection& p,
                    const std::vector<data::Label>& labels);

void write_ksweep_csv(std::ostream& out, const std::vector<experiment::GroupSweep>& sweeps);
void write_networks_csv(std::ostream& out, const std::vector<experiment::NetworkRecord>& records);
std::vector<experiment::NetworkRecord> read_networks_csv(std::istream& in);
void write_manifest(std::ostream& out, const experiment::ExperimentRecord& record);

/// Writes every artefact of a finished record under cfg.output_dir.
void write_all(const experiment::ExperimentConfig& cfg, const experiment::ExperimentRecord& record);

/// Figure-style plot data for the analysed networks: scatter CSV per network
/// and, for the first analysed network of each group, per-layer PCA CSVs.
void write_plot_data(const experiment::ExperimentConfig& cfg, const experiment::DataStore& data,
                     const experiment::NetworkStore& networks,
                     const std::vector<experiment::NetworkRecord>& records,
                     const experiment::GeometryStore& geometries,
                     std::vector<std::string>& warnings);

}  // namespace riccinet::report
