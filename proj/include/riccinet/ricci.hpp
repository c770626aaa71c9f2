#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "riccinet/graph.hpp"
#include "riccinet/nn.hpp"

namespace riccinet::ricci {

/// Per-layer totals for one network at one k.
///
/// total_distance[l] is the sum of hop distances over unordered test-point
/// pairs in the layer-l k-NN graph (the factor 2 from summing ordered pairs
/// cancels in every correlation below). total_curvature[l] is the summed
/// unweighted Forman curvature of that graph.
struct LayerGeometry {
  std::size_t k = 0;
  std::string network_id;
  std::vector<double> total_distance;
  std::vector<double> total_curvature;
  /// eta[l] = total_distance[l + 1] - total_distance[l].
  std::vector<double> eta;
  /// Set when a layer graph is disconnected; distances are then undefined and
  /// the vectors above are left empty.
  std::optional<std::size_t> disconnected_layer;

  bool excluded() const { return disconnected_layer.has_value(); }
  std::size_t layers() const { return total_curvature.size(); }
};

/// Per-layer neighbour rankings of one network's test activations, computed
/// once and reused for every k in a sweep.
struct LayerRankings {
  std::string network_id;
  std::vector<graph::NeighborRanking> per_layer;
};

LayerRankings rank_layers(const nn::LayerActivations& acts, std::size_t max_k,
                          std::string network_id = {});

/// Builds G_k for every layer and fills in the totals. A disconnected layer
/// marks the geometry excluded (first offending layer, 0-based) instead of throwing.
LayerGeometry layer_geometry(const LayerRankings& rankings, std::size_t k, std::size_t threads = 1);
LayerGeometry layer_geometry(const nn::LayerActivations& acts, std::size_t k, std::size_t threads = 1);

/// Pearson correlation of (eta[l], total_curvature[l]) over the L - 1 layer
/// transitions. Curvature at layer l pairs with the change from l to l + 1.
/// Throws InvalidArgument for excluded geometries or L < 3, and
/// UndefinedCoefficient when either series is constant.
double ricci_coefficient(const LayerGeometry& geom);

/// arctanh(rho) / sqrt(L - 4). Requires |rho| < 1 and L >= 5.
double fisher_adjust(double rho, std::size_t depth);

/// Pearson correlation over the pooled (eta, curvature) pairs of every
/// non-excluded geometry, in input order.
double aggregate_coefficient(const std::vector<LayerGeometry>& geoms);

inline const std::vector<std::size_t>& default_synthetic_k() {
  static const std::vector<std::size_t> k = {6,  7,  9,   10,  15,  18,  20,  30,  50,
                                             90, 100, 120, 140, 150, 160, 180, 200};
  return k;
}

inline const std::vector<std::size_t>& default_image_k() {
  static const std::vector<std::size_t> k = {10, 20, 30, 50, 90, 100, 120, 150, 250, 350, 500};
  return k;
}

struct KSweepRow {
  std::size_t k = 0;
  /// Pooled coefficient; empty when no network yields a defined value at this k.
  std::optional<double> aggregated;
  /// Mean of the per-network coefficients that are defined at this k (reported only).
  std::optional<double> mean_network_coefficient;
  std::size_t pooled = 0;
  std::size_t excluded = 0;
};

struct KSweepResult {
  std::vector<KSweepRow> rows;
  /// Empty when no k yields a defined aggregated coefficient.
  std::optional<std::size_t> optimal_k;
  /// geometries[i][n]: network n at rows[i].k.
  std::vector<std::vector<LayerGeometry>> geometries;
};

/// Evaluates every k in k_values (ascending) across the ensemble. Networks
/// whose graphs disconnect at some k are left out of that k's pool. The
/// optimal k is the one with the most negative aggregated coefficient, ties
/// going to the smaller k.
KSweepResult k_sweep(const std::vector<LayerRankings>& ensemble,
                     const std::vector<std::size_t>& k_values, std::size_t threads = 1);

}  // namespace riccinet::ricci
