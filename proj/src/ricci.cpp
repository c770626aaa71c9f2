#include "riccinet/ricci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riccinet/error.hpp"
#include "riccinet/parallel.hpp"
#include "riccinet/stats.hpp"

namespace riccinet::ricci {

LayerRankings rank_layers(const nn::LayerActivations& acts, std::size_t max_k,
                          std::string network_id) {
  LayerRankings out;
  out.network_id = std::move(network_id);
  out.per_layer.reserve(acts.layer_count());
  for (const auto& layer : acts.per_layer) out.per_layer.emplace_back(layer, max_k);
  return out;
}

LayerGeometry layer_geometry(const LayerRankings& rankings, std::size_t k, std::size_t threads) {
  LayerGeometry geom;
  geom.k = k;
  geom.network_id = rankings.network_id;
  const std::size_t layers = rankings.per_layer.size();
  geom.total_distance.reserve(layers);
  geom.total_curvature.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const graph::NeighborGraph g = graph::knn_graph(rankings.per_layer[l], k, l);
    if (!graph::is_connected(g)) {
      geom.disconnected_layer = l;
      geom.total_distance.clear();
      geom.total_curvature.clear();
      return geom;
    }
    geom.total_distance.push_back(static_cast<double>(graph::total_pairwise_distance(g, threads)));
    geom.total_curvature.push_back(static_cast<double>(graph::total_curvature(g)));
  }
  for (std::size_t l = 0; l + 1 < layers; ++l)
    geom.eta.push_back(geom.total_distance[l + 1] - geom.total_distance[l]);
  return geom;
}

LayerGeometry layer_geometry(const nn::LayerActivations& acts, std::size_t k, std::size_t threads) {
  return layer_geometry(rank_layers(acts, k), k, threads);
}

namespace {

std::span<const double> curvature_for_transitions(const LayerGeometry& geom) {
  return {geom.total_curvature.data(), geom.eta.size()};
}

}  // namespace

double ricci_coefficient(const LayerGeometry& geom) {
  if (geom.excluded())
    throw InvalidArgument("network " + geom.network_id + " excluded at k = " +
                          std::to_string(geom.k) + ": layer " +
                          std::to_string(*geom.disconnected_layer) + " graph is disconnected");
  if (geom.layers() < 3) throw InvalidArgument("Ricci coefficient needs at least 3 layers");
  return stats::pearson(geom.eta, curvature_for_transitions(geom));
}

double fisher_adjust(double rho, std::size_t depth) {
  if (depth <= 4)
    throw InvalidArgument("Fisher adjustment needs depth >= 5 (got " + std::to_string(depth) + ")");
  if (!(std::abs(rho) < 1.0))
    throw UndefinedCoefficient("Fisher z is infinite or undefined for |rho| >= 1");
  return std::atanh(rho) / std::sqrt(static_cast<double>(depth - 4));
}

double aggregate_coefficient(const std::vector<LayerGeometry>& geoms) {
  std::vector<double> eta, curvature;
  for (const auto& g : geoms) {
    if (g.excluded()) continue;
    const auto c = curvature_for_transitions(g);
    eta.insert(eta.end(), g.eta.begin(), g.eta.end());
    curvature.insert(curvature.end(), c.begin(), c.end());
  }
  if (eta.empty()) throw Error("aggregate coefficient: every network is excluded");
  return stats::pearson(eta, curvature);
}

KSweepResult k_sweep(const std::vector<LayerRankings>& ensemble,
                     const std::vector<std::size_t>& k_values, std::size_t threads) {
  if (k_values.empty()) throw InvalidArgument("k_sweep: empty k list");
  if (!std::is_sorted(k_values.begin(), k_values.end()) ||
      std::adjacent_find(k_values.begin(), k_values.end()) != k_values.end())
    throw InvalidArgument("k_sweep: k values must be strictly ascending");
  for (const auto& r : ensemble)
    for (const auto& layer : r.per_layer)
      if (layer.max_k() < k_values.back())
        throw InvalidArgument("k_sweep: rankings for " + r.network_id + " only reach k = " +
                              std::to_string(layer.max_k()));

  const std::size_t nk = k_values.size();
  const std::size_t nn = ensemble.size();
  KSweepResult result;
  result.geometries.assign(nk, std::vector<LayerGeometry>(nn));
  parallel_for(nk * nn, threads, [&](std::size_t item) {
    const std::size_t ki = item / nn;
    const std::size_t ni = item % nn;
    result.geometries[ki][ni] = layer_geometry(ensemble[ni], k_values[ki]);
  });

  std::optional<double> best;
  for (std::size_t ki = 0; ki < nk; ++ki) {
    KSweepRow row;
    row.k = k_values[ki];
    const auto& geoms = result.geometries[ki];
    double coefficient_sum = 0.0;
    std::size_t defined = 0;
    for (const auto& g : geoms) {
      if (g.excluded()) {
        ++row.excluded;
        continue;
      }
      ++row.pooled;
      try {
        coefficient_sum += ricci_coefficient(g);
        ++defined;
      } catch (const UndefinedCoefficient&) {
      }
    }
    if (defined > 0) row.mean_network_coefficient = coefficient_sum / static_cast<double>(defined);
    if (row.pooled > 0) {
      try {
        row.aggregated = aggregate_coefficient(geoms);
      } catch (const UndefinedCoefficient&) {
      }
    }
    if (row.aggregated && (!best || *row.aggregated < *best)) {
      best = row.aggregated;
      result.optimal_k = row.k;
    }
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace riccinet::ricci
