#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "riccinet/error.hpp"
#include "riccinet/ricci.hpp"

using namespace riccinet;
using ricci::LayerGeometry;

namespace {

// Smooth toy activations: a Gaussian cloud pushed through random tanh layers.
nn::LayerActivations toy_activations(std::size_t layers, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  nn::LayerActivations acts;
  Eigen::MatrixXd x = oracle::random_points(rng, n, 3);
  for (std::size_t l = 0; l < layers; ++l) {
    const auto width = 3 + l % 3;
    const Eigen::MatrixXd w = 0.4 * oracle::random_points(rng, static_cast<std::size_t>(x.cols()), width);
    x = (x * w).array().tanh().matrix();
    acts.per_layer.push_back(x);
  }
  return acts;
}

struct OracleGeometry {
  std::vector<std::int64_t> g;
  std::vector<std::int64_t> ric;
};

OracleGeometry naive_pipeline(const nn::LayerActivations& acts, std::size_t k) {
  OracleGeometry out;
  for (const auto& layer : acts.per_layer) {
    const auto n = static_cast<std::size_t>(layer.rows());
    const auto edges = oracle::knn_edges(layer, k);
    out.g.push_back(oracle::floyd_total(n, edges));
    const auto deg = oracle::degrees(n, edges);
    std::int64_t ric = 0;
    for (auto [i, j] : edges) ric += 4 - static_cast<std::int64_t>(deg[i]) - static_cast<std::int64_t>(deg[j]);
    out.ric.push_back(ric);
  }
  return out;
}

LayerGeometry geometry(std::vector<double> g, std::vector<double> ric) {
  LayerGeometry geom;
  geom.total_distance = std::move(g);
  geom.total_curvature = std::move(ric);
  for (std::size_t l = 0; l + 1 < geom.total_distance.size(); ++l)
    geom.eta.push_back(geom.total_distance[l + 1] - geom.total_distance[l]);
  return geom;
}

}  // namespace

TEST_SUITE("ricci") {
  TEST_CASE("identical layers give zero eta and an undefined coefficient") {
    const auto base = toy_activations(1, 40, 1).per_layer[0];
    nn::LayerActivations acts{{base, base, base, base, base}};
    const auto geom = ricci::layer_geometry(acts, 5);
    REQUIRE_FALSE(geom.excluded());
    CHECK(geom.eta == std::vector<double>(4, 0.0));
    CHECK_THROWS_AS(ricci::ricci_coefficient(geom), UndefinedCoefficient);
  }

  TEST_CASE("geometry matches a naive end-to-end oracle") {
    const auto acts = toy_activations(5, 30, 2);
    const auto geom = ricci::layer_geometry(acts, 4);
    const auto expected = naive_pipeline(acts, 4);
    REQUIRE_FALSE(geom.excluded());
    REQUIRE(geom.layers() == 5);
    for (std::size_t l = 0; l < 5; ++l) {
      REQUIRE(expected.g[l] > 0);
      CHECK(geom.total_distance[l] == static_cast<double>(expected.g[l]));
      CHECK(geom.total_curvature[l] == static_cast<double>(expected.ric[l]));
    }
    std::vector<double> eta, ric;
    for (std::size_t l = 0; l + 1 < 5; ++l) {
      eta.push_back(static_cast<double>(expected.g[l + 1] - expected.g[l]));
      ric.push_back(static_cast<double>(expected.ric[l]));
    }
    CHECK(std::abs(ricci::ricci_coefficient(geom) - oracle::pearson(eta, ric)) < 1e-12);
  }

  TEST_CASE("uniform scaling leaves the geometry unchanged") {
    const auto acts = toy_activations(6, 60, 3);
    const auto base = ricci::layer_geometry(acts, 5);
    for (double c : {2.0, 0.5, 3.7, 1e3}) {
      nn::LayerActivations scaled = acts;
      for (auto& m : scaled.per_layer) m *= c;
      const auto geom = ricci::layer_geometry(scaled, 5);
      CHECK(geom.total_distance == base.total_distance);
      CHECK(geom.total_curvature == base.total_curvature);
      CHECK(ricci::ricci_coefficient(geom) == ricci::ricci_coefficient(base));
    }
  }

  TEST_CASE("disconnected layers mark the geometry excluded") {
    Eigen::MatrixXd two_clusters(8, 2);
    two_clusters << 0, 0, 0, 1, 1, 0, 1, 1, 100, 100, 100, 101, 101, 100, 101, 101;
    Eigen::MatrixXd connected = Eigen::MatrixXd::Zero(8, 2);
    for (Eigen::Index i = 0; i < 8; ++i) connected(i, 0) = static_cast<double>(i);
    nn::LayerActivations acts{{connected, connected, two_clusters, connected}};
    const auto geom = ricci::layer_geometry(acts, 2);
    REQUIRE(geom.excluded());
    CHECK(*geom.disconnected_layer == 2);
    CHECK_THROWS_AS(ricci::ricci_coefficient(geom), InvalidArgument);
  }

  TEST_CASE("coefficient worked examples") {
    // eta = (1, 2, 3), Ric paired by transition = (-1, -2, -3).
    const auto perfect = geometry({0, 1, 3, 6}, {-1, -2, -3, 99});
    CHECK(ricci::ricci_coefficient(perfect) == -1.0);
    const auto flat = geometry({0, 1, 3, 6}, {5, 5, 5, 0});
    CHECK_THROWS_AS(ricci::ricci_coefficient(flat), UndefinedCoefficient);
    CHECK_THROWS_AS(ricci::ricci_coefficient(geometry({0, 1}, {1, 2})), InvalidArgument);
  }

  TEST_CASE("Fisher adjustment") {
    CHECK(ricci::fisher_adjust(0.0, 5) == 0.0);
    CHECK(ricci::fisher_adjust(0.0, 11) == 0.0);
    CHECK(ricci::fisher_adjust(0.5, 5) == doctest::Approx(0.5493061443340549).epsilon(1e-15));
    // arctanh via the log identity, then divided by sqrt(13 - 4) = 3.
    const double log_form = 0.5 * std::log((1.0 - 0.9) / (1.0 + 0.9)) / 3.0;
    CHECK(std::abs(ricci::fisher_adjust(-0.9, 13) - log_form) < 1e-14);
    CHECK(std::abs(ricci::fisher_adjust(-0.9, 13) - (-0.49073982986107345)) < 1e-15);
    CHECK_THROWS_AS(ricci::fisher_adjust(0.1, 4), InvalidArgument);
    CHECK_THROWS_AS(ricci::fisher_adjust(1.0, 5), UndefinedCoefficient);
    CHECK_THROWS_AS(ricci::fisher_adjust(-1.0, 5), UndefinedCoefficient);
  }

  TEST_CASE("aggregate coefficient pools transitions") {
    const auto a = geometry({0, 1, 3, 6, 7}, {4, 1, 2, 9, 0});
    const auto b = geometry({5, 2, 2, 8, 1}, {3, 3, 7, 1, 0});
    const auto c = geometry({1, 4, 9, 16, 25}, {1, 0, -1, 0, 1});
    CHECK(ricci::aggregate_coefficient({a}) == ricci::ricci_coefficient(a));
    CHECK(std::abs(ricci::aggregate_coefficient({a, a}) - ricci::ricci_coefficient(a)) < 1e-15);

    std::vector<double> eta, ric;
    for (const auto* g : {&a, &b, &c})
      for (std::size_t l = 0; l < g->eta.size(); ++l) {
        eta.push_back(g->eta[l]);
        ric.push_back(g->total_curvature[l]);
      }
    CHECK(std::abs(ricci::aggregate_coefficient({a, b, c}) - oracle::pearson(eta, ric)) < 1e-12);

    auto excluded = b;
    excluded.disconnected_layer = 1;
    CHECK(ricci::aggregate_coefficient({a, excluded}) == ricci::aggregate_coefficient({a}));
    CHECK_THROWS_AS(ricci::aggregate_coefficient({excluded}), Error);
  }

  TEST_CASE("default k lists") {
    CHECK(ricci::default_synthetic_k() ==
          std::vector<std::size_t>{6, 7, 9, 10, 15, 18, 20, 30, 50, 90, 100, 120, 140, 150, 160, 180, 200});
    CHECK(ricci::default_image_k() ==
          std::vector<std::size_t>{10, 20, 30, 50, 90, 100, 120, 150, 250, 350, 500});
  }

  TEST_CASE("k sweep picks the most negative pooled coefficient") {
    std::vector<ricci::LayerRankings> ensemble;
    for (std::uint64_t s = 0; s < 3; ++s)
      ensemble.push_back(ricci::rank_layers(toy_activations(6, 50, 10 + s), 12, "n" + std::to_string(s)));
    const std::vector<std::size_t> ks = {3, 5, 8, 12};
    const auto sweep = ricci::k_sweep(ensemble, ks, 2);
    REQUIRE(sweep.rows.size() == ks.size());
    std::optional<double> best;
    std::size_t best_k = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const auto& row = sweep.rows[i];
      CHECK(row.k == ks[i]);
      CHECK(row.pooled + row.excluded == 3);
      // Recompute the pooled value from the stored geometries.
      std::vector<LayerGeometry> kept;
      for (const auto& g : sweep.geometries[i]) {
        CHECK(g.k == ks[i]);
        if (!g.excluded()) kept.push_back(g);
      }
      if (row.aggregated) {
        CHECK(*row.aggregated == ricci::aggregate_coefficient(kept));
        if (!best || *row.aggregated < *best) {
          best = row.aggregated;
          best_k = row.k;
        }
      }
    }
    REQUIRE(sweep.optimal_k);
    CHECK(*sweep.optimal_k == best_k);

    // Rankings are reused by prefix: the sweep matches fresh per-k geometry.
    const auto direct = ricci::layer_geometry(toy_activations(6, 50, 11), 5);
    CHECK(direct.total_distance == sweep.geometries[1][1].total_distance);
    CHECK(direct.total_curvature == sweep.geometries[1][1].total_curvature);
  }

  TEST_CASE("k sweep with every network disconnected has no optimum") {
    Eigen::MatrixXd two_clusters(8, 2);
    two_clusters << 0, 0, 0, 1, 1, 0, 1, 1, 100, 100, 100, 101, 101, 100, 101, 101;
    nn::LayerActivations acts{{two_clusters, two_clusters, two_clusters}};
    const auto sweep = ricci::k_sweep({ricci::rank_layers(acts, 3, "x")}, {1, 2, 3});
    CHECK_FALSE(sweep.optimal_k);
    for (const auto& row : sweep.rows) {
      CHECK(row.excluded == 1);
      CHECK_FALSE(row.aggregated);
    }
  }

  TEST_CASE("k sweep rejects bad k lists") {
    const auto r = ricci::rank_layers(toy_activations(5, 20, 1), 5);
    CHECK_THROWS_AS(ricci::k_sweep({r}, {}), InvalidArgument);
    CHECK_THROWS_AS(ricci::k_sweep({r}, {5, 3}), InvalidArgument);
    CHECK_THROWS_AS(ricci::k_sweep({r}, {3, 3}), InvalidArgument);
    CHECK_THROWS_AS(ricci::k_sweep({r}, {3, 6}), InvalidArgument);
  }
}
