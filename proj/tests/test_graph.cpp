#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "riccinet/error.hpp"
#include "riccinet/graph.hpp"
#include "riccinet/random.hpp"

using namespace riccinet;
using graph::NeighborGraph;

namespace {

NeighborGraph from_set(std::size_t n, const oracle::EdgeSet& edges) {
  return NeighborGraph(n, std::vector<graph::Edge>(edges.begin(), edges.end()));
}

oracle::EdgeSet to_set(const NeighborGraph& g) { return {g.edges().begin(), g.edges().end()}; }

NeighborGraph path(std::size_t n) {
  std::vector<graph::Edge> e;
  for (graph::Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return NeighborGraph(n, e);
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("collinear points with k = 1 form a path") {
    Eigen::MatrixXd pts(4, 2);
    pts << 0, 0, 1, 0, 2.5, 0, 4.5, 0;
    const auto g = graph::knn_graph(pts, 1);
    CHECK(g.edges() == std::vector<graph::Edge>{{0, 1}, {1, 2}, {2, 3}});
  }

  TEST_CASE("k = n - 1 gives the complete graph") {
    Rng rng(1);
    const auto pts = oracle::random_points(rng, 9, 3);
    const auto g = graph::knn_graph(pts, 8);
    CHECK(g.edge_count() == 36);
    for (graph::Vertex v = 0; v < 9; ++v) CHECK(g.degree(v) == 8);
  }

  TEST_CASE("k-NN matches the exhaustive oracle") {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 30 + 7 * static_cast<std::size_t>(trial);
      const std::size_t dim = 2 + static_cast<std::size_t>(trial) % 9;
      const auto pts = oracle::random_points(rng, n, dim);
      const graph::NeighborRanking ranking(pts, 20);
      for (std::size_t k : {1, 5, 20}) {
        const auto g = graph::knn_graph(ranking, k, 3);
        CHECK(to_set(g) == oracle::knn_edges(pts, k));
        CHECK(g.k() == k);
        CHECK(g.layer() == 3);
        CHECK(g == graph::knn_graph(pts, k));
        for (graph::Vertex v = 0; v < n; ++v) CHECK(g.degree(v) >= k);
      }
    }
  }

  TEST_CASE("duplicate points break ties by index") {
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(4, 2);
    pts(3, 0) = 10.0;
    const auto g = graph::knn_graph(pts, 1);
    // 0 -> 1, 1 -> 0, 2 -> 0, 3 -> 0 (all of 0,1,2 tie; the smallest index wins).
    CHECK(g.edges() == std::vector<graph::Edge>{{0, 1}, {0, 2}, {0, 3}});
  }

  TEST_CASE("k out of range is rejected") {
    const Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(5, 2);
    CHECK_THROWS_AS(graph::knn_graph(pts, 0), InvalidArgument);
    CHECK_THROWS_AS(graph::knn_graph(pts, 5), InvalidArgument);
    const graph::NeighborRanking r(pts, 2);
    CHECK_THROWS_AS(graph::knn_graph(r, 3), InvalidArgument);
  }

  TEST_CASE("graph construction validates edges") {
    CHECK_THROWS_AS(NeighborGraph(3, {{0, 3}}), InvalidArgument);
    CHECK_THROWS_AS(NeighborGraph(3, {{1, 1}}), InvalidArgument);
    const NeighborGraph g(3, {{2, 0}, {0, 2}, {1, 0}});
    CHECK(g.edges() == std::vector<graph::Edge>{{0, 1}, {0, 2}});
    CHECK(g.has_edge(2, 0));
    CHECK_FALSE(g.has_edge(1, 2));
  }

  TEST_CASE("connectivity agrees with union-find") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + graph::Vertex(uniform_index(rng, 30));
      const auto edges = oracle::random_edges(rng, n, 0.08);
      CHECK(graph::is_connected(from_set(n, edges)) == oracle::connected(n, edges));
    }
  }

  TEST_CASE("BFS distances and totals agree with Floyd-Warshall") {
    Rng rng(4);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 2 + uniform_index(rng, 39);
      const auto edges = oracle::random_connected(rng, n, 0.05);
      const auto g = from_set(n, edges);
      const auto fw = oracle::floyd_warshall(n, edges);
      const auto d0 = graph::bfs_distances(g, 0);
      for (std::size_t v = 0; v < n; ++v) CHECK(d0[v] == fw[0][v]);
      const auto expected = static_cast<std::uint64_t>(oracle::floyd_total(n, edges));
      CHECK(graph::total_pairwise_distance(g) == expected);
      CHECK(graph::total_pairwise_distance(g, 3) == expected);
    }
  }

  TEST_CASE("multi-batch totals cross the 256-source boundary") {
    // Path graph: total = sum_{d=1}^{n-1} d (n - d) = (n^3 - n) / 6.
    for (std::size_t n : {255, 256, 257, 600}) {
      const auto g = path(n);
      CHECK(graph::total_pairwise_distance(g, 2) == (n * n * n - n) / 6);
    }
  }

  TEST_CASE("disconnected graph has no total distance") {
    const NeighborGraph g(4, {{0, 1}, {2, 3}});
    CHECK_FALSE(graph::is_connected(g));
    CHECK_THROWS_AS(graph::total_pairwise_distance(g), DisconnectedGraph);
    const auto d = graph::bfs_distances(g, 0);
    CHECK(d[1] == 1);
    CHECK(d[2] == -1);
  }

  TEST_CASE("unweighted Forman worked examples") {
    const NeighborGraph single(2, {{0, 1}});
    CHECK(graph::forman_unweighted(single, 0, 1) == 2);
    CHECK(graph::total_curvature(single) == 2);

    const NeighborGraph k3(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(graph::forman_unweighted(k3, 0, 1) == 0);
    CHECK(graph::total_curvature(k3) == 0);

    const auto p3 = path(3);
    CHECK(graph::forman_unweighted(p3, 0, 1) == 1);
    CHECK(graph::total_curvature(p3) == 2);

    CHECK_THROWS_AS(graph::forman_unweighted(p3, 0, 2), EdgeNotFound);
  }

  TEST_CASE("k-NN edge curvature is bounded by 4 - 2k") {
    Rng rng(5);
    for (std::size_t k : {1, 3, 8}) {
      const auto g = graph::knn_graph(oracle::random_points(rng, 60, 4), k);
      for (auto [i, j] : g.edges()) CHECK(graph::forman_unweighted(g, i, j) <= 4 - 2 * static_cast<std::int64_t>(k));
    }
  }

  TEST_CASE("weighted Forman matches a dense transcription") {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + uniform_index(rng, 29);
      const auto edges = oracle::random_connected(rng, n, 0.15);
      std::vector<double> W(n);
      for (auto& w : W) w = uniform(rng, 0.1, 3.0);
      std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
      graph::WeightedGraph g(W);
      for (auto [i, j] : edges) {
        const double w = uniform(rng, 0.1, 3.0);
        dense[i][j] = dense[j][i] = w;
        g.add_edge(i, j, w);
      }
      for (auto [i, j] : edges)
        CHECK(std::abs(graph::forman_weighted(g, i, j) - oracle::forman_dense(W, dense, i, j)) < 1e-10);
    }
  }

  TEST_CASE("unit weights reduce to the unweighted formula") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 2 + uniform_index(rng, 25);
      const auto edges = oracle::random_connected(rng, n, 0.2);
      const auto ng = from_set(n, edges);
      graph::WeightedGraph wg(std::vector<double>(n, 1.0));
      for (auto [i, j] : edges) wg.add_edge(i, j, 1.0);
      for (auto [i, j] : edges)
        CHECK(graph::forman_weighted(wg, i, j) == static_cast<double>(graph::forman_unweighted(ng, i, j)));
    }
  }

  TEST_CASE("weighted graph validation") {
    CHECK_THROWS_AS(graph::WeightedGraph({1.0, 0.0}), InvalidArgument);
    graph::WeightedGraph g({1.0, 1.0, 1.0});
    CHECK_THROWS_AS(g.add_edge(0, 1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(g.add_edge(0, 0, 1.0), InvalidArgument);
    g.add_edge(0, 1, 2.0);
    CHECK_THROWS_AS(g.add_edge(1, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(graph::forman_weighted(g, 1, 2), EdgeNotFound);
  }

  TEST_CASE("rigid motions leave the k-NN graph unchanged") {
    Rng rng(8);
    const auto pts = oracle::random_points(rng, 80, 3);
    const double c = std::cos(0.7), s = std::sin(0.7);
    Eigen::Matrix3d rot;
    rot << c, -s, 0, s, c, 0, 0, 0, 1;
    Eigen::MatrixXd moved = pts * rot.transpose();
    moved.rowwise() += Eigen::RowVector3d(0.5, -2.0, 3.0);
    for (std::size_t k : {1, 5, 10}) CHECK(graph::knn_graph(pts, k) == graph::knn_graph(moved, k));
  }

  TEST_CASE("BFS distances satisfy the triangle inequality") {
    Rng rng(9);
    const auto g = graph::knn_graph(oracle::random_points(rng, 50, 2), 4);
    REQUIRE(graph::is_connected(g));
    std::vector<std::vector<std::int64_t>> d;
    for (graph::Vertex v = 0; v < 50; ++v) d.push_back(graph::bfs_distances(g, v));
    for (std::size_t a = 0; a < 50; ++a)
      for (std::size_t b = 0; b < 50; ++b) {
        CHECK(d[a][b] == d[b][a]);
        for (std::size_t c = 0; c < 50; c += 7) CHECK(d[a][b] <= d[a][c] + d[c][b]);
      }
  }

  TEST_CASE("edge list output") {
    std::ostringstream out;
    graph::write_edge_list(out, path(3));
    CHECK(out.str().find("0 1") != std::string::npos);
    CHECK(out.str().find("1 2") != std::string::npos);
  }
}
