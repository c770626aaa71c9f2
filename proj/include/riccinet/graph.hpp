#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace riccinet::graph {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Undirected simple graph stored as sorted adjacency lists (CSR).
class NeighborGraph {
 public:
  NeighborGraph() = default;
  /// Builds from an edge list; duplicates and orientation are normalised away.
  /// Self-loops and out-of-range endpoints throw InvalidArgument.
  NeighborGraph(std::size_t vertex_count, std::vector<Edge> edges, std::size_t k = 0,
                std::size_t layer = 0);

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  bool has_edge(Vertex i, Vertex j) const;
  /// Sorted (i < j) edge list.
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t k() const { return k_; }
  std::size_t layer() const { return layer_; }

  friend bool operator==(const NeighborGraph& a, const NeighborGraph& b) {
    return a.offsets_ == b.offsets_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adjacency_;
  std::vector<Edge> edges_;
  std::size_t k_ = 0;
  std::size_t layer_ = 0;
};

/// For every point, the indices of its nearest other points in increasing
/// Euclidean distance (ties broken by smaller index), truncated to max_k.
/// One ranking serves every k <= max_k, since a k-NN graph only reads a prefix.
class NeighborRanking {
 public:
  NeighborRanking() = default;
  NeighborRanking(const Eigen::MatrixXd& points, std::size_t max_k);

  std::size_t point_count() const { return n_; }
  std::size_t max_k() const { return max_k_; }
  std::span<const Vertex> nearest(Vertex v) const {
    return {order_.data() + v * max_k_, max_k_};
  }

 private:
  std::size_t n_ = 0;
  std::size_t max_k_ = 0;
  std::vector<Vertex> order_;
};

/// Symmetrised k-NN graph: i ~ j when either lists the other among its k nearest.
NeighborGraph knn_graph(const NeighborRanking& ranking, std::size_t k, std::size_t layer = 0);
NeighborGraph knn_graph(const Eigen::MatrixXd& points, std::size_t k, std::size_t layer = 0);

bool is_connected(const NeighborGraph& g);

/// Hop distances from one source; unreachable vertices get -1.
std::vector<std::int64_t> bfs_distances(const NeighborGraph& g, Vertex source);

/// Sum of shortest-path hop counts over unordered vertex pairs. Runs a
/// bit-parallel breadth-first search from every vertex, 256 sources per sweep.
/// Integer accumulation keeps the result independent of `threads`.
/// Throws DisconnectedGraph.
std::uint64_t total_pairwise_distance(const NeighborGraph& g, std::size_t threads = 1);

/// Forman-Ricci curvature of an unweighted edge: 4 - deg(i) - deg(j).
std::int64_t forman_unweighted(const NeighborGraph& g, Vertex i, Vertex j);

/// Sum of forman_unweighted over the edge set, each edge once.
std::int64_t total_curvature(const NeighborGraph& g);

/// Graph with positive vertex weights W_i and edge weights w_ij.
class WeightedGraph {
 public:
  explicit WeightedGraph(std::vector<double> vertex_weights);

  void add_edge(Vertex i, Vertex j, double weight);
  std::size_t vertex_count() const { return vertex_weights_.size(); }
  double vertex_weight(Vertex v) const { return vertex_weights_[v]; }
  /// Edge weight, or 0 when (i, j) is absent.
  double edge_weight(Vertex i, Vertex j) const;
  const std::vector<std::pair<Vertex, double>>& incident(Vertex v) const { return incident_[v]; }

 private:
  std::vector<double> vertex_weights_;
  std::vector<std::vector<std::pair<Vertex, double>>> incident_;
};

/// Weighted Forman-Ricci curvature:
///   W_i + W_j - sqrt(w_ij) * (W_i * sum_{k ~ i, k != j} w_ik^-1/2
///                           + W_j * sum_{k ~ j, k != i} w_kj^-1/2).
/// Throws EdgeNotFound when (i, j) is not an edge.
double forman_weighted(const WeightedGraph& g, Vertex i, Vertex j);

/// "i j" per line, sorted, i < j.
void write_edge_list(std::ostream& out, const NeighborGraph& g);

}  // namespace riccinet::graph
