#include "riccinet/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <ostream>
#include <string>

#include "riccinet/error.hpp"
#include "riccinet/parallel.hpp"

namespace riccinet::graph {

NeighborGraph::NeighborGraph(std::size_t vertex_count, std::vector<Edge> edges, std::size_t k,
                             std::size_t layer)
    : k_(k), layer_(layer) {
  for (auto& [i, j] : edges) {
    if (i >= vertex_count || j >= vertex_count)
      throw InvalidArgument("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range for " + std::to_string(vertex_count) + " vertices");
    if (i == j) throw InvalidArgument("self-loop at vertex " + std::to_string(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  offsets_.assign(vertex_count + 1, 0);
  for (const auto& [i, j] : edges_) {
    ++offsets_[i + 1];
    ++offsets_[j + 1];
  }
  for (std::size_t v = 0; v < vertex_count; ++v) offsets_[v + 1] += offsets_[v];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [i, j] : edges_) {
    adjacency_[fill[i]++] = j;
    adjacency_[fill[j]++] = i;
  }
  for (std::size_t v = 0; v < vertex_count; ++v)
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
}

bool NeighborGraph::has_edge(Vertex i, Vertex j) const {
  if (i >= vertex_count() || j >= vertex_count()) return false;
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

// --- k-NN ----------------------------------------------------------------------

NeighborRanking::NeighborRanking(const Eigen::MatrixXd& points, std::size_t max_k)
    : n_(static_cast<std::size_t>(points.rows())), max_k_(max_k) {
  if (points.cols() < 1) throw InvalidArgument("knn: points need at least one column");
  if (max_k < 1 || max_k >= n_)
    throw InvalidArgument("knn: k = " + std::to_string(max_k) + " out of range [1, " +
                          std::to_string(n_ == 0 ? 0 : n_ - 1) + "] for " + std::to_string(n_) +
                          " points");
  // Row-major copy so each point is contiguous.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> pts = points;
  const auto dim = static_cast<std::size_t>(pts.cols());
  const double* base = pts.data();

  // Full squared-distance matrix, each entry computed once as sum (a_d - b_d)^2
  // so d(i, j) and d(j, i) are bitwise equal.
  std::vector<double> dist(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* a = base + i * dim;
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double* b = base + j * dim;
      double s = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
      }
      dist[i * n_ + j] = s;
      dist[j * n_ + i] = s;
    }
  }

  order_.resize(n_ * max_k_);
  std::vector<Vertex> candidates(n_ - 1);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = dist.data() + i * n_;
    std::size_t c = 0;
    for (std::size_t j = 0; j < n_; ++j)
      if (j != i) candidates[c++] = static_cast<Vertex>(j);
    auto closer = [row](Vertex x, Vertex y) { return row[x] < row[y] || (row[x] == row[y] && x < y); };
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(max_k_),
                      candidates.end(), closer);
    std::copy_n(candidates.begin(), max_k_, order_.begin() + static_cast<std::ptrdiff_t>(i * max_k_));
  }
}

NeighborGraph knn_graph(const NeighborRanking& ranking, std::size_t k, std::size_t layer) {
  if (k < 1 || k > ranking.max_k())
    throw InvalidArgument("knn: k = " + std::to_string(k) + " outside the ranked range [1, " +
                          std::to_string(ranking.max_k()) + "]");
  const std::size_t n = ranking.point_count();
  std::vector<Edge> edges;
  edges.reserve(n * k);
  for (Vertex i = 0; i < n; ++i) {
    const auto near = ranking.nearest(i);
    for (std::size_t r = 0; r < k; ++r) {
      const Vertex j = near[r];
      edges.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  return NeighborGraph(n, std::move(edges), k, layer);
}

NeighborGraph knn_graph(const Eigen::MatrixXd& points, std::size_t k, std::size_t layer) {
  return knn_graph(NeighborRanking(points, k), k, layer);
}

// --- traversal ---------------------------------------------------------------

std::vector<std::int64_t> bfs_distances(const NeighborGraph& g, Vertex source) {
  std::vector<std::int64_t> dist(g.vertex_count(), -1);
  if (source >= g.vertex_count()) return dist;
  std::vector<Vertex> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (Vertex u : g.neighbors(v)) {
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

bool is_connected(const NeighborGraph& g) {
  if (g.vertex_count() == 0) return true;
  const auto d = bfs_distances(g, 0);
  return std::none_of(d.begin(), d.end(), [](std::int64_t x) { return x < 0; });
}

namespace {

constexpr std::size_t kWords = 4;
constexpr std::size_t kLanes = 64 * kWords;

struct Lanes {
  std::array<std::uint64_t, kWords> w{};

  bool any() const {
    std::uint64_t acc = 0;
    for (auto x : w) acc |= x;
    return acc != 0;
  }
  int popcount() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
  }
};

// Ordered-pair distance sum for sources [first, first + count).
std::uint64_t sweep(const NeighborGraph& g, std::size_t first, std::size_t count) {
  const std::size_t n = g.vertex_count();
  std::vector<Lanes> seen(n), frontier(n), next(n);
  Lanes full;
  for (std::size_t b = 0; b < count; ++b) {
    full.w[b / 64] |= std::uint64_t{1} << (b % 64);
    seen[first + b].w[b / 64] |= std::uint64_t{1} << (b % 64);
    frontier[first + b].w[b / 64] |= std::uint64_t{1} << (b % 64);
  }

  std::uint64_t total = 0;
  std::uint64_t reached = count;
  for (std::uint64_t level = 1;; ++level) {
    bool advanced = false;
    for (std::size_t v = 0; v < n; ++v) {
      Lanes& out = next[v];
      if (seen[v].w == full.w) {
        out = Lanes{};
        continue;
      }
      Lanes acc;
      for (Vertex u : g.neighbors(static_cast<Vertex>(v)))
        for (std::size_t q = 0; q < kWords; ++q) acc.w[q] |= frontier[u].w[q];
      for (std::size_t q = 0; q < kWords; ++q) acc.w[q] &= ~seen[v].w[q];
      out = acc;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!next[v].any()) continue;
      const auto c = static_cast<std::uint64_t>(next[v].popcount());
      total += level * c;
      reached += c;
      for (std::size_t q = 0; q < kWords; ++q) seen[v].w[q] |= next[v].w[q];
      advanced = true;
    }
    if (!advanced) break;
    std::swap(frontier, next);
  }
  if (reached != count * n) throw DisconnectedGraph();
  return total;
}

}  // namespace

std::uint64_t total_pairwise_distance(const NeighborGraph& g, std::size_t threads) {
  const std::size_t n = g.vertex_count();
  if (n <= 1) return 0;
  if (!is_connected(g)) throw DisconnectedGraph();
  const std::size_t batches = (n + kLanes - 1) / kLanes;
  std::vector<std::uint64_t> partial(batches, 0);
  parallel_for(batches, threads, [&](std::size_t b) {
    const std::size_t first = b * kLanes;
    partial[b] = sweep(g, first, std::min(kLanes, n - first));
  });
  std::uint64_t ordered = 0;
  for (auto p : partial) ordered += p;
  return ordered / 2;
}

// --- curvature -----------------------------------------------------------------

std::int64_t forman_unweighted(const NeighborGraph& g, Vertex i, Vertex j) {
  if (!g.has_edge(i, j)) throw EdgeNotFound(i, j);
  return 4 - static_cast<std::int64_t>(g.degree(i)) - static_cast<std::int64_t>(g.degree(j));
}

std::int64_t total_curvature(const NeighborGraph& g) {
  std::int64_t total = 0;
  for (const auto& [i, j] : g.edges())
    total += 4 - static_cast<std::int64_t>(g.degree(i)) - static_cast<std::int64_t>(g.degree(j));
  return total;
}

WeightedGraph::WeightedGraph(std::vector<double> vertex_weights)
    : vertex_weights_(std::move(vertex_weights)), incident_(vertex_weights_.size()) {
  for (double w : vertex_weights_)
    if (!(w > 0.0)) throw InvalidArgument("vertex weights must be strictly positive");
}

void WeightedGraph::add_edge(Vertex i, Vertex j, double weight) {
  if (i >= vertex_count() || j >= vertex_count()) throw InvalidArgument("edge endpoint out of range");
  if (i == j) throw InvalidArgument("self-loop at vertex " + std::to_string(i));
  if (!(weight > 0.0)) throw InvalidArgument("edge weights must be strictly positive");
  if (edge_weight(i, j) > 0.0)
    throw InvalidArgument("duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  incident_[i].emplace_back(j, weight);
  incident_[j].emplace_back(i, weight);
}

double WeightedGraph::edge_weight(Vertex i, Vertex j) const {
  if (i >= vertex_count()) return 0.0;
  for (const auto& [k, w] : incident_[i])
    if (k == j) return w;
  return 0.0;
}

double forman_weighted(const WeightedGraph& g, Vertex i, Vertex j) {
  const double w_ij = g.edge_weight(i, j);
  if (w_ij <= 0.0) throw EdgeNotFound(i, j);
  double around_i = 0.0;
  for (const auto& [k, w] : g.incident(i))
    if (k != j) around_i += 1.0 / std::sqrt(w);
  double around_j = 0.0;
  for (const auto& [k, w] : g.incident(j))
    if (k != i) around_j += 1.0 / std::sqrt(w);
  const double wi = g.vertex_weight(i);
  const double wj = g.vertex_weight(j);
  return wi + wj - std::sqrt(w_ij) * (wi * around_i + wj * around_j);
}

void write_edge_list(std::ostream& out, const NeighborGraph& g) {
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

}  // namespace riccinet::graph
