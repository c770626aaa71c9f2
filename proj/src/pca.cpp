#include "riccinet/pca.hpp"

#include <Eigen/Eigenvalues>

#include "riccinet/error.hpp"

namespace riccinet::pca {

Projection project(const Eigen::MatrixXd& points, int max_components) {
  if (points.rows() < 3) throw InvalidArgument("pca: need at least 3 points");
  Projection out;
  out.mean = points.colwise().mean().transpose();
  const Eigen::MatrixXd centred = points.rowwise() - out.mean.transpose();
  const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(points.rows() - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const auto dim = cov.rows();
  // Eigen returns ascending order.
  out.eigenvalues = eig.eigenvalues().reverse();
  const double scale = std::max(1.0, std::abs(out.eigenvalues[0]));
  int rank = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (out.eigenvalues[i] > 1e-12 * scale) ++rank;
  const int kept = std::min<int>(max_components, rank);
  if (kept < max_components)
    out.warning = "covariance rank " + std::to_string(rank) + " < " +
                  std::to_string(max_components) + "; emitting " + std::to_string(kept) +
                  " component(s)";

  out.components.resize(dim, kept);
  for (int c = 0; c < kept; ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(dim - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    out.components.col(c) = v;
  }
  out.coordinates = centred * out.components;
  return out;
}

std::vector<Projection> project_layers(const nn::LayerActivations& acts) {
  std::vector<Projection> out;
  out.reserve(acts.layer_count());
  for (const auto& layer : acts.per_layer) out.push_back(project(layer));
  return out;
}

}  // namespace riccinet::pca
