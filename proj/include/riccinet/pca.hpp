#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "riccinet/nn.hpp"

namespace riccinet::pca {

struct Projection {
  /// Centred data projected onto the leading components (n x components).
  Eigen::MatrixXd coordinates;
  /// Principal directions as columns (dim x components). Each column's
  /// largest-magnitude loading is positive.
  Eigen::MatrixXd components;
  /// All covariance eigenvalues, descending.
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd mean;
  /// Non-empty when fewer than the requested components carry variance.
  std::string warning;
};

/// Projection onto at most `max_components` principal directions; components
/// with (numerically) zero variance are dropped. Needs at least 3 rows.
Projection project(const Eigen::MatrixXd& points, int max_components = 2);

std::vector<Projection> project_layers(const nn::LayerActivations& acts);

}  // namespace riccinet::pca
