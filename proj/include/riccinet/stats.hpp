#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace riccinet::stats {

/// Sample Pearson correlation (two-pass). Throws UndefinedCoefficient when
/// either input has zero variance, InvalidArgument on length mismatch or n < 2.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
double t_two_sided_p(double t, double df);

struct RegressionResult {
  std::vector<std::string> names;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  std::vector<double> t_values;
  std::vector<double> p_values;
  std::size_t residual_df = 0;
  double residual_variance = 0.0;
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
};

/// Ordinary least squares by column-pivoted Householder QR. Standard errors
/// come from the residual variance and diag((X^T X)^-1), evaluated through R.
/// Throws RankDeficient naming the dependent columns, InvalidArgument if
/// rows < columns + 1.
RegressionResult ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                         std::vector<std::string> names = {});

struct Design {
  Eigen::MatrixXd matrix;
  std::vector<std::string> names;
  std::vector<std::string> warnings;
};

struct Factor {
  std::string name;
  std::vector<std::string> values;
};

/// Intercept, the numeric predictor, then reference-coded dummies for each
/// factor (baseline = alphabetically first level; one column per other level,
/// named "<factor>=<level>"). Single-level factors add no column and a warning.
Design dummy_code(const std::string& predictor_name, std::span<const double> predictor,
                  const std::vector<Factor>& factors);

void write_regression_csv(std::ostream& out, const RegressionResult& r);

}  // namespace riccinet::stats
