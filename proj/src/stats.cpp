#include "riccinet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include <Eigen/QR>
#include <boost/math/special_functions/beta.hpp>

#include "riccinet/error.hpp"

namespace riccinet::stats {

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw InvalidArgument("pearson: need at least 2 pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw UndefinedCoefficient("pearson: zero variance in " +
                               std::string(sxx == 0.0 ? "first" : "second") + " series");
  // One square root of the product keeps r = +-1 exact for proportional series.
  const double denom_sq = sxx * syy;
  const double denom = std::isfinite(denom_sq) && denom_sq > 0.0 ? std::sqrt(denom_sq)
                                                                  : std::sqrt(sxx) * std::sqrt(syy);
  const double r = sxy / denom;
  return std::clamp(r, -1.0, 1.0);
}

double t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw InvalidArgument("t distribution needs df > 0");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(boost::math::ibeta(df / 2.0, 0.5, x), 0.0, 1.0);
}

RegressionResult ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                         std::vector<std::string> names) {
  const auto n = design.rows();
  const auto p = design.cols();
  if (response.size() != n) throw InvalidArgument("ols: response length does not match design rows");
  if (n < p + 1)
    throw InvalidArgument("ols: need at least columns + 1 rows (" + std::to_string(n) + " rows, " +
                          std::to_string(p) + " columns)");
  if (names.empty())
    for (Eigen::Index c = 0; c < p; ++c) names.push_back("x" + std::to_string(c));
  if (static_cast<Eigen::Index>(names.size()) != p)
    throw InvalidArgument("ols: one name per design column required");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  const auto& perm = qr.colsPermutation().indices();
  if (qr.rank() < p) {
    std::string cols;
    for (Eigen::Index c = qr.rank(); c < p; ++c) {
      if (!cols.empty()) cols += ", ";
      cols += names[static_cast<std::size_t>(perm[c])];
    }
    throw RankDeficient("ols: design has rank " + std::to_string(qr.rank()) + " < " +
                        std::to_string(p) + "; collinear column(s): " + cols);
  }

  RegressionResult r;
  r.names = std::move(names);
  const Eigen::VectorXd beta = qr.solve(response);
  r.fitted = design * beta;
  r.residuals = response - r.fitted;
  r.residual_df = static_cast<std::size_t>(n - p);
  r.residual_variance = r.residuals.squaredNorm() / static_cast<double>(r.residual_df);

  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd gram_inv_diag = r_inv.rowwise().squaredNorm();

  r.coefficients.resize(static_cast<std::size_t>(p));
  r.standard_errors.resize(static_cast<std::size_t>(p));
  r.t_values.resize(static_cast<std::size_t>(p));
  r.p_values.resize(static_cast<std::size_t>(p));
  for (Eigen::Index c = 0; c < p; ++c) {
    const auto j = static_cast<std::size_t>(perm[c]);
    r.standard_errors[j] = std::sqrt(r.residual_variance * gram_inv_diag[c]);
  }
  for (std::size_t j = 0; j < static_cast<std::size_t>(p); ++j) {
    r.coefficients[j] = beta[static_cast<Eigen::Index>(j)];
    const double se = r.standard_errors[j];
    if (se > 0.0) {
      r.t_values[j] = r.coefficients[j] / se;
      r.p_values[j] = t_two_sided_p(r.t_values[j], static_cast<double>(r.residual_df));
    } else {
      // Perfect fit: the estimate carries no sampling error.
      r.t_values[j] = r.coefficients[j] == 0.0 ? 0.0 : std::copysign(INFINITY, r.coefficients[j]);
      r.p_values[j] = r.coefficients[j] == 0.0 ? 1.0 : 0.0;
    }
  }
  return r;
}

Design dummy_code(const std::string& predictor_name, std::span<const double> predictor,
                  const std::vector<Factor>& factors) {
  const std::size_t n = predictor.size();
  std::vector<std::vector<std::string>> levels;
  std::size_t cols = 2;
  Design d;
  for (const auto& f : factors) {
    if (f.values.size() != n)
      throw InvalidArgument("dummy_code: factor '" + f.name + "' has " +
                            std::to_string(f.values.size()) + " values, expected " +
                            std::to_string(n));
    const std::set<std::string> uniq(f.values.begin(), f.values.end());
    levels.emplace_back(uniq.begin(), uniq.end());
    if (levels.back().size() <= 1)
      d.warnings.push_back("factor '" + f.name + "' has a single level; no dummy columns added");
    else
      cols += levels.back().size() - 1;
  }

  d.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
  d.names = {"(intercept)", predictor_name};
  for (std::size_t i = 0; i < n; ++i) {
    d.matrix(static_cast<Eigen::Index>(i), 0) = 1.0;
    d.matrix(static_cast<Eigen::Index>(i), 1) = predictor[i];
  }
  Eigen::Index col = 2;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    for (std::size_t lv = 1; lv < levels[f].size(); ++lv, ++col) {
      d.names.push_back(factors[f].name + "=" + levels[f][lv]);
      for (std::size_t i = 0; i < n; ++i)
        d.matrix(static_cast<Eigen::Index>(i), col) = factors[f].values[i] == levels[f][lv] ? 1.0 : 0.0;
    }
  }
  return d;
}

void write_regression_csv(std::ostream& out, const RegressionResult& r) {
  out << "predictor,coefficient,std_error,t_value,p_value\n";
  char buf[160];
  for (std::size_t j = 0; j < r.names.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", r.coefficients[j],
                  r.standard_errors[j], r.t_values[j], r.p_values[j]);
    out << r.names[j] << ',' << buf << '\n';
  }
}

}  // namespace riccinet::stats
