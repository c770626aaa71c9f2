#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "riccinet/error.hpp"
#include "riccinet/stats.hpp"

using namespace riccinet;

namespace {

std::vector<double> normals(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = standard_normal(rng);
  return v;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("pearson worked examples") {
    const std::vector<double> x = {1, 2, 3, 4.5};
    std::vector<double> neg;
    for (double v : x) neg.push_back(-v);
    CHECK(stats::pearson(x, x) == 1.0);
    CHECK(stats::pearson(x, neg) == -1.0);
    CHECK(stats::pearson(std::vector<double>{1, 2, 3}, std::vector<double>{-1, -2, -3}) == -1.0);
    CHECK_THROWS_AS(stats::pearson(x, std::vector<double>(4, 2.0)), UndefinedCoefficient);
    CHECK_THROWS_AS(stats::pearson(x, std::vector<double>{1, 2}), InvalidArgument);
    CHECK_THROWS_AS(stats::pearson(std::vector<double>{1}, std::vector<double>{1}), InvalidArgument);
  }

  TEST_CASE("pearson matches a raw-moment oracle") {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 3 + uniform_index(rng, 40);
      const auto x = normals(rng, n);
      auto y = normals(rng, n);
      const double mix = uniform(rng, -1.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) y[i] += mix * 3.0 * x[i];
      const double r = stats::pearson(x, y);
      CHECK(std::abs(r - oracle::pearson(x, y)) < 1e-12);
      CHECK(r >= -1.0);
      CHECK(r <= 1.0);
    }
  }

  TEST_CASE("pearson is invariant to affine maps with positive slope") {
    Rng rng(2);
    const auto x = normals(rng, 25);
    const auto y = normals(rng, 25);
    std::vector<double> x2;
    for (double v : x) x2.push_back(4.0 * v - 7.0);
    CHECK(std::abs(stats::pearson(x2, y) - stats::pearson(x, y)) < 1e-13);
  }

  TEST_CASE("two-sided t p-values") {
    CHECK(stats::t_two_sided_p(0.0, 5) == 1.0);
    CHECK(std::abs(stats::t_two_sided_p(2.0, 10) - 0.07338803477074039) < 1e-12);
    CHECK(std::abs(stats::t_two_sided_p(1.0, 1) - 0.5) < 1e-12);
    CHECK(std::abs(stats::t_two_sided_p(-3.5, 27) - 0.0016334888137380578) < 1e-12);
    CHECK(std::abs(stats::t_two_sided_p(0.5, 100) - 0.6181735658308867) < 1e-12);
    double prev = 1.0;
    for (double t = 0.25; t < 8.0; t += 0.25) {
      const double p = stats::t_two_sided_p(t, 12);
      CHECK(p < prev);
      prev = p;
    }
    CHECK_THROWS_AS(stats::t_two_sided_p(1.0, 0.0), InvalidArgument);
  }

  TEST_CASE("OLS recovers an exact linear relation") {
    Eigen::MatrixXd X(6, 2);
    Eigen::VectorXd y(6);
    for (int i = 0; i < 6; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = i;
      y[i] = 2.5 - 0.75 * i;
    }
    const auto r = stats::ols_fit(X, y, {"(intercept)", "x"});
    CHECK(std::abs(r.coefficients[0] - 2.5) < 1e-10);
    CHECK(std::abs(r.coefficients[1] + 0.75) < 1e-10);
    CHECK(r.residuals.norm() < 1e-10);
  }

  TEST_CASE("OLS on a constant response has zero slopes") {
    Rng rng(3);
    Eigen::MatrixXd X(15, 3);
    for (int i = 0; i < 15; ++i) X.row(i) << 1.0, standard_normal(rng), standard_normal(rng);
    const auto r = stats::ols_fit(X, Eigen::VectorXd::Constant(15, 4.0));
    CHECK(std::abs(r.coefficients[0] - 4.0) < 1e-12);
    CHECK(std::abs(r.coefficients[1]) < 1e-12);
    CHECK(std::abs(r.coefficients[2]) < 1e-12);
  }

  TEST_CASE("OLS matches normal equations and covers the truth") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = 30, p = 4;
      Eigen::MatrixXd X(n, p);
      Eigen::VectorXd truth(p);
      truth << 1.0, -2.0, 0.5, 3.0;
      Eigen::VectorXd y(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (Eigen::Index c = 1; c < p; ++c) X(i, c) = standard_normal(rng);
        y[i] = X.row(i).dot(truth) + 0.3 * standard_normal(rng);
      }
      const auto r = stats::ols_fit(X, y);
      const auto o = oracle::normal_equations(X, y);
      CHECK(r.residual_df == 26);
      for (Eigen::Index c = 0; c < p; ++c) {
        const auto j = static_cast<std::size_t>(c);
        CHECK(std::abs(r.coefficients[j] - o.beta[c]) < 1e-8);
        CHECK(std::abs(r.standard_errors[j] - o.se[c]) < 1e-8);
        CHECK(std::abs(r.t_values[j] - o.t[c]) < 1e-8);
        CHECK(std::abs(r.coefficients[j] - truth[c]) < 5.0 * r.standard_errors[j]);
      }
      // Residuals are orthogonal to every design column.
      CHECK((X.transpose() * r.residuals).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("OLS rejects collinear designs by name") {
    Eigen::MatrixXd X(5, 3);
    for (int i = 0; i < 5; ++i) X.row(i) << 1.0, i, 2.0 * i;
    try {
      stats::ols_fit(X, Eigen::VectorXd::LinSpaced(5, 0, 1), {"(intercept)", "a", "b"});
      FAIL("expected RankDeficient");
    } catch (const RankDeficient& e) {
      const std::string what = e.what();
      CHECK((what.find("a") != std::string::npos || what.find("b") != std::string::npos));
    }
    CHECK_THROWS_AS(stats::ols_fit(Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(2)), InvalidArgument);
  }

  TEST_CASE("dummy coding uses k - 1 columns per factor") {
    const std::vector<double> z = {0.1, 0.2, 0.3, 0.4};
    const auto d = stats::dummy_code("z", z, {{"f", {"C", "A", "B", "A"}}, {"g", {"x", "x", "x", "x"}}});
    CHECK(d.matrix.cols() == 4);
    CHECK(d.names == std::vector<std::string>{"(intercept)", "z", "f=B", "f=C"});
    CHECK(d.warnings.size() == 1);
    CHECK(d.matrix(0, 3) == 1.0);
    CHECK(d.matrix(2, 2) == 1.0);
    CHECK(d.matrix(1, 2) + d.matrix(1, 3) == 0.0);
  }

  TEST_CASE("full experiment grid gives nine dummy columns") {
    const std::vector<std::string> datasets = {"A", "B", "C", "fmnist-sandal-boot", "fmnist-shirt-coat",
                                               "mnist-1v7", "mnist-6v8"};
    stats::Factor ds{"dataset", {}}, width{"width", {}}, depth{"depth", {}};
    std::vector<double> z;
    for (const auto& d : datasets)
      for (const char* w : {"narrow", "wide", "bottleneck"})
        for (const char* dp : {"shallow", "deep"}) {
          ds.values.push_back(d);
          width.values.push_back(w);
          depth.values.push_back(dp);
          z.push_back(static_cast<double>(z.size()));
        }
    const auto design = stats::dummy_code("z", z, {ds, width, depth});
    CHECK(design.matrix.cols() - 2 == 9);
  }

  TEST_CASE("slope estimate does not depend on the reference level") {
    Rng rng(5);
    std::vector<double> z;
    stats::Factor f{"f", {}}, g{"f", {}};
    Eigen::VectorXd y(40);
    const char* names[] = {"p", "q", "r"};
    const char* renamed[] = {"z", "a", "m"};
    for (int i = 0; i < 40; ++i) {
      z.push_back(standard_normal(rng));
      f.values.push_back(names[i % 3]);
      g.values.push_back(renamed[i % 3]);
      y[i] = 0.7 * z.back() + (i % 3) + 0.1 * standard_normal(rng);
    }
    const auto d1 = stats::dummy_code("z", z, {f});
    const auto d2 = stats::dummy_code("z", z, {g});
    const auto r1 = stats::ols_fit(d1.matrix, y, d1.names);
    const auto r2 = stats::ols_fit(d2.matrix, y, d2.names);
    CHECK(std::abs(r1.coefficients[1] - r2.coefficients[1]) < 1e-10);
    CHECK(std::abs(r1.standard_errors[1] - r2.standard_errors[1]) < 1e-10);
    CHECK((r1.fitted - r2.fitted).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("regression CSV layout") {
    Eigen::MatrixXd X(4, 2);
    X << 1, 0, 1, 1, 1, 2, 1, 4;
    const auto r = stats::ols_fit(X, Eigen::Vector4d(1, 2, 2, 5), {"(intercept)", "z"});
    std::ostringstream out;
    stats::write_regression_csv(out, r);
    const auto text = out.str();
    CHECK(text.rfind("predictor,coefficient,std_error,t_value,p_value\n(intercept),", 0) == 0);
    CHECK(text.find("\nz,") != std::string::npos);
  }
}
