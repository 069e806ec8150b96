#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"
#include "helpers.hpp"
#include "math/normal.hpp"
#include "math/special.hpp"
#include "simgen.hpp"

using namespace gprc;
using namespace gprc::simgen;

TEST_CASE("pareto transform and quantile") {
  CHECK(pareto_from_uniform(2.0, 0.75) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pareto_quantile(2.0, 0.05) == doctest::Approx(3.4721).epsilon(1e-4));
  // F(quantile) = 1 - alpha to high accuracy
  for (const double alpha : {0.1, 0.05, 0.01}) {
    const double q = pareto_quantile(2.0, alpha);
    CHECK(1.0 - std::pow(1.0 + q, -2.0) == doctest::Approx(1.0 - alpha).epsilon(1e-10));
  }
  CHECK_THROWS_AS((void)pareto_quantile(-1.0, 0.05), Error);
}

TEST_CASE("pareto sampler passes a Kolmogorov check") {
  math::Rng rng(1);
  const auto sample = pareto_sample(2.0, 100000, rng);
  const double d = testutil::ks_statistic(
      sample, [](double y) { return 1.0 - std::pow(1.0 + y, -2.0); });
  CHECK(d <= 0.01);
}

TEST_CASE("gev transform, quantile and support") {
  CHECK(gev_from_uniform(0.5, std::exp(-1.0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(gev_from_uniform(0.5, 0.95) == doctest::Approx(8.8306).epsilon(1e-4));
  for (const double alpha : {0.1, 0.01}) {
    const double q = gev_quantile(0.7, alpha);
    const double cdf = std::exp(-std::pow(1.0 + 0.7 * (q - 2.0), -1.0 / 0.7));
    CHECK(cdf == doctest::Approx(1.0 - alpha).epsilon(1e-10));
  }

  math::Rng rng(2);
  const auto sample = gev_sample(0.7, 100000, rng);
  const double support = 2.0 - 1.0 / 0.7;
  CHECK(*std::min_element(sample.begin(), sample.end()) >= support);

  const double d = testutil::ks_statistic(sample, [](double y) {
    return std::exp(-std::pow(1.0 + 0.7 * (y - 2.0), -1.0 / 0.7));
  });
  CHECK(d <= 0.01);
}

TEST_CASE("gamma quantile inverts the cdf") {
  const double q = gamma_quantile(3.0, 2.0, 0.05);
  CHECK(math::incomplete_gamma_p(3.0, 2.0 * q) == doctest::Approx(0.95).epsilon(1e-10));
}

TEST_CASE("laplace quantile tail form") {
  CHECK(laplace_quantile(0.0, 1.0, 0.01) == doctest::Approx(3.9120).epsilon(1e-4));
  CHECK(laplace_quantile(0.0, 1.0, 0.01) == doctest::Approx(-std::log(0.02)).epsilon(1e-12));
  CHECK(laplace_quantile(0.0, 1.0, 0.75) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(laplace_quantile(2.0, 3.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("lognormal quantile") {
  CHECK(lognormal_quantile(1.0, 1.0, 0.05) ==
        doctest::Approx(std::exp(1.0 + math::norm_upper_quantile(0.05))).epsilon(1e-12));
}

TEST_CASE("time series scenarios") {
  // conditional quantile at y_prev = 0 under the sin model is the Laplace quantile
  CHECK(timeseries_conditional_quantile(TsScenario::sin_laplace, 0.0, 0.05) ==
        doctest::Approx(laplace_quantile(0.0, 1.0, 0.05)).epsilon(1e-12));
  // heteroscedastic scale enters multiplicatively
  const double y_prev = 2.0;
  const double scale = std::sqrt(0.5 + 0.25 * y_prev * y_prev);
  CHECK(timeseries_conditional_quantile(TsScenario::sin_heteroscedastic, y_prev, 0.01) ==
        doctest::Approx(std::sin(y_prev) + scale * laplace_quantile(0.0, 1.0, 0.01))
            .epsilon(1e-12));

  math::Rng rng(3);
  const auto series = timeseries_sample(TsScenario::ar1_laplace, 10000, rng);
  // lag-1 autocorrelation of the AR(1) path is near 0.9
  const double m = testutil::mean(series);
  double c0 = 0.0;
  double c1 = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    c0 += (series[i] - m) * (series[i] - m);
    if (i + 1 < series.size()) c1 += (series[i] - m) * (series[i + 1] - m);
  }
  CHECK(std::fabs(c1 / c0 - 0.9) <= 0.03);
}

TEST_CASE("regression scenario design and errors") {
  math::Rng rng(4);
  // centered chi-square errors have mean zero
  std::vector<double> errors(100000);
  for (auto& v : errors) v = rng.chi_squared(2.0) - 2.0;
  CHECK(std::fabs(testutil::mean(errors)) <= 0.03);

  const auto sample = regression_sample(RegressionError::chisq2_centered, 10000, rng);
  std::vector<double> col1(10000);
  std::vector<double> col2(10000);
  for (std::size_t i = 0; i < 10000; ++i) {
    col1[i] = sample.data.x(i, 0);
    col2[i] = sample.data.x(i, 1);
  }
  CHECK(testutil::variance(col1) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(testutil::variance(col2) == doctest::Approx(1.0).epsilon(0.02));
  double cross = 0.0;
  for (std::size_t i = 0; i < 10000; ++i) cross += col1[i] * col2[i];
  CHECK(cross / 10000.0 == doctest::Approx(0.5).epsilon(0.04));

  // error quantiles: chi-square(2) is Exp(1/2)
  CHECK(regression_error_quantile(RegressionError::chisq2_centered, 0.05) ==
        doctest::Approx(-2.0 * std::log(0.05) - 2.0).epsilon(1e-12));
  CHECK(regression_error_quantile(RegressionError::gev05_centered, 0.05) ==
        doctest::Approx(gev_quantile(0.5, 0.05) - gev_mean(0.5)).epsilon(1e-12));
}

TEST_CASE("gev mean used for centering") {
  // E = 2 + (Gamma(1 - xi) - 1)/xi at xi = 0.5: 2 + 2(sqrt(pi) - 1)
  CHECK(gev_mean(0.5) ==
        doctest::Approx(2.0 + 2.0 * (std::sqrt(3.14159265358979323846) - 1.0))
            .epsilon(1e-12));
  math::Rng rng(11);
  std::vector<double> draws(200000);
  for (auto& v : draws) v = gev_from_uniform(0.5, rng.uniform()) - gev_mean(0.5);
  CHECK(std::fabs(testutil::mean(draws)) <= 0.05);
}

TEST_CASE("disc sites: radii bounded and squared radii uniform") {
  math::Rng rng(5);
  const std::size_t n = 2000;
  const auto sites = disc_sites(n, rng);
  CHECK(sites.back().x == 0.0);
  CHECK(sites.back().y == 0.0);
  std::vector<double> r2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rr = sites[i].x * sites[i].x + sites[i].y * sites[i].y;
    CHECK(rr <= 400.0);
    r2[i] = rr;
  }
  const double d = testutil::ks_statistic(r2, [](double v) { return v / 400.0; });
  CHECK(d <= 1.628 / std::sqrt(static_cast<double>(n)));  // KS critical value at 1%
}

TEST_CASE("gaussian spatial scenario marginal variance") {
  std::vector<double> at_site(2000);
  for (std::size_t r = 0; r < at_site.size(); ++r) {
    math::Rng rng(math::derive_seed(606, {r}));
    const auto sample = spatial_sample(SpScenario::gaussian, 4, rng);
    at_site[r] = sample.field[0];
  }
  CHECK(testutil::variance(at_site) == doctest::Approx(1.0).epsilon(0.07));
}

TEST_CASE("gev process fields stay positive before the log") {
  // the log is taken inside spatial_sample; finite fields mean W > 0 held
  std::size_t values = 0;
  std::size_t redraws = 0;
  std::size_t r = 0;
  while (values < 100000) {
    math::Rng rng(math::derive_seed(707, {r++}));
    const auto sample = spatial_sample(SpScenario::gev_process, 48, rng);
    redraws += sample.redraws;
    for (const double v : sample.field) {
      CHECK(std::isfinite(v));
    }
    values += sample.field.size();
  }
  CHECK(redraws == 0);  // mu_1 = 10 dominates; no replicate needed a redraw
}

TEST_CASE("lognormal field scenario produces finite logs and tracks redraws") {
  math::Rng rng(808);
  const auto sample = spatial_sample(SpScenario::lognormal_field, 60, rng);
  CHECK(sample.field.size() == 61);
  for (const double v : sample.field) CHECK(std::isfinite(v));
}

TEST_CASE("fixed seeds reproduce samples exactly") {
  math::Rng a(9001);
  math::Rng b(9001);
  CHECK(pareto_sample(2.0, 32, a) == pareto_sample(2.0, 32, b));
  math::Rng c(77);
  math::Rng d(77);
  const auto s1 = spatial_sample(SpScenario::gaussian, 12, c);
  const auto s2 = spatial_sample(SpScenario::gaussian, 12, d);
  CHECK(s1.field == s2.field);
  for (std::size_t i = 0; i < s1.sites.size(); ++i) {
    CHECK(s1.sites[i].x == s2.sites[i].x);
    CHECK(s1.sites[i].y == s2.sites[i].y);
  }
}
