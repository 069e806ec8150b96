#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "error.hpp"
#include "helpers.hpp"
#include "resampling.hpp"

using namespace gprc;

TEST_CASE("iid bootstrap basics") {
  BootstrapPlan plan{BootstrapKind::iid, 5, std::nullopt, 123};
  const std::vector<double> one{3.25};
  for (const auto& rep : iid_bootstrap(one, plan)) {
    CHECK(rep == std::vector<double>{3.25});
  }
  CHECK_THROWS_AS((void)iid_bootstrap(std::vector<double>{}, plan), Error);
}

TEST_CASE("iid bootstrap draws are multinomial") {
  BootstrapPlan plan{BootstrapKind::iid, 10000, std::nullopt, 11};
  const std::vector<double> data{1.0, 2.0, 3.0};
  std::size_t ones = 0;
  std::size_t total = 0;
  for (const auto& rep : iid_bootstrap(data, plan)) {
    CHECK(rep.size() == 3);
    for (const double v : rep) {
      total += 1;
      if (v == 1.0) ++ones;
    }
  }
  CHECK(std::fabs(static_cast<double>(ones) / total - 1.0 / 3.0) <= 0.01);
}

TEST_CASE("fixed seeds reproduce replicates exactly") {
  BootstrapPlan plan{BootstrapKind::iid, 50, std::nullopt, 777};
  const std::vector<double> data{0.3, 1.7, -2.2, 9.1, 4.4};
  const auto first = iid_bootstrap(data, plan);
  const auto second = iid_bootstrap(data, plan);
  CHECK(first == second);
  // replicate b is reproducible in isolation
  math::Rng rng = replicate_rng(plan, 7);
  std::vector<double> manual(data.size());
  for (auto& v : manual) v = data[rng.uniform_index(data.size())];
  CHECK(manual == first[7]);
}

TEST_CASE("paired bootstrap keeps pairs intact") {
  RegressionData data;
  data.x = math::Matrix(4, 2);
  data.y = {10.0, 20.0, 30.0, 40.0};
  for (std::size_t i = 0; i < 4; ++i) {
    data.x(i, 0) = static_cast<double>(i);
    data.x(i, 1) = 100.0 + static_cast<double>(i);
  }
  BootstrapPlan plan{BootstrapKind::paired, 200, std::nullopt, 5};
  for (const auto& rep : paired_bootstrap(data, plan)) {
    CHECK(rep.n() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      // x row determines the original index; the pair must match verbatim
      const auto idx = static_cast<std::size_t>(rep.x(i, 0));
      CHECK(rep.x(i, 1) == 100.0 + static_cast<double>(idx));
      CHECK(rep.y[i] == 10.0 * static_cast<double>(idx + 1));
    }
  }

  RegressionData single;
  single.x = math::Matrix(1, 1);
  single.x(0, 0) = 3.0;
  single.y = {7.0};
  for (const auto& rep : paired_bootstrap(single, plan)) {
    CHECK(rep.y == std::vector<double>{7.0});
    CHECK(rep.x(0, 0) == 3.0);
  }
}

TEST_CASE("paired bootstrap preserves the x marginal in frequency") {
  RegressionData data;
  data.x = math::Matrix(4, 1);
  data.y = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < 4; ++i) data.x(i, 0) = static_cast<double>(i);
  BootstrapPlan plan{BootstrapKind::paired, 10000, std::nullopt, 21};
  std::vector<std::size_t> counts(4, 0);
  std::size_t total = 0;
  for (const auto& rep : paired_bootstrap(data, plan)) {
    for (std::size_t i = 0; i < rep.n(); ++i) {
      ++counts[static_cast<std::size_t>(rep.x(i, 0))];
      ++total;
    }
  }
  for (const auto c : counts) {
    CHECK(std::fabs(static_cast<double>(c) / total - 0.25) <= 0.01);
  }
}

TEST_CASE("residual bootstrap") {
  const std::vector<double> fitted{1.0, 2.0, 3.0};
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  BootstrapPlan plan{BootstrapKind::residual, 25, std::nullopt, 9};
  for (const auto& rep : residual_bootstrap(fitted, zeros, plan)) {
    CHECK(rep == fitted);
  }

  const std::vector<double> fitted2{5.0, -5.0};
  const std::vector<double> resid2{-1.0, 1.0};
  for (const auto& rep : residual_bootstrap(fitted2, resid2, plan)) {
    for (std::size_t i = 0; i < 2; ++i) {
      const bool ok = rep[i] == fitted2[i] - 1.0 || rep[i] == fitted2[i] + 1.0;
      CHECK(ok);
    }
  }

  const std::vector<double> short_resid{0.0};
  CHECK_THROWS_AS((void)residual_bootstrap(fitted, short_resid, plan), Error);
}

TEST_CASE("residual bootstrap reproduces the residual mean") {
  const std::vector<double> fitted(6, 2.0);
  const std::vector<double> resid{-2.0, -1.0, 0.0, 1.0, 2.0, 3.0};
  BootstrapPlan plan{BootstrapKind::residual, 10000, std::nullopt, 77};
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& rep : residual_bootstrap(fitted, resid, plan)) {
    for (const double v : rep) {
      sum += v - 2.0;
      ++count;
    }
  }
  const double resid_mean = 0.5;
  const double resid_sd = std::sqrt(testutil::variance(resid));
  const double se = resid_sd / std::sqrt(static_cast<double>(count));
  CHECK(std::fabs(sum / count - resid_mean) <= 3.0 * se);
}

TEST_CASE("block bootstrap structure") {
  std::vector<double> series(9);
  std::iota(series.begin(), series.end(), 1.0);

  SUBCASE("full-length block reproduces the series") {
    BootstrapPlan plan{BootstrapKind::block, 10, series.size(), 4};
    for (const auto& rep : block_bootstrap(series, plan)) CHECK(rep == series);
  }

  SUBCASE("length and within-block contiguity") {
    BootstrapPlan plan{BootstrapKind::block, 500, 3, 4};
    for (const auto& rep : block_bootstrap(series, plan)) {
      CHECK(rep.size() == 9);
      // values never appear that are absent from the input
      for (const double v : rep) {
        CHECK(v >= 1.0);
        CHECK(v <= 9.0);
      }
      // each of the 3 blocks is a contiguous run starting in {1..7}
      for (std::size_t block = 0; block < 3; ++block) {
        const double start = rep[3 * block];
        CHECK(start >= 1.0);
        CHECK(start <= 7.0);
        CHECK(rep[3 * block + 1] == start + 1.0);
        CHECK(rep[3 * block + 2] == start + 2.0);
      }
    }
  }

  SUBCASE("truncation to n with non-divisible block length") {
    BootstrapPlan plan{BootstrapKind::block, 50, 4, 4};
    for (const auto& rep : block_bootstrap(series, plan)) {
      CHECK(rep.size() == 9);  // ceil(9/4) = 3 blocks, truncated from 12
    }
  }

  SUBCASE("invalid block length") {
    BootstrapPlan plan{BootstrapKind::block, 5, 10, 4};
    CHECK_THROWS_AS((void)block_bootstrap(series, plan), Error);
  }
}

TEST_CASE("default block length grows like the cube root") {
  CHECK(default_block_length(1) == 1);
  CHECK(default_block_length(8) == 2);
  CHECK(default_block_length(200) == 6);   // 200^(1/3) = 5.85
  CHECK(default_block_length(400) == 7);   // 400^(1/3) = 7.37
}

namespace {

std::vector<Point> test_sites() {
  return {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.5}, {2.0, 2.0}, {-1.0, 0.5}, {0.5, -1.2}};
}

}  // namespace

TEST_CASE("spatial whitening and recoloring round-trip") {
  const auto sites = test_sites();
  const std::size_t n = sites.size() - 1;
  const SpatialTheta theta{0.7, 1.3, 2.0, 0.1};
  const std::vector<double> y{1.2, -0.4, 0.9, 2.2, 0.3};

  const auto cov_n = exp_covariance_matrix(theta, std::span(sites.data(), n));
  const auto chol_n = math::cholesky_lower(cov_n);
  const auto residuals = spatial_whiten(chol_n, theta.mu, y);

  const auto cov_np1 = exp_covariance_matrix(theta, sites);
  const auto chol_np1 = math::cholesky_lower(cov_np1);

  // identity resample: original residual order, padded with any index
  std::vector<std::size_t> identity(n + 1);
  std::iota(identity.begin(), identity.end(), 0);
  identity[n] = 0;
  const auto recolored = spatial_recolor(chol_np1, theta.mu, residuals, identity);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(recolored[i] == doctest::Approx(y[i]).epsilon(1e-10));
  }
}

TEST_CASE("scalar whitening divides by the marginal sd") {
  const std::vector<Point> sites{{0.0, 0.0}, {5.0, 5.0}};
  const SpatialTheta theta{2.0, 4.0, 1.0, 0.0};
  const std::vector<double> y{3.0};
  const auto cov = exp_covariance_matrix(theta, std::span(sites.data(), 1));
  const auto chol = math::cholesky_lower(cov);
  const auto eps = spatial_whiten(chol, theta.mu, y);
  CHECK(eps[0] == doctest::Approx((3.0 - 2.0) / 2.0));
}

TEST_CASE("spatial bootstrap output shape and residual variance") {
  const auto sites = test_sites();
  const std::size_t n = sites.size() - 1;
  const SpatialTheta theta{0.0, 1.0, 2.5, 0.0};
  const std::vector<double> y{0.6, -1.1, 0.8, 1.9, -0.2};

  BootstrapPlan plan{BootstrapKind::spatial, 2000, std::nullopt, 12};
  const auto fields = spatial_semiparametric_bootstrap(sites, y, theta, plan);
  CHECK(fields.size() == 2000);
  for (const auto& field : fields) CHECK(field.size() == n + 1);

  // pooled resampled residuals match the whitened residual variance
  const auto chol_n =
      math::cholesky_lower(exp_covariance_matrix(theta, std::span(sites.data(), n)));
  const auto residuals = spatial_whiten(chol_n, theta.mu, y);
  const double target = testutil::variance(residuals);

  const auto chol_np1 = math::cholesky_lower(exp_covariance_matrix(theta, sites));
  std::vector<double> pooled;
  pooled.reserve(fields.size() * (n + 1));
  for (std::size_t b = 0; b < fields.size(); ++b) {
    // invert the recoloring to recover the resampled residuals
    std::vector<double> centered = fields[b];
    for (auto& v : centered) v -= theta.mu;
    const auto eps = math::forward_solve(chol_np1, centered);
    pooled.insert(pooled.end(), eps.begin(), eps.end());
  }
  CHECK(testutil::variance(pooled) == doctest::Approx(target).epsilon(0.05));
}

TEST_CASE("spatial bootstrap rejects non positive definite structure") {
  // duplicate sites with no nugget make the covariance singular
  const std::vector<Point> sites{{0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}};
  const SpatialTheta theta{0.0, 1.0, 1.0, 0.0};
  const std::vector<double> y{1.0, 1.0};
  BootstrapPlan plan{BootstrapKind::spatial, 3, std::nullopt, 1};
  try {
    (void)spatial_semiparametric_bootstrap(sites, y, theta, plan);
    FAIL("expected a singular error");
  } catch (const Error& e) {
    CHECK(e.status() == Status::singular);
    CHECK(std::string(e.what()).find("minor") != std::string::npos);
  }
}
