#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "helpers.hpp"
#include "math/linalg.hpp"
#include "math/normal.hpp"
#include "math/rng.hpp"
#include "math/special.hpp"

using namespace gprc;

TEST_CASE("normal quantile matches reference values") {
  CHECK(math::norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(math::norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(math::norm_quantile(0.90) == doctest::Approx(1.281551565544601).epsilon(1e-12));
  CHECK(math::norm_quantile(0.95) == doctest::Approx(1.644853626951473).epsilon(1e-12));
  CHECK(math::norm_quantile(0.99) == doctest::Approx(2.326347874040841).epsilon(1e-12));
  CHECK(math::norm_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
  CHECK_THROWS_AS((void)math::norm_quantile(0.0), Error);
  CHECK_THROWS_AS((void)math::norm_quantile(1.0), Error);
}

TEST_CASE("normal quantile inverts the CDF") {
  for (const double p : {1e-8, 1e-4, 0.01, 0.3, 0.5, 0.7, 0.95, 0.9999, 1.0 - 1e-9}) {
    CHECK(math::norm_cdf(math::norm_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("incomplete beta against closed forms") {
  // I_x(1, 1) = x; I_x(2, 1) = x^2; symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
  CHECK(math::incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(math::incomplete_beta(2, 1, 0.7) == doctest::Approx(0.49).epsilon(1e-12));
  CHECK(math::incomplete_beta(3.5, 2.25, 0.4) ==
        doctest::Approx(1.0 - math::incomplete_beta(2.25, 3.5, 0.6)).epsilon(1e-12));
  // numeric oracle: integrate the beta density
  const double a = 2.5;
  const double b = 4.0;
  const double x = 0.35;
  const double norm = std::exp(-math::log_beta(a, b));
  const double direct = testutil::integrate(
      [&](double t) { return norm * std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); },
      1e-12, x);
  CHECK(math::incomplete_beta(a, b, x) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("incomplete gamma against closed forms") {
  // P(1, x) = 1 - exp(-x)
  CHECK(math::incomplete_gamma_p(1.0, 0.7) ==
        doctest::Approx(1.0 - std::exp(-0.7)).epsilon(1e-12));
  const double direct = testutil::integrate(
      [](double t) { return t * t * std::exp(-t) / 2.0; }, 0.0, 5.0);
  CHECK(math::incomplete_gamma_p(3.0, 5.0) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("student t cdf sanity") {
  CHECK(math::student_t_cdf(0.0, 7.0) == doctest::Approx(0.5));
  // t_1 is Cauchy: F(1) = 3/4
  CHECK(math::student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-12));
  // large df approaches the normal
  CHECK(math::student_t_cdf(1.644853626951473, 1e7) ==
        doctest::Approx(0.95).epsilon(1e-6));
  CHECK(math::student_t_cdf(-2.0, 11.0) ==
        doctest::Approx(1.0 - math::student_t_cdf(2.0, 11.0)).epsilon(1e-12));
}

TEST_CASE("rng streams are deterministic and uniform draws lie in (0,1)") {
  math::Rng a(42);
  math::Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  math::Rng c(43);
  CHECK(a.next_u64() != c.next_u64());
}

TEST_CASE("derive_seed separates substreams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 50; ++r) {
    seen.insert(math::derive_seed(9, {math::kStreamSimulation, r}));
    seen.insert(math::derive_seed(9, {math::kStreamBootstrap, r}));
  }
  CHECK(seen.size() == 100);
  CHECK(math::derive_seed(9, {1, 2}) == math::derive_seed(9, {1, 2}));
  CHECK(math::derive_seed(9, {1, 2}) != math::derive_seed(9, {2, 1}));
}

TEST_CASE("normal and gamma samplers match their moments") {
  math::Rng rng(2024);
  std::vector<double> z(50000);
  for (auto& v : z) v = rng.normal();
  CHECK(testutil::mean(z) == doctest::Approx(0.0).epsilon(0.02));
  CHECK(testutil::variance(z) == doctest::Approx(1.0).epsilon(0.02));

  std::vector<double> g(50000);
  for (auto& v : g) v = rng.gamma(3.0, 2.0);
  CHECK(testutil::mean(g) == doctest::Approx(1.5).epsilon(0.02));
  CHECK(testutil::variance(g) == doctest::Approx(0.75).epsilon(0.05));

  // shape < 1 branch
  std::vector<double> h(50000);
  for (auto& v : h) v = rng.gamma(0.5, 1.0);
  CHECK(testutil::mean(h) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("uniform_index is unbiased over small ranges") {
  math::Rng rng(7);
  std::vector<std::size_t> counts(3, 0);
  const std::size_t draws = 30000;
  for (std::size_t i = 0; i < draws; ++i) ++counts[rng.uniform_index(3)];
  for (const auto c : counts) {
    CHECK(static_cast<double>(c) / draws == doctest::Approx(1.0 / 3).epsilon(0.05));
  }
}

TEST_CASE("cholesky factors and solves") {
  math::Matrix a(3, 3);
  const double values[3][3] = {{4, 2, 0.6}, {2, 5, 1.2}, {0.6, 1.2, 3.0}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = values[i][j];
  }
  const auto l = math::cholesky_lower(a);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += l(i, k) * l(j, k);
      CHECK(s == doctest::Approx(a(i, j)).epsilon(1e-12));
    }
  }
  const std::vector<double> b{1.0, -2.0, 0.5};
  const auto x = math::cholesky_solve(l, b);
  const auto back = math::matvec(a, x);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i] == doctest::Approx(b[i]).epsilon(1e-10));
  }
}

TEST_CASE("cholesky reports the offending leading minor") {
  math::Matrix bad = math::Matrix::identity(3);
  bad(1, 1) = -1.0;  // second leading minor fails
  try {
    (void)math::cholesky_lower(bad);
    FAIL("expected a singular error");
  } catch (const Error& e) {
    CHECK(e.status() == Status::singular);
    CHECK(std::string(e.what()).find('2') != std::string::npos);
  }
}
