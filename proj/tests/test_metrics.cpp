#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "error.hpp"
#include "helpers.hpp"
#include "math/rng.hpp"
#include "metrics.hpp"
#include "simgen.hpp"

using namespace gprc;

TEST_CASE("empirical coverage") {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<ReplicationRecord> all_covered{{inf, 1.0, {}}, {inf, -3.0, {}}};
  CHECK(empirical_coverage(all_covered) == 1.0);

  std::vector<ReplicationRecord> half{{2.0, 1.0, {}}, {2.0, 3.0, {}}};
  CHECK(empirical_coverage(half) == 0.5);

  CHECK_THROWS_AS((void)empirical_coverage({}), Error);
}

TEST_CASE("empirical coverage of the true quantile is binomial around the level") {
  math::Rng rng(2468);
  const double q_star = simgen::pareto_quantile(2.0, 0.05);
  std::vector<ReplicationRecord> records(1000);
  for (auto& record : records) {
    record.q_hat = q_star;
    record.y_next = simgen::pareto_from_uniform(2.0, rng.uniform());
  }
  CHECK(std::fabs(empirical_coverage(records) - 0.95) <= 0.02);
}

TEST_CASE("one-sided interval score") {
  std::vector<ReplicationRecord> no_exceed{{2.0, 1.0, {}}};
  CHECK(interval_score(no_exceed, 0.1) == doctest::Approx(2.0));

  std::vector<ReplicationRecord> exceed{{2.0, 3.0, {}}};
  CHECK(interval_score(exceed, 0.1) == doctest::Approx(12.0));

  CHECK_THROWS_AS((void)interval_score({}, 0.1), Error);
  CHECK_THROWS_AS((void)interval_score(no_exceed, 0.0), Error);
}

TEST_CASE("interval score is translation equivariant") {
  math::Rng rng(13);
  std::vector<ReplicationRecord> records(400);
  for (auto& record : records) {
    record.q_hat = rng.normal(1.5, 0.3);
    record.y_next = rng.normal();
    record.q_star = 1.6449;
  }
  const double alpha = 0.05;
  const double base_s = interval_score(records, alpha);
  const double base_rel = relative_score(records, alpha);
  std::vector<ReplicationRecord> shifted = records;
  const double c = 11.25;
  for (auto& record : shifted) {
    record.q_hat += c;
    record.y_next += c;
    *record.q_star += c;
  }
  CHECK(interval_score(shifted, alpha) == doctest::Approx(base_s + c).epsilon(1e-12));
  // the ratio changes, but both numerator and denominator shift by c
  const double expected =
      (base_s + c) / (base_rel == 0.0 ? 1.0 : (base_s / base_rel + c));
  CHECK(relative_score(shifted, alpha) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("the true quantile minimizes the expected interval score") {
  math::Rng rng(97);
  const double alpha = 0.1;
  std::vector<double> sample(20000);
  for (auto& v : sample) v = rng.normal();
  const double q_star = 1.2816;  // upper-0.1 of the standard normal
  // brute-force sweep of constant limits around the true quantile
  double best_score = std::numeric_limits<double>::infinity();
  double best_q = 0.0;
  const double step = 0.05;
  for (double q = q_star - 1.0; q <= q_star + 1.0; q += step) {
    std::vector<ReplicationRecord> records(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
      records[i] = {q, sample[i], {}};
    }
    const double s = interval_score(records, alpha);
    if (s < best_score) {
      best_score = s;
      best_q = q;
    }
  }
  CHECK(std::fabs(best_q - q_star) <= step + 1e-12);
}

TEST_CASE("relative score") {
  std::vector<ReplicationRecord> ideal{{1.5, 1.0, 1.5}, {1.5, 0.0, 1.5}};
  CHECK(relative_score(ideal, 0.1) == doctest::Approx(1.0));

  // wider limits score worse when nothing is exceeded either way
  std::vector<ReplicationRecord> wide{{4.5, 1.0, 1.5}, {4.5, 0.0, 1.5}};
  CHECK(relative_score(wide, 0.1) > 1.0);

  std::vector<ReplicationRecord> missing{{1.0, 0.5, {}}};
  CHECK_THROWS_AS((void)relative_score(missing, 0.1), Error);
}
