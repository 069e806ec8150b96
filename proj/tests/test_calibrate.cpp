#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <vector>

#include "calibrate.hpp"
#include "error.hpp"
#include "helpers.hpp"
#include "math/rng.hpp"
#include "models/iid_models.hpp"
#include "models/regression.hpp"
#include "simgen.hpp"

using namespace gprc;

namespace {

// iid stub returning a constant prediction limit regardless of the data.
class ConstQuantileModel final : public IidAdapter {
 public:
  explicit ConstQuantileModel(double q) : q_(q) {}
  struct Stub final : State {};
  std::unique_ptr<State> fit(std::span<const double>) const override {
    return std::make_unique<Stub>();
  }
  void quantiles(std::span<const State* const> states, double, double,
                 std::span<double> out) const override {
    for (std::size_t i = 0; i < states.size(); ++i) out[i] = q_;
  }

 private:
  double q_;
};

// counts fit() calls to pin the fit-once-reuse-per-eta contract
class CountingModel final : public IidAdapter {
 public:
  CountingModel(const IidAdapter& inner, std::atomic<std::size_t>& fits)
      : inner_(&inner), fits_(&fits) {}
  std::unique_ptr<State> fit(std::span<const double> data) const override {
    fits_->fetch_add(1);
    return inner_->fit(data);
  }
  void quantiles(std::span<const State* const> states, double eta, double alpha,
                 std::span<double> out) const override {
    inner_->quantiles(states, eta, alpha, out);
  }

 private:
  const IidAdapter* inner_;
  std::atomic<std::size_t>* fits_;
};

// regression stub: a perfectly known mean with spread 1/sqrt(eta)
class PerfectFitModel final : public RegressionAdapter {
 public:
  struct Stub final : State {
    std::vector<double> fitted;
  };
  std::unique_ptr<State> fit(const RegressionData&,
                             const math::Matrix& eval_x) const override {
    auto state = std::make_unique<Stub>();
    state->fitted.resize(eval_x.rows());
    for (std::size_t i = 0; i < eval_x.rows(); ++i) {
      state->fitted[i] = 2.0 * eval_x(i, 0);
    }
    return state;
  }
  void eval_quantiles(std::span<const State* const> states, double eta, double,
                      math::Matrix& out) const override {
    for (std::size_t b = 0; b < states.size(); ++b) {
      const auto& stub = dynamic_cast<const Stub&>(*states[b]);
      for (std::size_t i = 0; i < stub.fitted.size(); ++i) {
        out(b, i) = stub.fitted[i] + 1.0 / std::sqrt(eta);
      }
    }
  }
  double quantile_at(const State& state, std::span<const double> x_new, double eta,
                     double) const override {
    (void)state;
    return 2.0 * x_new[0] + 1.0 / std::sqrt(eta);
  }
};

class ConstSpatialModel final : public SpatialAdapter {
 public:
  explicit ConstSpatialModel(double q) : q_(q) {}
  struct Stub final : State {};
  std::unique_ptr<State> fit(std::span<const double>) const override {
    return std::make_unique<Stub>();
  }
  void quantiles(std::span<const State* const> states, double, double,
                 std::span<double> out) const override {
    for (std::size_t i = 0; i < states.size(); ++i) out[i] = q_;
  }

 private:
  double q_;
};

class ConstTsModel final : public TimeSeriesAdapter {
 public:
  explicit ConstTsModel(double q) : q_(q) {}
  struct Stub final : State {};
  std::unique_ptr<State> fit(std::span<const double>) const override {
    return std::make_unique<Stub>();
  }
  void quantiles_at(std::span<const State* const> states, std::span<const double> y_prev,
                    double, double, math::Matrix& out) const override {
    for (std::size_t b = 0; b < states.size(); ++b) {
      for (std::size_t i = 0; i < y_prev.size(); ++i) out(b, i) = q_;
    }
  }

 private:
  double q_;
};

}  // namespace

TEST_CASE("iid coverage counts indicators") {
  const std::vector<double> original{1.0, 2.0, 3.0, 4.0};
  const std::vector<std::vector<double>> boot{{1.0, 1.0, 1.0, 1.0}};
  // limit above the data covers everything
  CHECK(coverage_iid(1.0, boot, original, 0.1, ConstQuantileModel(100.0)) == 1.0);
  // limit between the middle values covers half
  const std::vector<double> two{1.0, 2.0};
  CHECK(coverage_iid(1.0, boot, two, 0.1, ConstQuantileModel(1.5)) == 0.5);
}

TEST_CASE("iid coverage near nominal for a correctly specified normal") {
  math::Rng rng(2718);
  std::vector<double> data(400);
  for (auto& v : data) v = rng.normal();
  BootstrapPlan plan{BootstrapKind::iid, 200, std::nullopt, 42};
  const auto boot = iid_bootstrap(data, plan);
  const models::NormalKnownVarModel model(1.0);
  const double c = coverage_iid(1.0, boot, data, 0.10, model);
  CHECK(c >= 0.87);
  CHECK(c <= 0.93);
}

TEST_CASE("intercept-only regression coverage equals iid coverage") {
  math::Rng rng(1001);
  const std::size_t n = 60;
  std::vector<double> y(n);
  for (auto& v : y) v = rng.normal(0.4, 1.3);
  RegressionData data;
  data.x = math::Matrix(n, 1, 1.0);
  data.y = y;

  const double k = 100.0;
  BootstrapPlan iid_plan{BootstrapKind::iid, 150, std::nullopt, 31};
  BootstrapPlan paired_plan{BootstrapKind::paired, 150, std::nullopt, 31};
  const auto iid_boot = iid_bootstrap(y, iid_plan);
  const auto paired_boot = paired_bootstrap(data, paired_plan);

  const models::NormalNigModel iid_model(0.0, k, 2.0, 1.0);
  const models::ConjugateRegressionModel reg_model(
      models::vague_linear_prior(1, 1.0 / k, 2.0, 1.0));

  for (const double eta : {0.5, 1.0, 2.0}) {
    for (const double alpha : {0.1, 0.01}) {
      const double ci = coverage_iid(eta, iid_boot, y, alpha, iid_model);
      const double cr = coverage_regression(eta, paired_boot, data, alpha, reg_model);
      CHECK(cr == doctest::Approx(ci).epsilon(1e-12));
    }
  }
}

TEST_CASE("regression coverage tends to the nonpositive-residual fraction") {
  // five points, mean 2x known exactly, residuals {0.5, -0.3, 0.2, -0.8, 0}
  RegressionData data;
  data.x = math::Matrix(5, 1);
  const std::vector<double> residuals{0.5, -0.3, 0.2, -0.8, 0.0};
  data.y.resize(5);
  for (std::size_t i = 0; i < 5; ++i) {
    data.x(i, 0) = static_cast<double>(i + 1);
    data.y[i] = 2.0 * data.x(i, 0) + residuals[i];
  }
  const std::vector<RegressionData> boot{data};
  const double c = coverage_regression(1e12, boot, data, 0.1, PerfectFitModel());
  CHECK(c == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("time series coverage over consecutive pairs") {
  const std::vector<double> constant{2.0, 2.0, 2.0, 2.0};
  const std::vector<std::vector<double>> boot{constant};
  CHECK(coverage_timeseries(1.0, boot, constant, 0.1, ConstTsModel(5.0)) == 1.0);

  // n = 3: transitions 1->5 and 5->2; limit 3 covers exactly one of them
  const std::vector<double> three{1.0, 5.0, 2.0};
  const std::vector<std::vector<double>> boot3{three};
  CHECK(coverage_timeseries(1.0, boot3, three, 0.1, ConstTsModel(3.0)) == 0.5);

  const std::vector<double> single{1.0};
  CHECK_THROWS_AS(
      (void)coverage_timeseries(1.0, boot3, single, 0.1, ConstTsModel(3.0)), Error);
}

TEST_CASE("spatial coverage is one indicator per replicate") {
  const std::vector<std::vector<double>> fields{{0.0, 0.0, 1.0}, {0.0, 0.0, 9.0}};
  CHECK(coverage_spatial(1.0, fields, 0.1, ConstSpatialModel(1e30)) == 1.0);
  CHECK(coverage_spatial(1.0, fields, 0.1, ConstSpatialModel(5.0)) == 0.5);

  const std::vector<std::vector<double>> missing{{1.0}};
  CHECK_THROWS_AS(
      (void)coverage_spatial(1.0, missing, 0.1, ConstSpatialModel(5.0)), Error);
}

TEST_CASE("robbins-monro step") {
  // fixed point: coverage at target leaves eta unchanged
  CHECK(robbins_monro_step(0.8, 0.95, 0.05, 1.0) == doctest::Approx(0.8));
  CHECK(robbins_monro_step(0.5, 0.90, 0.05, 1.0) == doctest::Approx(0.45));
  // floor keeps eta positive
  CHECK(robbins_monro_step(0.01, 0.0, 0.05, 1.0) == doctest::Approx(1e-4));
}

TEST_CASE("step schedule is square-summable but not summable") {
  const StepSchedule schedule;
  CHECK(schedule.step(0) == doctest::Approx(1.0));
  CHECK(schedule.step(99) == doctest::Approx(std::pow(100.0, -0.51)));
  CHECK(schedule.step(10) < schedule.step(9));
}

TEST_CASE("calibrate_root solves a noiseless synthetic coverage function") {
  // decreasing linear coverage with root at eta = 1 for target 0.9
  const auto coverage = [](double eta) { return 1.3 - 0.4 * eta; };
  CalibrationControl control;
  control.max_iterations = 500;
  const auto result = calibrate_root(coverage, 0.10, 1e-9, control);
  // with a tolerance this tight the loop runs its budget; the iterate settles
  CHECK(std::fabs(result.eta_hat - 1.0) <= 1e-3);
  CHECK(result.iterations == result.trace.size());
}

TEST_CASE("calibrate_root stops at the fixed point and respects max_iterations") {
  const auto at_target = [](double) { return 0.95; };
  const auto result = calibrate_root(at_target, 0.05, default_tolerance(0.05));
  CHECK(result.converged);
  CHECK(result.iterations == 1);
  CHECK(result.eta_hat == doctest::Approx(0.5));  // the starting value
  CHECK(result.tolerance_used == doctest::Approx(0.0005));

  const auto hopeless = [](double) { return 1.0; };
  CalibrationControl control;
  control.max_iterations = 25;
  const auto capped = calibrate_root(hopeless, 0.05, 1e-6, control);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 25);
  CHECK(capped.trace.size() == 25);
  CHECK(capped.eta_hat > 0.0);
}

TEST_CASE("tolerances") {
  CHECK(default_tolerance(0.05) == doctest::Approx(0.0005));
  CHECK(spatial_tolerance(0.05, 500) == doctest::Approx(0.002));   // 1/B dominates
  CHECK(spatial_tolerance(0.5, 500) == doctest::Approx(0.005));    // 0.01*alpha dominates
}

TEST_CASE("posterior summaries are fit once and reused across eta updates") {
  math::Rng rng(55);
  std::vector<double> data(100);
  for (auto& v : data) v = rng.gamma(3.0, 2.0);
  const models::GammaIidModel gamma_model;
  std::atomic<std::size_t> fits{0};
  const CountingModel counting(gamma_model, fits);
  BootstrapPlan plan{BootstrapKind::iid, 64, std::nullopt, 8};
  const auto result = gprc_calibrate(data, 0.1, plan, counting);
  CHECK(result.iterations >= 2);  // the loop actually moved
  CHECK(fits.load() == 64);       // one fit per replicate, none per iteration
}

TEST_CASE("gprc_calibrate validates the plan kind") {
  const std::vector<double> data{1.0, 2.0, 3.0};
  BootstrapPlan plan{BootstrapKind::block, 8, 2, 3};
  CHECK_THROWS_AS((void)gprc_calibrate(data, 0.1, plan, models::GammaIidModel()), Error);
}

TEST_CASE("gprc_calibrate tunes a well specified gamma model near one") {
  math::Rng rng(20240201);
  std::vector<double> data(400);
  for (auto& v : data) v = rng.gamma(3.0, 2.0);
  BootstrapPlan plan{BootstrapKind::iid, 200, std::nullopt, 99};
  const auto result = gprc_calibrate(data, 0.05, plan, models::GammaIidModel());
  CHECK(result.converged);
  CHECK(result.eta_hat > 0.5);
  CHECK(result.eta_hat < 2.0);
  // convergence means the last coverage sits within tolerance of the target
  CHECK(std::fabs(result.trace.back().coverage - 0.95) <= result.tolerance_used);
}
