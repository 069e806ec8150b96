#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "covariance.hpp"
#include "data_types.hpp"
#include "resampling.hpp"

namespace gprc {

// ----------------------------------------------------------- model adapters
//
// Each adapter follows the contract fit(data) -> state,
// quantile(state, eta, alpha, conditioning point) -> real.  States are
// immutable posterior summaries; quantile evaluation is pure, so fits are
// computed once per bootstrap replicate and reused across all eta updates.

class IidAdapter {
 public:
  class State {
   public:
    virtual ~State() = default;
  };
  virtual ~IidAdapter() = default;
  virtual std::unique_ptr<State> fit(std::span<const double> data) const = 0;
  // Batch upper-alpha quantiles at a common (eta, alpha); implementations
  // share per-call work (standardized quantiles) across states.
  virtual void quantiles(std::span<const State* const> states, double eta,
                         double alpha, std::span<double> out) const = 0;
  double quantile(const State& state, double eta, double alpha) const;
};

class RegressionAdapter {
 public:
  class State {
   public:
    virtual ~State() = default;
  };
  virtual ~RegressionAdapter() = default;
  // eval_x rows are the covariates at which in-loop quantiles are requested.
  virtual std::unique_ptr<State> fit(const RegressionData& data,
                                     const math::Matrix& eval_x) const = 0;
  // out(i, j) = upper-alpha quantile for state i at eval_x row j; batched so
  // implementations share the standardized quantile across states.
  virtual void eval_quantiles(std::span<const State* const> states, double eta,
                              double alpha, math::Matrix& out) const = 0;
  virtual double quantile_at(const State& state, std::span<const double> x_new,
                             double eta, double alpha) const = 0;
};

class TimeSeriesAdapter {
 public:
  class State {
   public:
    virtual ~State() = default;
  };
  virtual ~TimeSeriesAdapter() = default;
  virtual std::unique_ptr<State> fit(std::span<const double> series) const = 0;
  // out(i, j) = upper-alpha quantile for state i conditioned at y_prev[j].
  virtual void quantiles_at(std::span<const State* const> states,
                            std::span<const double> y_prev, double eta, double alpha,
                            math::Matrix& out) const = 0;
  double quantile_at(const State& state, double y_prev, double eta, double alpha) const;
};

class SpatialAdapter {
 public:
  class State {
   public:
    virtual ~State() = default;
  };
  virtual ~SpatialAdapter() = default;
  // field holds the n observed values on the adapter's fixed site set.
  virtual std::unique_ptr<State> fit(std::span<const double> field) const = 0;
  virtual void quantiles(std::span<const State* const> states, double eta,
                         double alpha, std::span<double> out) const = 0;
  double quantile(const State& state, double eta, double alpha) const;
};

// -------------------------------------------------------- coverage caches
//
// Replicate fits are computed once at construction; coverage(eta) is then a
// pure function of the cached state, cheap enough to call per iteration.

class IidCoverage {
 public:
  IidCoverage(const IidAdapter& model, std::span<const double> original,
              std::span<const std::vector<double>> boot_samples);
  double coverage(double eta, double alpha) const;
  std::size_t replicates() const { return states_.size(); }

 private:
  const IidAdapter* model_;
  std::vector<std::unique_ptr<IidAdapter::State>> states_;
  std::vector<const IidAdapter::State*> views_;
  std::vector<double> sorted_original_;
};

class RegressionCoverage {
 public:
  RegressionCoverage(const RegressionAdapter& model, const RegressionData& original,
                     std::span<const RegressionData> boot_samples);
  double coverage(double eta, double alpha) const;
  std::size_t replicates() const { return states_.size(); }

 private:
  const RegressionAdapter* model_;
  std::vector<std::unique_ptr<RegressionAdapter::State>> states_;
  std::vector<const RegressionAdapter::State*> views_;
  std::vector<double> original_y_;
};

class TimeSeriesCoverage {
 public:
  TimeSeriesCoverage(const TimeSeriesAdapter& model, std::span<const double> original,
                     std::span<const std::vector<double>> boot_samples);
  double coverage(double eta, double alpha) const;
  std::size_t replicates() const { return states_.size(); }

 private:
  const TimeSeriesAdapter* model_;
  std::vector<std::unique_ptr<TimeSeriesAdapter::State>> states_;
  std::vector<const TimeSeriesAdapter::State*> views_;
  std::vector<double> original_;
};

class SpatialCoverage {
 public:
  // Each bootstrap field has length n+1; the final entry is the bootstrap
  // truth at the target and the first n entries are the field used to refit.
  SpatialCoverage(const SpatialAdapter& model,
                  std::span<const std::vector<double>> boot_fields);
  double coverage(double eta, double alpha) const;
  std::size_t replicates() const { return states_.size(); }

 private:
  const SpatialAdapter* model_;
  std::vector<std::unique_ptr<SpatialAdapter::State>> states_;
  std::vector<const SpatialAdapter::State*> views_;
  std::vector<double> targets_;
};

// ------------------------------------------------ spec-shaped estimators

double coverage_iid(double eta, std::span<const std::vector<double>> boot_samples,
                    std::span<const double> original, double alpha,
                    const IidAdapter& model);
double coverage_regression(double eta, std::span<const RegressionData> boot_samples,
                           const RegressionData& original, double alpha,
                           const RegressionAdapter& model);
double coverage_timeseries(double eta, std::span<const std::vector<double>> boot_samples,
                           std::span<const double> original, double alpha,
                           const TimeSeriesAdapter& model);
double coverage_spatial(double eta, std::span<const std::vector<double>> boot_fields,
                        double alpha, const SpatialAdapter& model);

// ------------------------------------------------------- stochastic search

struct StepSchedule {
  double kappa0 = 1.0;
  double exponent = 0.51;  // in (0.5, 1]: sum kappa = inf, sum kappa^2 < inf
  double step(std::size_t t) const;
};

struct CalibrationControl {
  double eta_start = 0.5;
  double eta_floor = 1e-4;
  std::size_t max_iterations = 1000;
  StepSchedule schedule{};
  std::optional<double> tolerance{};  // default: 0.01 * alpha
};

// eta + kappa * (coverage - (1 - alpha)), floored at 1e-4.
double robbins_monro_step(double eta, double coverage_hat, double alpha, double kappa);

double default_tolerance(double alpha);
// max(0.01 * alpha, 1/B): spatial coverage resolves only to 1/B.
double spatial_tolerance(double alpha, std::size_t replicates);

struct TracePoint {
  double eta;
  double coverage;
};

struct CalibrationResult {
  double eta_hat = 0.0;
  std::vector<TracePoint> trace;
  std::size_t iterations = 0;  // == trace.size()
  bool converged = false;
  double tolerance_used = 0.0;
};

// Runs the stochastic-approximation loop on a coverage evaluator.  The
// convergence test precedes each update; a run that exhausts max_iterations
// returns converged = false with its trace rather than throwing.
CalibrationResult calibrate_root(const std::function<double(double)>& coverage,
                                 double alpha, double tolerance,
                                 const CalibrationControl& control = {});

// One-call calibrations: generate replicates per the plan, cache fits, tune.
CalibrationResult gprc_calibrate(std::span<const double> data, double alpha,
                                 const BootstrapPlan& plan, const IidAdapter& model,
                                 const CalibrationControl& control = {});
CalibrationResult gprc_calibrate(const RegressionData& data, double alpha,
                                 const BootstrapPlan& plan, const RegressionAdapter& model,
                                 const CalibrationControl& control = {});
CalibrationResult gprc_calibrate(std::span<const double> series, double alpha,
                                 const BootstrapPlan& plan, const TimeSeriesAdapter& model,
                                 const CalibrationControl& control = {});
CalibrationResult gprc_calibrate(std::span<const Point> sites_with_target,
                                 std::span<const double> y, const SpatialTheta& theta_hat,
                                 double alpha, const BootstrapPlan& plan,
                                 const SpatialAdapter& model,
                                 const CalibrationControl& control = {});

}  // namespace gprc
