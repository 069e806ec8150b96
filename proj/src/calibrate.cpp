#include "calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace gprc {

double IidAdapter::quantile(const State& state, double eta, double alpha) const {
  const State* view = &state;
  double out = 0.0;
  quantiles({&view, 1}, eta, alpha, {&out, 1});
  return out;
}

double TimeSeriesAdapter::quantile_at(const State& state, double y_prev, double eta,
                                      double alpha) const {
  const State* view = &state;
  math::Matrix out(1, 1);
  quantiles_at({&view, 1}, {&y_prev, 1}, eta, alpha, out);
  return out(0, 0);
}

double SpatialAdapter::quantile(const State& state, double eta, double alpha) const {
  const State* view = &state;
  double out = 0.0;
  quantiles({&view, 1}, eta, alpha, {&out, 1});
  return out;
}

// -------------------------------------------------------------- coverage

IidCoverage::IidCoverage(const IidAdapter& model, std::span<const double> original,
                         std::span<const std::vector<double>> boot_samples)
    : model_(&model), sorted_original_(original.begin(), original.end()) {
  require(!sorted_original_.empty(), Status::insufficient_data,
          "IidCoverage: empty data");
  require(!boot_samples.empty(), Status::insufficient_data,
          "IidCoverage: no bootstrap samples");
  std::sort(sorted_original_.begin(), sorted_original_.end());
  states_.reserve(boot_samples.size());
  for (const auto& sample : boot_samples) states_.push_back(model.fit(sample));
  views_.reserve(states_.size());
  for (const auto& state : states_) views_.push_back(state.get());
}

double IidCoverage::coverage(double eta, double alpha) const {
  std::vector<double> q(states_.size());
  model_->quantiles(views_, eta, alpha, q);
  const double n = static_cast<double>(sorted_original_.size());
  double total = 0.0;
  for (const double limit : q) {
    const auto it =
        std::upper_bound(sorted_original_.begin(), sorted_original_.end(), limit);
    total += static_cast<double>(it - sorted_original_.begin()) / n;
  }
  return total / static_cast<double>(states_.size());
}

RegressionCoverage::RegressionCoverage(const RegressionAdapter& model,
                                       const RegressionData& original,
                                       std::span<const RegressionData> boot_samples)
    : model_(&model), original_y_(original.y) {
  require(!original_y_.empty(), Status::insufficient_data,
          "RegressionCoverage: empty data");
  require(!boot_samples.empty(), Status::insufficient_data,
          "RegressionCoverage: no bootstrap samples");
  states_.reserve(boot_samples.size());
  for (const auto& sample : boot_samples) {
    states_.push_back(model.fit(sample, original.x));
  }
  views_.reserve(states_.size());
  for (const auto& state : states_) views_.push_back(state.get());
}

double RegressionCoverage::coverage(double eta, double alpha) const {
  const std::size_t n = original_y_.size();
  math::Matrix q(states_.size(), n);
  model_->eval_quantiles(views_, eta, alpha, q);
  double total = 0.0;
  for (std::size_t b = 0; b < states_.size(); ++b) {
    std::size_t covered = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (q(b, i) >= original_y_[i]) ++covered;
    }
    total += static_cast<double>(covered) / static_cast<double>(n);
  }
  return total / static_cast<double>(states_.size());
}

TimeSeriesCoverage::TimeSeriesCoverage(const TimeSeriesAdapter& model,
                                       std::span<const double> original,
                                       std::span<const std::vector<double>> boot_samples)
    : model_(&model), original_(original.begin(), original.end()) {
  require(original_.size() >= 2, Status::insufficient_data,
          "TimeSeriesCoverage: need at least two observations");
  require(!boot_samples.empty(), Status::insufficient_data,
          "TimeSeriesCoverage: no bootstrap samples");
  states_.reserve(boot_samples.size());
  for (const auto& sample : boot_samples) states_.push_back(model.fit(sample));
  views_.reserve(states_.size());
  for (const auto& state : states_) views_.push_back(state.get());
}

double TimeSeriesCoverage::coverage(double eta, double alpha) const {
  const std::size_t m = original_.size() - 1;  // consecutive pairs
  const std::span<const double> prev(original_.data(), m);
  math::Matrix q(states_.size(), m);
  model_->quantiles_at(views_, prev, eta, alpha, q);
  double total = 0.0;
  for (std::size_t b = 0; b < states_.size(); ++b) {
    std::size_t covered = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (q(b, i) >= original_[i + 1]) ++covered;
    }
    total += static_cast<double>(covered) / static_cast<double>(m);
  }
  return total / static_cast<double>(states_.size());
}

SpatialCoverage::SpatialCoverage(const SpatialAdapter& model,
                                 std::span<const std::vector<double>> boot_fields)
    : model_(&model) {
  require(!boot_fields.empty(), Status::insufficient_data,
          "SpatialCoverage: no bootstrap fields");
  states_.reserve(boot_fields.size());
  targets_.reserve(boot_fields.size());
  for (const auto& field : boot_fields) {
    require(field.size() >= 2, Status::shape_mismatch,
            "SpatialCoverage: replicate missing the target entry");
    states_.push_back(model.fit({field.data(), field.size() - 1}));
    targets_.push_back(field.back());
  }
  views_.reserve(states_.size());
  for (const auto& state : states_) views_.push_back(state.get());
}

double SpatialCoverage::coverage(double eta, double alpha) const {
  std::vector<double> q(states_.size());
  model_->quantiles(views_, eta, alpha, q);
  std::size_t covered = 0;
  for (std::size_t b = 0; b < q.size(); ++b) {
    if (q[b] >= targets_[b]) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(q.size());
}

double coverage_iid(double eta, std::span<const std::vector<double>> boot_samples,
                    std::span<const double> original, double alpha,
                    const IidAdapter& model) {
  return IidCoverage(model, original, boot_samples).coverage(eta, alpha);
}

double coverage_regression(double eta, std::span<const RegressionData> boot_samples,
                           const RegressionData& original, double alpha,
                           const RegressionAdapter& model) {
  return RegressionCoverage(model, original, boot_samples).coverage(eta, alpha);
}

double coverage_timeseries(double eta, std::span<const std::vector<double>> boot_samples,
                           std::span<const double> original, double alpha,
                           const TimeSeriesAdapter& model) {
  return TimeSeriesCoverage(model, original, boot_samples).coverage(eta, alpha);
}

double coverage_spatial(double eta, std::span<const std::vector<double>> boot_fields,
                        double alpha, const SpatialAdapter& model) {
  return SpatialCoverage(model, boot_fields).coverage(eta, alpha);
}

// ------------------------------------------------------------ root search

double StepSchedule::step(std::size_t t) const {
  return kappa0 * std::pow(static_cast<double>(t + 1), -exponent);
}

double robbins_monro_step(double eta, double coverage_hat, double alpha, double kappa) {
  const double next = eta + kappa * (coverage_hat - (1.0 - alpha));
  return std::max(next, 1e-4);
}

double default_tolerance(double alpha) { return 0.01 * alpha; }

double spatial_tolerance(double alpha, std::size_t replicates) {
  return std::max(default_tolerance(alpha), 1.0 / static_cast<double>(replicates));
}

CalibrationResult calibrate_root(const std::function<double(double)>& coverage,
                                 double alpha, double tolerance,
                                 const CalibrationControl& control) {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "calibrate_root: alpha must lie in (0,1)");
  require(tolerance > 0.0, Status::invalid_argument,
          "calibrate_root: tolerance must be positive");
  require(control.max_iterations >= 1, Status::invalid_argument,
          "calibrate_root: max_iterations must be >= 1");

  CalibrationResult result;
  result.tolerance_used = tolerance;
  const double target = 1.0 - alpha;
  double eta = control.eta_start;
  for (std::size_t t = 0; t < control.max_iterations; ++t) {
    const double c = coverage(eta);
    result.trace.push_back({eta, c});
    if (std::fabs(c - target) <= tolerance) {
      result.converged = true;
      break;
    }
    eta = std::max(eta + control.schedule.step(t) * (c - target), control.eta_floor);
  }
  result.iterations = result.trace.size();
  result.eta_hat = result.trace.back().eta;
  return result;
}

namespace {

std::optional<double> tolerance_override(const CalibrationControl& control) {
  return control.tolerance;
}

}  // namespace

CalibrationResult gprc_calibrate(std::span<const double> data, double alpha,
                                 const BootstrapPlan& plan, const IidAdapter& model,
                                 const CalibrationControl& control) {
  require(plan.kind == BootstrapKind::iid, Status::invalid_argument,
          "gprc_calibrate: plan kind must be iid for iid models");
  const auto boot = iid_bootstrap(data, plan);
  const IidCoverage cache(model, data, boot);
  const double tol = tolerance_override(control).value_or(default_tolerance(alpha));
  return calibrate_root([&](double eta) { return cache.coverage(eta, alpha); }, alpha,
                        tol, control);
}

CalibrationResult gprc_calibrate(const RegressionData& data, double alpha,
                                 const BootstrapPlan& plan, const RegressionAdapter& model,
                                 const CalibrationControl& control) {
  require(plan.kind == BootstrapKind::paired || plan.kind == BootstrapKind::residual,
          Status::invalid_argument,
          "gprc_calibrate: plan kind must be paired or residual for regression");
  // The residual variant reuses the paired machinery with responses rebuilt
  // around the fixed design; only the paired route is wired in here.
  const auto boot = paired_bootstrap(data, plan);
  const RegressionCoverage cache(model, data, boot);
  const double tol = tolerance_override(control).value_or(default_tolerance(alpha));
  return calibrate_root([&](double eta) { return cache.coverage(eta, alpha); }, alpha,
                        tol, control);
}

CalibrationResult gprc_calibrate(std::span<const double> series, double alpha,
                                 const BootstrapPlan& plan, const TimeSeriesAdapter& model,
                                 const CalibrationControl& control) {
  require(plan.kind == BootstrapKind::block, Status::invalid_argument,
          "gprc_calibrate: plan kind must be block for time series");
  BootstrapPlan effective = plan;
  if (!effective.block_length) effective.block_length = default_block_length(series.size());
  const auto boot = block_bootstrap(series, effective);
  const TimeSeriesCoverage cache(model, series, boot);
  const double tol = tolerance_override(control).value_or(default_tolerance(alpha));
  return calibrate_root([&](double eta) { return cache.coverage(eta, alpha); }, alpha,
                        tol, control);
}

CalibrationResult gprc_calibrate(std::span<const Point> sites_with_target,
                                 std::span<const double> y, const SpatialTheta& theta_hat,
                                 double alpha, const BootstrapPlan& plan,
                                 const SpatialAdapter& model,
                                 const CalibrationControl& control) {
  require(plan.kind == BootstrapKind::spatial, Status::invalid_argument,
          "gprc_calibrate: plan kind must be spatial");
  const auto fields = spatial_semiparametric_bootstrap(sites_with_target, y, theta_hat, plan);
  const SpatialCoverage cache(model, fields);
  const double tol =
      tolerance_override(control).value_or(spatial_tolerance(alpha, plan.replicates));
  return calibrate_root([&](double eta) { return cache.coverage(eta, alpha); }, alpha,
                        tol, control);
}

}  // namespace gprc
