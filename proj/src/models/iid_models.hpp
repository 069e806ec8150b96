#pragma once

#include "calibrate.hpp"
#include "conjugate.hpp"

namespace gprc::models {

// Gamma(k0, rate) likelihood with a conjugate gamma prior on the rate.
class GammaIidModel final : public IidAdapter {
 public:
  GammaIidModel(double prior_shape = 1.0, double prior_rate = 1.0,
                double model_shape = 3.0)
      : prior_shape_(prior_shape), prior_rate_(prior_rate), model_shape_(model_shape) {}

  std::unique_ptr<State> fit(std::span<const double> data) const override;
  void quantiles(std::span<const State* const> states, double eta, double alpha,
                 std::span<double> out) const override;

  GeneralizedBetaPrime predictive(const State& state, double eta) const;
  double model_shape() const { return model_shape_; }

 private:
  double prior_shape_;
  double prior_rate_;
  double model_shape_;
};

// Normal likelihood with known variance and a conjugate normal prior on the mean.
class NormalKnownVarModel final : public IidAdapter {
 public:
  NormalKnownVarModel(double sigma2, double prior_mean = 0.0, double prior_variance = 100.0)
      : sigma2_(sigma2), prior_mean_(prior_mean), prior_variance_(prior_variance) {}

  std::unique_ptr<State> fit(std::span<const double> data) const override;
  void quantiles(std::span<const State* const> states, double eta, double alpha,
                 std::span<double> out) const override;

  NormalPredictive predictive(const State& state, double eta) const;

 private:
  double sigma2_;
  double prior_mean_;
  double prior_variance_;
};

// Normal likelihood with unknown mean and variance under the conjugate
// normal-inverse-gamma prior.  With log_scale set, the model is fit to
// log(data) and quantiles map back through exp (the log-normal model).
class NormalNigModel final : public IidAdapter {
 public:
  NormalNigModel(double m = 0.0, double k = 100.0, double a = 2.0, double b = 1.0,
                 bool log_scale = false)
      : m_(m), k_(k), a_(a), b_(b), log_scale_(log_scale) {}

  std::unique_ptr<State> fit(std::span<const double> data) const override;
  void quantiles(std::span<const State* const> states, double eta, double alpha,
                 std::span<double> out) const override;

  const NIGPosterior& posterior(const State& state) const;
  bool log_scale() const { return log_scale_; }

 private:
  double m_, k_, a_, b_;
  bool log_scale_;
};

}  // namespace gprc::models
