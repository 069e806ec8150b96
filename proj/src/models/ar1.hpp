#pragma once

#include <optional>

#include "calibrate.hpp"
#include "models/nig_linear.hpp"

namespace gprc::models {

// Gaussian AR(1) through the origin: (Y_{i+1} | Y_i = y') ~ N(rho * y', s2).
// The posterior is the conjugate NIG linear model on the n-1 lag pairs,
// conditioning on the first observation.

StudentTLocationScale ar1_generalized_predictive(
    std::span<const double> series, double y_last, double eta,
    const std::optional<NigLinearPrior>& prior = std::nullopt);

// Conditional-least-squares plug-in limit rho_hat * y_last + z_{1-alpha} * sigma_hat.
double ar1_plugin_limit(std::span<const double> series, double y_last, double alpha);

class Ar1ConjugateModel final : public TimeSeriesAdapter {
 public:
  explicit Ar1ConjugateModel(NigLinearPrior prior) : prior_(std::move(prior)) {}
  Ar1ConjugateModel() : Ar1ConjugateModel(vague_linear_prior(1)) {}

  std::unique_ptr<State> fit(std::span<const double> series) const override;
  void quantiles_at(std::span<const State* const> states, std::span<const double> y_prev,
                    double eta, double alpha, math::Matrix& out) const override;

 private:
  NigLinearPrior prior_;
};

// Lag pairs (Y_i -> Y_{i+1}) as a one-column regression data set.
RegressionData ar1_lag_pairs(std::span<const double> series);

}  // namespace gprc::models
