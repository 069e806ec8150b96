#pragma once

#include <optional>

#include "calibrate.hpp"
#include "models/nig_linear.hpp"

namespace gprc::models {

// Closed-form eta-generalized predictive of the conjugate NIG linear model at
// a new covariate vector.  Uses the vague default prior unless one is given.
StudentTLocationScale regression_generalized_predictive(
    const RegressionData& data, std::span<const double> x_new, double eta,
    const std::optional<NigLinearPrior>& prior = std::nullopt);

// MLE plug-in upper limit x_new^T beta_hat + z_{1-alpha} * sigma_hat.
double regression_plugin_limit(const RegressionData& data,
                               std::span<const double> x_new, double alpha);

class ConjugateRegressionModel final : public RegressionAdapter {
 public:
  explicit ConjugateRegressionModel(NigLinearPrior prior) : prior_(std::move(prior)) {}
  static ConjugateRegressionModel with_vague_prior(std::size_t q) {
    return ConjugateRegressionModel(vague_linear_prior(q));
  }

  std::unique_ptr<State> fit(const RegressionData& data,
                             const math::Matrix& eval_x) const override;
  void eval_quantiles(std::span<const State* const> states, double eta, double alpha,
                      math::Matrix& out) const override;
  double quantile_at(const State& state, std::span<const double> x_new, double eta,
                     double alpha) const override;

  const NigLinearPrior& prior() const { return prior_; }

 private:
  NigLinearPrior prior_;
};

}  // namespace gprc::models
