#include "conjugate.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "math/normal.hpp"

namespace gprc {

GammaPosterior gamma_posterior(double prior_shape, double prior_rate,
                               double model_shape, std::span<const double> data) {
  require(prior_shape > 0.0 && prior_rate > 0.0, Status::invalid_argument,
          "gamma_posterior: prior hyperparameters must be positive");
  require(model_shape > 0.0, Status::invalid_argument,
          "gamma_posterior: model shape must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    require(data[i] > 0.0, Status::domain_error,
            "gamma_posterior: data value at index " + std::to_string(i) +
                " is not positive");
    sum += data[i];
  }
  return {prior_shape + model_shape * static_cast<double>(data.size()),
          prior_rate + sum, model_shape};
}

GeneralizedBetaPrime gamma_generalized_predictive(const GammaPosterior& post, double eta) {
  require(eta > 0.0, Status::invalid_argument,
          "gamma_generalized_predictive: eta must be positive");
  const double q = post.shape + eta - 1.0;
  require(q > 0.0, Status::invalid_argument,
          "gamma_generalized_predictive: a_n + eta - 1 must be positive "
          "(density not normalizable)");
  const double p = eta * (post.model_shape - 1.0) + 1.0;
  return GeneralizedBetaPrime(1.0, post.rate / eta, p, q);
}

NormalKnownVarPosterior normal_knownvar_posterior(double prior_mean, double prior_variance,
                                                  double sigma2, std::span<const double> data) {
  require(prior_variance > 0.0 && sigma2 > 0.0, Status::invalid_argument,
          "normal_knownvar_posterior: variances must be positive");
  double sum = 0.0;
  for (const double y : data) sum += y;
  const double n = static_cast<double>(data.size());
  const double denom = sigma2 + n * prior_variance;
  return {(sigma2 * prior_mean + prior_variance * sum) / denom,
          sigma2 * prior_variance / denom};
}

NormalPredictive normal_knownvar_generalized_predictive(double posterior_mean,
                                                        double posterior_variance,
                                                        double sigma2, double eta) {
  require(eta > 0.0, Status::invalid_argument,
          "normal_knownvar_generalized_predictive: eta must be positive");
  require(posterior_variance >= 0.0 && sigma2 > 0.0, Status::invalid_argument,
          "normal_knownvar_generalized_predictive: invalid variances");
  return NormalPredictive(posterior_mean, posterior_variance + sigma2 / eta);
}

NIGPosterior nig_posterior(double m, double k, double a, double b,
                           std::span<const double> data) {
  require(k > 0.0 && a > 0.0 && b > 0.0, Status::invalid_argument,
          "nig_posterior: prior hyperparameters must be positive");
  require(!data.empty(), Status::insufficient_data,
          "nig_posterior: at least one observation required");
  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (const double y : data) mean += y;
  mean /= n;
  double var = 0.0;  // 1/n convention
  for (const double y : data) var += (y - mean) * (y - mean);
  var /= n;
  const double nk1 = n * k + 1.0;
  const double m_n = (n * k * mean + m) / nk1;
  const double a_n = a + 0.5 * n;
  const double b_n = b + 0.5 * n * var + n * (mean - m) * (mean - m) / (2.0 * nk1);
  return {m_n, a_n, b_n, k, data.size()};
}

StudentTLocationScale nig_generalized_predictive(const NIGPosterior& post, double eta) {
  require(eta > 0.0, Status::invalid_argument,
          "nig_generalized_predictive: eta must be positive");
  const double df = 2.0 * post.a_n + eta - 1.0;
  require(df > 0.0, Status::invalid_argument,
          "nig_generalized_predictive: 2*a_n + eta - 1 must be positive");
  const double nk1 = static_cast<double>(post.n) * post.k + 1.0;
  const double scale2 = (1.0 / eta + post.k / nk1) * 2.0 * post.b_n / df;
  return StudentTLocationScale(df, post.m_n, std::sqrt(scale2));
}

double laplace_ideal_eta(double alpha) {
  require(alpha > 0.0 && alpha < 0.5, Status::domain_error,
          "laplace_ideal_eta: alpha must lie in (0, 0.5)");
  const double z = math::norm_upper_quantile(alpha);
  const double ratio = z / std::log(2.0 * alpha);
  return 2.0 * ratio * ratio;
}

}  // namespace gprc
