#pragma once

#include <cstddef>
#include <span>

#include "predictive.hpp"

namespace gprc {

// Gamma likelihood with fixed shape (model_shape) and unknown rate, under a
// conjugate Gamma(shape, rate) prior on the rate.
struct GammaPosterior {
  double shape;        // a_n
  double rate;         // b_n
  double model_shape;  // k0, carried for the predictive
};

// a_n = prior_shape + model_shape * n, b_n = prior_rate + sum(data).
// Empty data returns the prior.
GammaPosterior gamma_posterior(double prior_shape, double prior_rate,
                               double model_shape, std::span<const double> data);

// Generalized beta prime predictive with
// (c, d, p, q) = (1, b_n/eta, eta*(k0-1)+1, a_n+eta-1).
GeneralizedBetaPrime gamma_generalized_predictive(const GammaPosterior& post, double eta);

// Normal likelihood with known variance sigma2 and unknown mean, under a
// conjugate normal prior on the mean.
struct NormalKnownVarPosterior {
  double mean;      // m_n
  double variance;  // v_n
};

NormalKnownVarPosterior normal_knownvar_posterior(double prior_mean, double prior_variance,
                                                  double sigma2, std::span<const double> data);

// N(m_n, v_n + sigma2/eta).
NormalPredictive normal_knownvar_generalized_predictive(double posterior_mean,
                                                        double posterior_variance,
                                                        double sigma2, double eta);

// Normal likelihood with unknown mean and variance under the conjugate
// normal-inverse-gamma prior: mu | s2 ~ N(m, k*s2), 1/s2 ~ Gamma(a, b).
struct NIGPosterior {
  double m_n;
  double a_n;
  double b_n;
  double k;       // prior scale, carried
  std::size_t n;  // observation count
};

NIGPosterior nig_posterior(double m, double k, double a, double b,
                           std::span<const double> data);

// Location-scale Student-t with df = 2*a_n + eta - 1 and
// scale^2 = (1/eta + k/(n*k+1)) * 2*b_n / df.
StudentTLocationScale nig_generalized_predictive(const NIGPosterior& post, double eta);

// Learning rate that calibrates the normal model against Laplace data:
// eta_alpha = 2 * (Phi^{-1}(1-alpha) / log(2*alpha))^2, alpha in (0, 0.5).
double laplace_ideal_eta(double alpha);

}  // namespace gprc
