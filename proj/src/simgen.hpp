#pragma once

#include <cstddef>
#include <vector>

#include "covariance.hpp"
#include "data_types.hpp"
#include "math/rng.hpp"

namespace gprc::simgen {

// ------------------------------------------------------------- iid truths

// Pareto with F(y) = 1 - (1+y)^(-a), y >= 0.
double pareto_from_uniform(double a, double u);
std::vector<double> pareto_sample(double a, std::size_t n, math::Rng& rng);
double pareto_quantile(double a, double alpha);  // upper-alpha

// Generalized extreme value with F(y) = exp(-(1 + xi (y-2))^(-1/xi)), xi > 0.
double gev_from_uniform(double xi, double u);
std::vector<double> gev_sample(double xi, std::size_t n, math::Rng& rng);
double gev_quantile(double xi, double alpha);  // upper-alpha
double gev_mean(double xi);                    // finite for xi < 1

std::vector<double> lognormal_sample(double mu, double sigma, std::size_t n, math::Rng& rng);
double lognormal_quantile(double mu, double sigma, double alpha);

std::vector<double> gamma_sample(double shape, double rate, std::size_t n, math::Rng& rng);
double gamma_quantile(double shape, double rate, double alpha);

std::vector<double> normal_sample(double mean, double sd, std::size_t n, math::Rng& rng);
double normal_quantile_upper(double mean, double sd, double alpha);

std::vector<double> laplace_sample(double location, double scale, std::size_t n, math::Rng& rng);
double laplace_quantile(double location, double scale, double alpha);  // upper-alpha

// ------------------------------------------------------------ time series

enum class TsScenario { ar1_laplace, sin_laplace, sin_heteroscedastic };

// Forward simulation of length count after a 100-step burn-in from zero.
std::vector<double> timeseries_sample(TsScenario scenario, std::size_t count, math::Rng& rng);
// Upper-alpha quantile of Y_{i+1} | Y_i = y_prev under the true process.
double timeseries_conditional_quantile(TsScenario scenario, double y_prev, double alpha);

// -------------------------------------------------------------- regression

enum class RegressionError { chisq2_centered, gev05_centered };

inline constexpr std::size_t kRegressionDim = 5;
inline constexpr double kRegressionDesignCorr = 0.5;

struct RegressionSample {
  RegressionData data;         // n observations
  std::vector<double> x_next;  // covariates for the held-out observation
  double y_next = 0.0;
};

RegressionSample regression_sample(RegressionError kind, std::size_t n, math::Rng& rng);
// Upper-alpha quantile of the centered error distribution.
double regression_error_quantile(RegressionError kind, double alpha);

// ----------------------------------------------------------------- spatial

enum class SpScenario { gaussian, lognormal_field, gev_process };

struct SpatialSample {
  std::vector<Point> sites;   // n observation sites plus the target (0,0) last
  std::vector<double> field;  // n + 1 values, the truth at the target last
  std::size_t redraws = 0;    // replicates rejected for nonpositive log input
};

inline constexpr double kDiscRadius = 20.0;

// True covariance parameters of the Gaussian scenario (also used by the
// log-normal field construction).
SpatialTheta sp_gaussian_theta();

SpatialSample spatial_sample(SpScenario scenario, std::size_t n, math::Rng& rng);

// Sites only: n points uniform in the disc plus the target at the origin.
std::vector<Point> disc_sites(std::size_t n, math::Rng& rng);

}  // namespace gprc::simgen
