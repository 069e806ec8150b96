#include "simgen.hpp"

#include <cmath>
#include <functional>

#include "error.hpp"
#include "math/linalg.hpp"
#include "math/normal.hpp"
#include "math/special.hpp"

namespace gprc::simgen {

namespace {

constexpr std::size_t kBurnIn = 100;
constexpr std::size_t kMaxFieldRedraws = 1000;

double quantile_by_bisection_cdf(double target, double lo, double hi,
                                 const std::function<double(double)>& cdf) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Joint draw of a zero-mean unit-sigma2 exponential-covariance Gaussian field
// over the given sites, via the dense Cholesky factor.
std::vector<double> gaussian_field(const math::Matrix& chol, math::Rng& rng) {
  const std::size_t m = chol.rows();
  std::vector<double> z(m);
  for (auto& value : z) value = rng.normal();
  std::vector<double> field(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += chol(i, k) * z[k];
    field[i] = s;
  }
  return field;
}

}  // namespace

// ---------------------------------------------------------------- iid

double pareto_from_uniform(double a, double u) {
  require(a > 0.0, Status::domain_error, "pareto: shape must be positive");
  return std::pow(1.0 - u, -1.0 / a) - 1.0;
}

std::vector<double> pareto_sample(double a, std::size_t n, math::Rng& rng) {
  std::vector<double> out(n);
  for (auto& value : out) value = pareto_from_uniform(a, rng.uniform());
  return out;
}

double pareto_quantile(double a, double alpha) {
  require(a > 0.0, Status::domain_error, "pareto: shape must be positive");
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "pareto_quantile: alpha must lie in (0,1)");
  return std::pow(alpha, -1.0 / a) - 1.0;
}

double gev_from_uniform(double xi, double u) {
  require(xi > 0.0, Status::domain_error, "gev: shape must be positive");
  return 2.0 + (std::pow(-std::log(u), -xi) - 1.0) / xi;
}

std::vector<double> gev_sample(double xi, std::size_t n, math::Rng& rng) {
  std::vector<double> out(n);
  for (auto& value : out) value = gev_from_uniform(xi, rng.uniform());
  return out;
}

double gev_quantile(double xi, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "gev_quantile: alpha must lie in (0,1)");
  return gev_from_uniform(xi, 1.0 - alpha);
}

double gev_mean(double xi) {
  require(xi > 0.0 && xi < 1.0, Status::domain_error,
          "gev_mean: finite only for 0 < xi < 1");
  return 2.0 + (std::tgamma(1.0 - xi) - 1.0) / xi;
}

std::vector<double> lognormal_sample(double mu, double sigma, std::size_t n,
                                     math::Rng& rng) {
  std::vector<double> out(n);
  for (auto& value : out) value = std::exp(mu + sigma * rng.normal());
  return out;
}

double lognormal_quantile(double mu, double sigma, double alpha) {
  return std::exp(mu + sigma * math::norm_upper_quantile(alpha));
}

std::vector<double> gamma_sample(double shape, double rate, std::size_t n,
                                 math::Rng& rng) {
  std::vector<double> out(n);
  for (auto& value : out) value = rng.gamma(shape, rate);
  return out;
}

double gamma_quantile(double shape, double rate, double alpha) {
  require(shape > 0.0 && rate > 0.0, Status::domain_error,
          "gamma_quantile: parameters must be positive");
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "gamma_quantile: alpha must lie in (0,1)");
  const double target = 1.0 - alpha;
  double hi = (shape + 10.0 * std::sqrt(shape) + 10.0) / rate;
  while (math::incomplete_gamma_p(shape, hi * rate) < target) hi *= 2.0;
  return quantile_by_bisection_cdf(target, 0.0, hi, [&](double x) {
    return math::incomplete_gamma_p(shape, x * rate);
  });
}

std::vector<double> normal_sample(double mean, double sd, std::size_t n, math::Rng& rng) {
  std::vector<double> out(n);
  for (auto& value : out) value = rng.normal(mean, sd);
  return out;
}

double normal_quantile_upper(double mean, double sd, double alpha) {
  return mean + sd * math::norm_upper_quantile(alpha);
}

std::vector<double> laplace_sample(double location, double scale, std::size_t n,
                                   math::Rng& rng) {
  std::vector<double> out(n);
  for (auto& value : out) value = location + scale * rng.laplace();
  return out;
}

double laplace_quantile(double location, double scale, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "laplace_quantile: alpha must lie in (0,1)");
  const double p = 1.0 - alpha;
  const double core = (p < 0.5) ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
  return location + scale * core;
}

// --------------------------------------------------------------- time series

namespace {

double ts_mean(TsScenario scenario, double y_prev) {
  switch (scenario) {
    case TsScenario::ar1_laplace: return 0.9 * y_prev;
    case TsScenario::sin_laplace: return std::sin(y_prev);
    case TsScenario::sin_heteroscedastic: return std::sin(y_prev);
  }
  fail(Status::invalid_argument, "unknown time series scenario");
}

double ts_scale(TsScenario scenario, double y_prev) {
  if (scenario == TsScenario::sin_heteroscedastic) {
    return std::sqrt(0.5 + 0.25 * y_prev * y_prev);
  }
  return 1.0;
}

}  // namespace

std::vector<double> timeseries_sample(TsScenario scenario, std::size_t count,
                                      math::Rng& rng) {
  require(count >= 2, Status::insufficient_data,
          "timeseries_sample: need at least two observations");
  double y = 0.0;
  for (std::size_t i = 0; i < kBurnIn; ++i) {
    y = ts_mean(scenario, y) + ts_scale(scenario, y) * rng.laplace();
  }
  std::vector<double> out(count);
  out[0] = y;
  for (std::size_t i = 1; i < count; ++i) {
    out[i] = ts_mean(scenario, out[i - 1]) +
             ts_scale(scenario, out[i - 1]) * rng.laplace();
  }
  return out;
}

double timeseries_conditional_quantile(TsScenario scenario, double y_prev, double alpha) {
  return ts_mean(scenario, y_prev) +
         ts_scale(scenario, y_prev) * laplace_quantile(0.0, 1.0, alpha);
}

// ---------------------------------------------------------------- regression

namespace {

// Cholesky factor of the AR(1)-correlated design covariance, built once.
const math::Matrix& design_chol() {
  static const math::Matrix chol = [] {
    math::Matrix cov(kRegressionDim, kRegressionDim);
    for (std::size_t i = 0; i < kRegressionDim; ++i) {
      for (std::size_t j = 0; j < kRegressionDim; ++j) {
        cov(i, j) = std::pow(kRegressionDesignCorr,
                             std::fabs(static_cast<double>(i) - static_cast<double>(j)));
      }
    }
    return math::cholesky_lower(cov);
  }();
  return chol;
}

double centered_error(RegressionError kind, math::Rng& rng) {
  switch (kind) {
    case RegressionError::chisq2_centered:
      return rng.chi_squared(2.0) - 2.0;
    case RegressionError::gev05_centered:
      return gev_from_uniform(0.5, rng.uniform()) - gev_mean(0.5);
  }
  fail(Status::invalid_argument, "unknown regression error kind");
}

void fill_design_row(math::Matrix& x, std::size_t row, math::Rng& rng) {
  const math::Matrix& chol = design_chol();
  double z[kRegressionDim];
  for (auto& value : z) value = rng.normal();
  for (std::size_t j = 0; j < kRegressionDim; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k <= j; ++k) s += chol(j, k) * z[k];
    x(row, j) = s;
  }
}

}  // namespace

RegressionSample regression_sample(RegressionError kind, std::size_t n, math::Rng& rng) {
  require(n > kRegressionDim, Status::insufficient_data,
          "regression_sample: n must exceed the design dimension");
  RegressionSample sample;
  sample.data.x = math::Matrix(n, kRegressionDim);
  sample.data.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fill_design_row(sample.data.x, i, rng);
    double mean = 0.0;
    for (std::size_t j = 0; j < kRegressionDim; ++j) mean += 2.0 * sample.data.x(i, j);
    sample.data.y[i] = mean + centered_error(kind, rng);
  }
  math::Matrix next(1, kRegressionDim);
  fill_design_row(next, 0, rng);
  sample.x_next.assign(next.row(0).begin(), next.row(0).end());
  double mean = 0.0;
  for (std::size_t j = 0; j < kRegressionDim; ++j) mean += 2.0 * sample.x_next[j];
  sample.y_next = mean + centered_error(kind, rng);
  return sample;
}

double regression_error_quantile(RegressionError kind, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "regression_error_quantile: alpha must lie in (0,1)");
  switch (kind) {
    case RegressionError::chisq2_centered:
      // chi-square(2) is Exp(1/2): upper-alpha quantile -2 log(alpha), centered.
      return -2.0 * std::log(alpha) - 2.0;
    case RegressionError::gev05_centered:
      return gev_quantile(0.5, alpha) - gev_mean(0.5);
  }
  fail(Status::invalid_argument, "unknown regression error kind");
}

// ------------------------------------------------------------------ spatial

SpatialTheta sp_gaussian_theta() { return SpatialTheta{0.0, 1.0, 3.0, 0.0}; }

std::vector<Point> disc_sites(std::size_t n, math::Rng& rng) {
  std::vector<Point> sites(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = kDiscRadius * std::sqrt(rng.uniform());
    const double angle = 2.0 * 3.14159265358979323846 * rng.uniform();
    sites[i] = {radius * std::cos(angle), radius * std::sin(angle)};
  }
  sites[n] = {0.0, 0.0};
  return sites;
}

SpatialSample spatial_sample(SpScenario scenario, std::size_t n, math::Rng& rng) {
  require(n >= 2, Status::insufficient_data, "spatial_sample: need at least two sites");
  SpatialSample sample;
  sample.sites = disc_sites(n, rng);
  const std::size_t m = n + 1;

  switch (scenario) {
    case SpScenario::gaussian: {
      const SpatialTheta theta = sp_gaussian_theta();
      const math::Matrix chol =
          math::cholesky_lower(exp_covariance_matrix(theta, sample.sites));
      sample.field = gaussian_field(chol, rng);
      for (auto& value : sample.field) value += theta.mu;
      return sample;
    }
    case SpScenario::lognormal_field: {
      const SpatialTheta theta = sp_gaussian_theta();
      const math::Matrix chol =
          math::cholesky_lower(exp_covariance_matrix(theta, sample.sites));
      const double e = std::exp(1.0);
      const double sd = std::sqrt(e * e - e);  // sd of logN(0,1)
      for (std::size_t attempt = 0;; ++attempt) {
        require(attempt < kMaxFieldRedraws, Status::degenerate_support,
                "spatial_sample: log-normal field kept hitting nonpositive values");
        std::vector<double> l(m);
        for (auto& value : l) value = std::exp(rng.normal()) / sd;
        std::vector<double> w(m, 0.0);
        bool positive = true;
        for (std::size_t i = 0; i < m; ++i) {
          double s = 0.0;
          for (std::size_t k = 0; k <= i; ++k) s += chol(i, k) * l[k];
          w[i] = s;
          if (s <= 0.0) positive = false;
        }
        if (!positive) {
          ++sample.redraws;
          continue;
        }
        sample.field.resize(m);
        for (std::size_t i = 0; i < m; ++i) sample.field[i] = std::log(w[i]);
        return sample;
      }
    }
    case SpScenario::gev_process: {
      const SpatialTheta theta1{10.0, 1.0, 4.0, 0.0};
      const SpatialTheta theta2{0.0, 1.0, 1.4, 0.0};
      const math::Matrix chol1 =
          math::cholesky_lower(exp_covariance_matrix(theta1, sample.sites));
      const math::Matrix chol2 =
          math::cholesky_lower(exp_covariance_matrix(theta2, sample.sites));
      const double sigma = 3.0;
      const double xi = 0.5;
      for (std::size_t attempt = 0;; ++attempt) {
        require(attempt < kMaxFieldRedraws, Status::degenerate_support,
                "spatial_sample: GEV process kept hitting nonpositive values");
        std::vector<double> z1 = gaussian_field(chol1, rng);
        for (auto& value : z1) value += theta1.mu;
        const std::vector<double> z2 = gaussian_field(chol2, rng);
        std::vector<double> w(m);
        bool positive = true;
        for (std::size_t i = 0; i < m; ++i) {
          const double u = math::norm_cdf(z2[i]);
          const double frechet = -1.0 / std::log(u);  // standard Frechet inverse CDF
          w[i] = z1[i] + sigma / xi * (std::pow(frechet, xi) - 1.0);
          if (w[i] <= 0.0) positive = false;
        }
        if (!positive) {
          ++sample.redraws;
          continue;
        }
        sample.field.resize(m);
        for (std::size_t i = 0; i < m; ++i) sample.field[i] = std::log(w[i]);
        return sample;
      }
    }
  }
  fail(Status::invalid_argument, "unknown spatial scenario");
}

}  // namespace gprc::simgen
