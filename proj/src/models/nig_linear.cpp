#include "models/nig_linear.hpp"

#include <cmath>

#include "error.hpp"

namespace gprc::models {

NigLinearPrior vague_linear_prior(std::size_t q, double precision_scale,
                                  double shape, double rate) {
  NigLinearPrior prior;
  prior.coef_mean.assign(q, 0.0);
  prior.coef_precision = math::Matrix::identity(q, precision_scale);
  prior.shape = shape;
  prior.rate = rate;
  return prior;
}

void check_design_rank(const math::Matrix& x) {
  const std::size_t q = x.cols();
  math::Matrix gram(q, q);
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = a; b < q; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, a) * x(i, b);
      gram(a, b) = s;
      gram(b, a) = s;
    }
  }
  double max_diag = 0.0;
  for (std::size_t a = 0; a < q; ++a) max_diag = std::max(max_diag, gram(a, a));
  // shift by a relative tolerance so the factorization fails exactly when a
  // pivot falls below it
  for (std::size_t a = 0; a < q; ++a) gram(a, a) -= max_diag * 1e-12;
  try {
    math::cholesky_lower(gram);
  } catch (const Error&) {
    fail(Status::singular, "design matrix is rank deficient");
  }
}

NigLinearPosterior NigLinearPosterior::from_data(const NigLinearPrior& prior,
                                                 const math::Matrix& x,
                                                 std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t q = x.cols();
  require(y.size() == n, Status::shape_mismatch,
          "nig_linear: design and response lengths differ");
  require(n > q, Status::insufficient_data,
          "nig_linear: need more observations than coefficients");
  require(prior.coef_mean.size() == q, Status::shape_mismatch,
          "nig_linear: prior mean dimension mismatch");
  require(prior.coef_precision.rows() == q && prior.coef_precision.cols() == q,
          Status::shape_mismatch, "nig_linear: prior precision dimension mismatch");
  require(prior.shape > 0.0 && prior.rate > 0.0, Status::invalid_argument,
          "nig_linear: prior shape and rate must be positive");
  check_design_rank(x);

  // Lambda_n = Lambda_0 + X^T X, rhs = Lambda_0 mu_0 + X^T y
  math::Matrix lambda_n = prior.coef_precision;
  std::vector<double> rhs = math::matvec(prior.coef_precision, prior.coef_mean);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    for (std::size_t a = 0; a < q; ++a) {
      rhs[a] += row[a] * y[i];
      for (std::size_t b = a; b < q; ++b) {
        lambda_n(a, b) += row[a] * row[b];
      }
    }
  }
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < a; ++b) lambda_n(a, b) = lambda_n(b, a);
  }

  NigLinearPosterior post;
  post.chol_precision_ = math::cholesky_lower(lambda_n);
  post.coef_mean_ = math::cholesky_solve(post.chol_precision_, rhs);
  post.shape_ = prior.shape + 0.5 * static_cast<double>(n);

  double yty = 0.0;
  for (const double value : y) yty += value * value;
  const std::vector<double> lambda0_mu0 =
      math::matvec(prior.coef_precision, prior.coef_mean);
  const double prior_quad = math::dot(prior.coef_mean, lambda0_mu0);
  const double post_quad = math::dot(post.coef_mean_, rhs);
  post.rate_ = prior.rate + 0.5 * (yty + prior_quad - post_quad);
  require(post.rate_ > 0.0, Status::invalid_argument,
          "nig_linear: posterior rate is not positive");
  post.n_ = n;
  return post;
}

double NigLinearPosterior::fitted(std::span<const double> x) const {
  return math::dot(x, coef_mean_);
}

double NigLinearPosterior::predictive_weight(std::span<const double> x) const {
  const std::vector<double> z = math::forward_solve(chol_precision_, x);
  return math::dot(z, z);
}

double NigLinearPosterior::predictive_scale2(double weight, double eta) const {
  const double nu = df(eta);
  require(nu > 0.0, Status::invalid_argument,
          "nig_linear: 2*a_n + eta - 1 must be positive");
  return (1.0 / eta + weight) * 2.0 * rate_ / nu;
}

StudentTLocationScale NigLinearPosterior::generalized_predictive(
    std::span<const double> x_new, double eta) const {
  require(eta > 0.0, Status::invalid_argument, "nig_linear: eta must be positive");
  const double weight = predictive_weight(x_new);
  return StudentTLocationScale(df(eta), fitted(x_new),
                               std::sqrt(predictive_scale2(weight, eta)));
}

LeastSquaresFit least_squares(const math::Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t q = x.cols();
  require(y.size() == n, Status::shape_mismatch,
          "least_squares: design and response lengths differ");
  require(n > q, Status::insufficient_data,
          "least_squares: need more observations than coefficients");
  check_design_rank(x);
  math::Matrix gram(q, q);
  std::vector<double> rhs(q, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    for (std::size_t a = 0; a < q; ++a) {
      rhs[a] += row[a] * y[i];
      for (std::size_t b = a; b < q; ++b) gram(a, b) += row[a] * row[b];
    }
  }
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < a; ++b) gram(a, b) = gram(b, a);
  }
  math::Matrix chol(0, 0);
  try {
    chol = math::cholesky_lower(gram);
  } catch (const Error&) {
    fail(Status::singular, "least_squares: design matrix is rank deficient");
  }
  LeastSquaresFit fit;
  fit.coef = math::cholesky_solve(chol, rhs);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - math::dot(x.row(i), fit.coef);
    rss += r * r;
  }
  fit.sigma_mle = std::sqrt(rss / static_cast<double>(n));
  return fit;
}

}  // namespace gprc::models
