#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "data_types.hpp"
#include "math/linalg.hpp"
#include "predictive.hpp"

namespace gprc::models {

// Conjugate normal-inverse-gamma linear model:
//   y | x, beta, s2 ~ N(x^T beta, s2),  beta | s2 ~ N(mean, s2 * precision^-1),
//   1/s2 ~ Gamma(shape, rate).
struct NigLinearPrior {
  std::vector<double> coef_mean;  // mu_0
  math::Matrix coef_precision;    // Lambda_0, SPD
  double shape = 2.0;             // a_0
  double rate = 1.0;              // b_0
};

// Zero mean, precision 0.01*I, shape 2, rate 1: vague but proper.
NigLinearPrior vague_linear_prior(std::size_t q, double precision_scale = 0.01,
                                  double shape = 2.0, double rate = 1.0);

class NigLinearPosterior {
 public:
  static NigLinearPosterior from_data(const NigLinearPrior& prior,
                                      const math::Matrix& x,
                                      std::span<const double> y);

  double fitted(std::span<const double> x) const;             // x^T mu_n
  double predictive_weight(std::span<const double> x) const;  // x^T V_n x
  const std::vector<double>& coef_mean() const { return coef_mean_; }
  double shape() const { return shape_; }
  double rate() const { return rate_; }
  std::size_t n() const { return n_; }
  double df(double eta) const { return 2.0 * shape_ + eta - 1.0; }

  // scale^2 = (1/eta + x^T V_n x) * 2 b_n / df(eta); weight = x^T V_n x.
  double predictive_scale2(double weight, double eta) const;
  StudentTLocationScale generalized_predictive(std::span<const double> x_new,
                                               double eta) const;

 private:
  std::vector<double> coef_mean_;
  math::Matrix chol_precision_;  // lower factor of Lambda_0 + X^T X
  double shape_ = 0.0;
  double rate_ = 0.0;
  std::size_t n_ = 0;
};

// Throws a singular error when X^T X is numerically rank deficient.
void check_design_rank(const math::Matrix& x);

// Maximum-likelihood plug-in pieces shared by the plug-in comparators.
struct LeastSquaresFit {
  std::vector<double> coef;
  double sigma_mle = 0.0;  // sqrt(RSS / n)
};
LeastSquaresFit least_squares(const math::Matrix& x, std::span<const double> y);

}  // namespace gprc::models
