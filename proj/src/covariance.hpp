#pragma once

#include <span>

#include "math/linalg.hpp"

namespace gprc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

// Exponential covariance model C(s,t) = sigma2 * (exp(-|s-t|/phi) + tau * 1{s=t}).
struct SpatialTheta {
  double mu = 0.0;
  double sigma2 = 1.0;
  double phi = 1.0;   // range
  double tau = 0.0;   // scaled nugget
};

double exp_covariance(const SpatialTheta& theta, Point a, Point b);

// Full covariance matrix over the given sites.
math::Matrix exp_covariance_matrix(const SpatialTheta& theta, std::span<const Point> sites);

// Correlation-scale version (sigma2 factored out): exp(-d/phi) + tau * 1{s=t}.
math::Matrix exp_correlation_matrix(double phi, double tau, std::span<const Point> sites);

}  // namespace gprc
