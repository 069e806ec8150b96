#include "covariance.hpp"

#include <cmath>

#include "error.hpp"

namespace gprc {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double exp_covariance(const SpatialTheta& theta, Point a, Point b) {
  const double d = distance(a, b);
  const double nugget = (d == 0.0) ? theta.tau : 0.0;
  return theta.sigma2 * (std::exp(-d / theta.phi) + nugget);
}

math::Matrix exp_covariance_matrix(const SpatialTheta& theta, std::span<const Point> sites) {
  require(theta.sigma2 > 0.0 && theta.phi > 0.0 && theta.tau >= 0.0,
          Status::invalid_argument, "exp_covariance_matrix: invalid parameters");
  const std::size_t n = sites.size();
  math::Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double value = exp_covariance(theta, sites[i], sites[j]);
      c(i, j) = value;
      c(j, i) = value;
    }
  }
  return c;
}

math::Matrix exp_correlation_matrix(double phi, double tau, std::span<const Point> sites) {
  SpatialTheta unit{0.0, 1.0, phi, tau};
  return exp_covariance_matrix(unit, sites);
}

}  // namespace gprc
