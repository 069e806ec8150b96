#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "calibrate.hpp"
#include "covariance.hpp"
#include "predictive.hpp"

namespace gprc::models {

struct KrigingMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact Gaussian conditional moments at s_new under the exponential
// covariance model with the given parameters.
KrigingMoments kriging_moments(const SpatialTheta& theta, std::span<const Point> sites,
                               std::span<const double> y, Point s_new);

// Moment (Matheron) semivariogram on 15 equal-width distance bins up to half
// the maximum pairwise distance, followed by a pair-count-weighted
// least-squares fit of gamma(h) = sigma2*tau + sigma2*(1 - exp(-h/phi)) with
// the range profiled on a log grid.  The structured component keeps at least
// 1% of the total variation so tau stays bounded.  The mean is estimated by
// the simple average of y.
SpatialTheta variogram_fit(std::span<const Point> sites, std::span<const double> y);

// NIG prior for the GP's (mu, sigma2) given the fixed correlation structure:
// mu | s2 ~ N(mean, s2 * mean_scale), 1/s2 ~ Gamma(shape, rate).
struct GpNigPrior {
  double mean = 0.0;
  double mean_scale = 100.0;
  double shape = 2.0;
  double rate = 1.0;
};

struct GpPredictiveOptions {
  std::size_t posterior_draws = 2000;  // M
  std::uint64_t seed = 0;
  std::size_t grid_points = 4096;
  GpNigPrior prior{};
};

// Monte-Carlo eta-generalized predictive at s_new: (mu, s2) are drawn from
// the conjugate NIG posterior given the fixed (phi, tau), the conditional
// density per draw is the kriging normal, and the powered mixture is
// normalized on a grid spanning the ordinary predictive's range.
PredictiveCurve gp_generalized_predictive(std::span<const Point> sites,
                                          std::span<const double> y, Point s_new,
                                          double phi_hat, double tau_hat, double eta,
                                          const GpPredictiveOptions& options = {});

// Same construction from caller-supplied (mu, sigma2) draws.
PredictiveCurve gp_mc_predictive(std::span<const Point> sites, std::span<const double> y,
                                 Point s_new, double phi_hat, double tau_hat, double eta,
                                 const PosteriorSampleSet& mu_sigma2_draws,
                                 std::size_t grid_points = 4096);

// Analytic route: integrating the powered kriging normal over the NIG
// posterior gives a location-scale Student-t.  Serves as the in-loop
// predictive and as the oracle the Monte-Carlo curve is checked against.
StudentTLocationScale gp_closed_form_predictive(std::span<const Point> sites,
                                                std::span<const double> y, Point s_new,
                                                double phi_hat, double tau_hat, double eta,
                                                const GpNigPrior& prior = {});

// Variogram plug-in upper limit m + z_{1-alpha} * sqrt(v).
double spatial_plugin_limit(std::span<const Point> sites, std::span<const double> y,
                            Point s_new, const SpatialTheta& theta_hat, double alpha);

// Upper-alpha order statistic of the bootstrap targets {Y_b(s_{n+1})}.
double spatial_bootstrap_limit(std::span<const std::vector<double>> boot_fields,
                               double alpha);

// Spatial adapter over a fixed site set (n observation sites plus the target
// last).  The correlation factorization is shared across replicate fits.
class GpSpatialModel final : public SpatialAdapter {
 public:
  GpSpatialModel(std::vector<Point> sites_with_target, double phi_hat, double tau_hat,
                 GpNigPrior prior = {});

  std::unique_ptr<State> fit(std::span<const double> field) const override;
  void quantiles(std::span<const State* const> states, double eta, double alpha,
                 std::span<double> out) const override;

  StudentTLocationScale predictive(const State& state, double eta) const;

 private:
  struct Core;  // shared correlation factorization and kriging row

  std::vector<Point> sites_;  // n + 1, target last
  double phi_;
  double tau_;
  GpNigPrior prior_;
  std::shared_ptr<Core> core_;
};

}  // namespace gprc::models
