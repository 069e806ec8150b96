#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace gprc {

// An eta-generalized predictive density.  Closed-form families and gridded
// Monte-Carlo curves both expose density evaluation, the CDF, and upper-alpha
// quantile extraction.
class Predictive {
 public:
  virtual ~Predictive() = default;

  virtual double log_density(double y) const = 0;
  double density(double y) const;
  virtual double cdf(double y) const = 0;

  // The q with CDF(q) = 1 - alpha.  Closed forms solve |CDF(q)-(1-alpha)| <= 1e-8
  // by bracketed bisection; bracket expansion is capped at 200 doublings.
  virtual double upper_quantile(double alpha) const;

  virtual double support_lower() const;
  virtual double support_upper() const;

 protected:
  // Finite seed point and width for bracket expansion.
  virtual double bracket_center() const = 0;
  virtual double bracket_width() const = 0;
};

// Validates alpha in (0,1) and returns pred.upper_quantile(alpha).
double predictive_quantile(const Predictive& pred, double alpha);

class NormalPredictive final : public Predictive {
 public:
  NormalPredictive(double mean, double variance);
  double mean() const { return mean_; }
  double variance() const { return variance_; }

  double log_density(double y) const override;
  double cdf(double y) const override;
  double upper_quantile(double alpha) const override;  // analytic inverse

 protected:
  double bracket_center() const override { return mean_; }
  double bracket_width() const override;

 private:
  double mean_;
  double variance_;
};

class StudentTLocationScale final : public Predictive {
 public:
  StudentTLocationScale(double df, double location, double scale);
  double df() const { return df_; }
  double location() const { return location_; }
  double scale() const { return scale_; }

  double log_density(double y) const override;
  double cdf(double y) const override;

 protected:
  double bracket_center() const override { return location_; }
  double bracket_width() const override { return scale_; }

 private:
  double df_;
  double location_;
  double scale_;
};

// Density proportional to (y/d)^(c*p-1) / (1 + (y/d)^c)^(p+q) on (0, inf).
class GeneralizedBetaPrime final : public Predictive {
 public:
  GeneralizedBetaPrime(double c, double d, double p, double q);
  double c() const { return c_; }
  double d() const { return d_; }
  double p() const { return p_; }
  double q() const { return q_; }

  double log_density(double y) const override;
  double cdf(double y) const override;
  double support_lower() const override { return 0.0; }

 protected:
  double bracket_center() const override { return d_; }
  double bracket_width() const override { return d_; }

 private:
  double c_, d_, p_, q_;
  double log_norm_;
};

// Predictive of exp(X) for X distributed per the base predictive; used by
// models fit on the log scale.  Quantiles map through exp exactly.
class ExpTransformedPredictive final : public Predictive {
 public:
  explicit ExpTransformedPredictive(std::shared_ptr<const Predictive> base);
  const Predictive& base() const { return *base_; }

  double log_density(double y) const override;
  double cdf(double y) const override;
  double upper_quantile(double alpha) const override;
  double support_lower() const override { return 0.0; }

 protected:
  double bracket_center() const override;
  double bracket_width() const override;

 private:
  std::shared_ptr<const Predictive> base_;
};

// Gridded density curve, normalized by trapezoid quadrature at construction.
class PredictiveCurve final : public Predictive {
 public:
  // density holds relative (unnormalized) values; both vectors share a size
  // >= 2 and grid must be strictly increasing.
  PredictiveCurve(std::vector<double> grid, std::vector<double> density);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& raw_density() const { return density_; }
  double normalization() const { return normalization_; }

  double log_density(double y) const override;
  double cdf(double y) const override;
  double upper_quantile(double alpha) const override;  // cumulative-trapezoid inversion
  double support_lower() const override { return grid_.front(); }
  double support_upper() const override { return grid_.back(); }

 protected:
  double bracket_center() const override;
  double bracket_width() const override;

 private:
  // Linear interpolation of the raw density at y; zero outside the grid.
  double raw_at(double y) const;

  std::vector<double> grid_;
  std::vector<double> density_;
  std::vector<double> cumulative_;  // trapezoid partial sums of the raw density
  double normalization_ = 0.0;
};

struct PosteriorSampleSet {
  std::vector<std::vector<double>> samples;  // theta^(m), m = 1..M
};

using LogDensityFn = std::function<double(std::span<const double> theta, double y)>;

// Monte-Carlo eta-generalized predictive: pointwise average of p_theta^eta
// over posterior samples, evaluated on the grid.  Powers are accumulated in
// log space with a max shift so that tail values survive underflow.
PredictiveCurve mc_generalized_predictive(const PosteriorSampleSet& post,
                                          const LogDensityFn& log_density,
                                          double eta,
                                          std::span<const double> grid);

std::vector<double> linspace(double lo, double hi, std::size_t count);

// Default evaluation grid: spans the [1e-5, 1-1e-5] quantile range of the
// ordinary (eta = 1) predictive, with the upper side extended by 25%.
std::vector<double> default_grid(const Predictive& ordinary, std::size_t points = 4096);

// Upper-alpha quantile of the standard Student-t with df degrees of freedom.
double student_t_upper_quantile(double df, double alpha);

}  // namespace gprc
