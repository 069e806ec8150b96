#include "predictive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "math/normal.hpp"
#include "math/special.hpp"

namespace gprc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCdfTolerance = 1e-8;
constexpr int kMaxBracketDoublings = 200;
constexpr int kMaxBisectionSteps = 2000;

}  // namespace

double Predictive::density(double y) const { return std::exp(log_density(y)); }

double Predictive::support_lower() const { return -kInf; }
double Predictive::support_upper() const { return kInf; }

double Predictive::upper_quantile(double alpha) const {
  const double target = 1.0 - alpha;
  double width = bracket_width();
  if (!(width > 0.0)) width = 1.0;
  const double center = bracket_center();

  double lo = std::max(center - width, support_lower());
  int doublings = 0;
  while (cdf(lo) > target) {
    if (lo <= support_lower()) break;
    require(++doublings <= kMaxBracketDoublings, Status::nonconvergence,
            "upper_quantile: lower bracket expansion exceeded 200 doublings");
    width *= 2.0;
    lo = std::max(center - width, support_lower());
  }

  width = bracket_width();
  if (!(width > 0.0)) width = 1.0;
  double hi = std::min(center + width, support_upper());
  doublings = 0;
  while (cdf(hi) < target) {
    if (hi >= support_upper()) break;
    require(++doublings <= kMaxBracketDoublings, Status::nonconvergence,
            "upper_quantile: upper bracket expansion exceeded 200 doublings");
    width *= 2.0;
    hi = std::min(center + width, support_upper());
  }

  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < kMaxBisectionSteps; ++i) {
    mid = 0.5 * (lo + hi);
    const double value = cdf(mid);
    if (std::fabs(value - target) <= kCdfTolerance) return mid;
    if (value < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= std::fabs(mid) * 1e-15 + 1e-300) break;
  }
  if (std::fabs(cdf(mid) - target) <= 1e-6) return mid;
  fail(Status::nonconvergence, "upper_quantile: bisection did not reach tolerance");
}

double predictive_quantile(const Predictive& pred, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "predictive_quantile: alpha must lie in (0,1)");
  return pred.upper_quantile(alpha);
}

// ---------------------------------------------------------------- normal

NormalPredictive::NormalPredictive(double mean, double variance)
    : mean_(mean), variance_(variance) {
  require(variance > 0.0, Status::invalid_argument,
          "NormalPredictive: variance must be positive");
}

double NormalPredictive::log_density(double y) const {
  return math::norm_log_pdf(y, mean_, variance_);
}

double NormalPredictive::cdf(double y) const {
  return math::norm_cdf((y - mean_) / std::sqrt(variance_));
}

double NormalPredictive::upper_quantile(double alpha) const {
  return mean_ + std::sqrt(variance_) * math::norm_upper_quantile(alpha);
}

double NormalPredictive::bracket_width() const { return std::sqrt(variance_); }

// ------------------------------------------------------------- student t

StudentTLocationScale::StudentTLocationScale(double df, double location, double scale)
    : df_(df), location_(location), scale_(scale) {
  require(df > 0.0, Status::invalid_argument,
          "StudentTLocationScale: df must be positive");
  require(scale > 0.0, Status::invalid_argument,
          "StudentTLocationScale: scale must be positive");
}

double StudentTLocationScale::log_density(double y) const {
  const double z = (y - location_) / scale_;
  const double half = 0.5 * (df_ + 1.0);
  return std::lgamma(half) - std::lgamma(0.5 * df_) -
         0.5 * std::log(df_ * 3.14159265358979323846) - std::log(scale_) -
         half * std::log1p(z * z / df_);
}

double StudentTLocationScale::cdf(double y) const {
  return math::student_t_cdf((y - location_) / scale_, df_);
}

// ------------------------------------------------------ generalized beta'

GeneralizedBetaPrime::GeneralizedBetaPrime(double c, double d, double p, double q)
    : c_(c), d_(d), p_(p), q_(q) {
  require(c > 0.0 && d > 0.0 && p > 0.0 && q > 0.0, Status::invalid_argument,
          "GeneralizedBetaPrime: all parameters must be strictly positive");
  log_norm_ = std::log(c_) - std::log(d_) - math::log_beta(p_, q_);
}

double GeneralizedBetaPrime::log_density(double y) const {
  if (!(y > 0.0)) return -kInf;
  const double u = c_ * (std::log(y) - std::log(d_));  // log (y/d)^c
  // log(1 + e^u), stable for large |u|
  const double log1pt = (u > 0.0) ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
  return log_norm_ + (c_ * p_ - 1.0) * (std::log(y) - std::log(d_)) - (p_ + q_) * log1pt;
}

double GeneralizedBetaPrime::cdf(double y) const {
  if (!(y > 0.0)) return 0.0;
  const double u = c_ * (std::log(y) - std::log(d_));
  const double x = 1.0 / (1.0 + std::exp(-u));  // t/(1+t) for t = (y/d)^c
  return math::incomplete_beta(p_, q_, x);
}

// ---------------------------------------------------------- exp transform

ExpTransformedPredictive::ExpTransformedPredictive(std::shared_ptr<const Predictive> base)
    : base_(std::move(base)) {
  require(base_ != nullptr, Status::invalid_argument,
          "ExpTransformedPredictive: base predictive required");
}

double ExpTransformedPredictive::log_density(double y) const {
  if (!(y > 0.0)) return -kInf;
  const double x = std::log(y);
  return base_->log_density(x) - x;
}

double ExpTransformedPredictive::cdf(double y) const {
  if (!(y > 0.0)) return 0.0;
  return base_->cdf(std::log(y));
}

double ExpTransformedPredictive::upper_quantile(double alpha) const {
  return std::exp(base_->upper_quantile(alpha));
}

double ExpTransformedPredictive::bracket_center() const {
  return std::exp(base_->upper_quantile(0.5));
}

double ExpTransformedPredictive::bracket_width() const {
  return std::max(bracket_center(), 1.0);
}

// ----------------------------------------------------------------- curve

PredictiveCurve::PredictiveCurve(std::vector<double> grid, std::vector<double> density)
    : grid_(std::move(grid)), density_(std::move(density)) {
  require(grid_.size() >= 2, Status::invalid_argument,
          "PredictiveCurve: grid needs at least two points");
  require(grid_.size() == density_.size(), Status::shape_mismatch,
          "PredictiveCurve: grid and density sizes differ");
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    require(grid_[i + 1] > grid_[i], Status::invalid_argument,
            "PredictiveCurve: grid must be strictly increasing");
  }
  cumulative_.resize(grid_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    require(density_[i] >= 0.0 && density_[i + 1] >= 0.0, Status::invalid_argument,
            "PredictiveCurve: density must be nonnegative");
    const double h = grid_[i + 1] - grid_[i];
    cumulative_[i + 1] = cumulative_[i] + 0.5 * h * (density_[i] + density_[i + 1]);
  }
  normalization_ = cumulative_.back();
  require(normalization_ > 0.0 && std::isfinite(normalization_),
          Status::degenerate_support,
          "PredictiveCurve: density integrates to zero on the grid");
}

double PredictiveCurve::raw_at(double y) const {
  if (y < grid_.front() || y > grid_.back()) return 0.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), y);
  std::size_t i = (it == grid_.begin()) ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
  if (i + 1 >= grid_.size()) i = grid_.size() - 2;
  const double t = (y - grid_[i]) / (grid_[i + 1] - grid_[i]);
  return density_[i] + t * (density_[i + 1] - density_[i]);
}

double PredictiveCurve::log_density(double y) const {
  const double value = raw_at(y);
  if (value <= 0.0) return -kInf;
  return std::log(value) - std::log(normalization_);
}

double PredictiveCurve::cdf(double y) const {
  if (y <= grid_.front()) return 0.0;
  if (y >= grid_.back()) return 1.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), y);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  const double x = y - grid_[i];
  const double h = grid_[i + 1] - grid_[i];
  const double slope = (density_[i + 1] - density_[i]) / h;
  const double partial = density_[i] * x + 0.5 * slope * x * x;
  return (cumulative_[i] + partial) / normalization_;
}

double PredictiveCurve::upper_quantile(double alpha) const {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "upper_quantile: alpha must lie in (0,1)");
  const double target = (1.0 - alpha) * normalization_;
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.begin()) return grid_.front();
  if (it == cumulative_.end()) return grid_.back();
  const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  const double rem = target - cumulative_[i];
  const double h = grid_[i + 1] - grid_[i];
  const double d0 = density_[i];
  const double slope = (density_[i + 1] - d0) / h;
  double x;
  if (std::fabs(slope) * h < 1e-14 * std::max(d0, 1e-300)) {
    x = (d0 > 0.0) ? rem / d0 : 0.0;
  } else {
    const double disc = std::max(d0 * d0 + 2.0 * slope * rem, 0.0);
    x = (-d0 + std::sqrt(disc)) / slope;
  }
  x = std::clamp(x, 0.0, h);
  return grid_[i] + x;
}

double PredictiveCurve::bracket_center() const {
  return 0.5 * (grid_.front() + grid_.back());
}

double PredictiveCurve::bracket_width() const {
  return 0.5 * (grid_.back() - grid_.front());
}

// ------------------------------------------------------------ MC builder

PredictiveCurve mc_generalized_predictive(const PosteriorSampleSet& post,
                                          const LogDensityFn& log_density,
                                          double eta,
                                          std::span<const double> grid) {
  require(eta > 0.0, Status::invalid_argument,
          "mc_generalized_predictive: eta must be positive");
  require(!post.samples.empty(), Status::insufficient_data,
          "mc_generalized_predictive: at least one posterior sample required");
  require(grid.size() >= 2, Status::invalid_argument,
          "mc_generalized_predictive: grid needs at least two points");
  const std::size_t dim = post.samples.front().size();
  for (const auto& theta : post.samples) {
    require(theta.size() == dim, Status::shape_mismatch,
            "mc_generalized_predictive: posterior samples differ in dimension");
  }

  const double log_m = std::log(static_cast<double>(post.samples.size()));
  std::vector<double> logf(grid.size());
  std::vector<double> scratch(post.samples.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double y = grid[j];
    double mx = -kInf;
    for (std::size_t m = 0; m < post.samples.size(); ++m) {
      const double v = eta * log_density(post.samples[m], y);
      scratch[m] = v;
      if (v > mx) mx = v;
    }
    if (!std::isfinite(mx)) {
      logf[j] = -kInf;
      continue;
    }
    double sum = 0.0;
    for (const double v : scratch) sum += std::exp(v - mx);
    logf[j] = mx + std::log(sum) - log_m;
  }

  const double shift = *std::max_element(logf.begin(), logf.end());
  require(std::isfinite(shift), Status::degenerate_support,
          "mc_generalized_predictive: density is zero on the whole grid");
  std::vector<double> density(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    density[j] = std::isfinite(logf[j]) ? std::exp(logf[j] - shift) : 0.0;
  }
  return PredictiveCurve(std::vector<double>(grid.begin(), grid.end()), std::move(density));
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  require(count >= 2, Status::invalid_argument, "linspace: need at least two points");
  require(hi > lo, Status::invalid_argument, "linspace: hi must exceed lo");
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

std::vector<double> default_grid(const Predictive& ordinary, std::size_t points) {
  const double lo = ordinary.upper_quantile(1.0 - 1e-5);
  double hi = ordinary.upper_quantile(1e-5);
  hi += 0.25 * (hi - lo);
  return linspace(lo, hi, points);
}

double student_t_upper_quantile(double df, double alpha) {
  return StudentTLocationScale(df, 0.0, 1.0).upper_quantile(alpha);
}

}  // namespace gprc
