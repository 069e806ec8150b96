#include "models/ar1.hpp"

#include <cmath>

#include "error.hpp"
#include "math/normal.hpp"

namespace gprc::models {

namespace {

void check_series(std::span<const double> series) {
  require(series.size() >= 3, Status::insufficient_data,
          "ar1: need at least three observations");
  const double first = series.front();
  bool constant = true;
  for (const double value : series) {
    if (value != first) {
      constant = false;
      break;
    }
  }
  require(!constant, Status::singular, "ar1: constant series has no regressor variance");
}

struct Ar1State final : TimeSeriesAdapter::State {
  NigLinearPosterior post;
};

}  // namespace

RegressionData ar1_lag_pairs(std::span<const double> series) {
  const std::size_t m = series.size() - 1;
  RegressionData data;
  data.x = math::Matrix(m, 1);
  data.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    data.x(i, 0) = series[i];
    data.y[i] = series[i + 1];
  }
  return data;
}

StudentTLocationScale ar1_generalized_predictive(
    std::span<const double> series, double y_last, double eta,
    const std::optional<NigLinearPrior>& prior) {
  check_series(series);
  const RegressionData pairs = ar1_lag_pairs(series);
  const NigLinearPrior effective = prior.value_or(vague_linear_prior(1));
  const auto post = NigLinearPosterior::from_data(effective, pairs.x, pairs.y);
  const double x_new[1] = {y_last};
  return post.generalized_predictive(x_new, eta);
}

double ar1_plugin_limit(std::span<const double> series, double y_last, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "ar1_plugin_limit: alpha must lie in (0,1)");
  check_series(series);
  double sxx = 0.0;
  double sxy = 0.0;
  const std::size_t m = series.size() - 1;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += series[i] * series[i];
    sxy += series[i] * series[i + 1];
  }
  require(sxx > 0.0, Status::singular, "ar1_plugin_limit: zero regressor variance");
  const double rho = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = series[i + 1] - rho * series[i];
    rss += r * r;
  }
  const double sigma = std::sqrt(rss / static_cast<double>(m));
  return rho * y_last + math::norm_upper_quantile(alpha) * sigma;
}

std::unique_ptr<TimeSeriesAdapter::State> Ar1ConjugateModel::fit(
    std::span<const double> series) const {
  check_series(series);
  const RegressionData pairs = ar1_lag_pairs(series);
  auto state = std::make_unique<Ar1State>();
  state->post = NigLinearPosterior::from_data(prior_, pairs.x, pairs.y);
  return state;
}

void Ar1ConjugateModel::quantiles_at(std::span<const State* const> states,
                                     std::span<const double> y_prev, double eta,
                                     double alpha, math::Matrix& out) const {
  if (states.empty()) return;
  require(out.rows() == states.size() && out.cols() == y_prev.size(),
          Status::shape_mismatch, "ar1 model: output size mismatch");
  const auto* first = dynamic_cast<const Ar1State*>(states[0]);
  require(first != nullptr, Status::invalid_argument,
          "ar1 model: state from a different adapter");
  const double df = first->post.df(eta);
  require(df > 0.0, Status::invalid_argument,
          "ar1 model: 2*a_n + eta - 1 must be positive");
  const double tq = student_t_upper_quantile(df, alpha);
  const double unit[1] = {1.0};
  for (std::size_t b = 0; b < states.size(); ++b) {
    const auto* typed = dynamic_cast<const Ar1State*>(states[b]);
    require(typed != nullptr, Status::invalid_argument,
            "ar1 model: state from a different adapter");
    const auto& post = typed->post;
    require(post.n() == first->post.n(), Status::invalid_argument,
            "ar1 model: mixed sample sizes in one batch");
    const double rho = post.coef_mean()[0];
    const double two_bn_over_df = 2.0 * post.rate() / df;
    const double v_n = post.predictive_weight(unit);  // weight at y' is y'^2 v_n
    for (std::size_t i = 0; i < y_prev.size(); ++i) {
      const double weight = y_prev[i] * y_prev[i] * v_n;
      out(b, i) = rho * y_prev[i] + std::sqrt((1.0 / eta + weight) * two_bn_over_df) * tq;
    }
  }
}

}  // namespace gprc::models
