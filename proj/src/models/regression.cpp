#include "models/regression.hpp"

#include <cmath>

#include "error.hpp"
#include "math/normal.hpp"

namespace gprc::models {

namespace {

struct RegressionState final : RegressionAdapter::State {
  NigLinearPosterior post;
  std::vector<double> eval_fitted;
  std::vector<double> eval_weight;
};

const RegressionState& as_state(const RegressionAdapter::State& state) {
  const auto* typed = dynamic_cast<const RegressionState*>(&state);
  require(typed != nullptr, Status::invalid_argument,
          "regression model: state from a different adapter");
  return *typed;
}

}  // namespace

StudentTLocationScale regression_generalized_predictive(
    const RegressionData& data, std::span<const double> x_new, double eta,
    const std::optional<NigLinearPrior>& prior) {
  require(x_new.size() == data.q(), Status::shape_mismatch,
          "regression predictive: covariate dimension mismatch");
  const NigLinearPrior effective = prior.value_or(vague_linear_prior(data.q()));
  const auto post = NigLinearPosterior::from_data(effective, data.x, data.y);
  return post.generalized_predictive(x_new, eta);
}

double regression_plugin_limit(const RegressionData& data,
                               std::span<const double> x_new, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "regression_plugin_limit: alpha must lie in (0,1)");
  require(x_new.size() == data.q(), Status::shape_mismatch,
          "regression_plugin_limit: covariate dimension mismatch");
  const LeastSquaresFit fit = least_squares(data.x, data.y);
  return math::dot(x_new, fit.coef) + math::norm_upper_quantile(alpha) * fit.sigma_mle;
}

std::unique_ptr<RegressionAdapter::State> ConjugateRegressionModel::fit(
    const RegressionData& data, const math::Matrix& eval_x) const {
  require(eval_x.cols() == data.q(), Status::shape_mismatch,
          "regression model: evaluation design dimension mismatch");
  auto state = std::make_unique<RegressionState>();
  state->post = NigLinearPosterior::from_data(prior_, data.x, data.y);
  const std::size_t m = eval_x.rows();
  state->eval_fitted.resize(m);
  state->eval_weight.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = eval_x.row(i);
    state->eval_fitted[i] = state->post.fitted(row);
    state->eval_weight[i] = state->post.predictive_weight(row);
  }
  return state;
}

void ConjugateRegressionModel::eval_quantiles(std::span<const State* const> states,
                                              double eta, double alpha,
                                              math::Matrix& out) const {
  if (states.empty()) return;
  const auto& first = as_state(*states[0]);
  require(out.rows() == states.size() && out.cols() == first.eval_fitted.size(),
          Status::shape_mismatch, "regression model: output size mismatch");
  const double df = first.post.df(eta);
  require(df > 0.0, Status::invalid_argument,
          "regression model: 2*a_n + eta - 1 must be positive");
  const double tq = student_t_upper_quantile(df, alpha);
  for (std::size_t b = 0; b < states.size(); ++b) {
    const auto& s = as_state(*states[b]);
    require(s.post.n() == first.post.n(), Status::invalid_argument,
            "regression model: mixed sample sizes in one batch");
    const double two_bn_over_df = 2.0 * s.post.rate() / df;
    for (std::size_t i = 0; i < s.eval_fitted.size(); ++i) {
      const double scale = std::sqrt((1.0 / eta + s.eval_weight[i]) * two_bn_over_df);
      out(b, i) = s.eval_fitted[i] + scale * tq;
    }
  }
}

double ConjugateRegressionModel::quantile_at(const State& state,
                                             std::span<const double> x_new, double eta,
                                             double alpha) const {
  const auto& s = as_state(state);
  return s.post.generalized_predictive(x_new, eta).upper_quantile(alpha);
}

}  // namespace gprc::models
