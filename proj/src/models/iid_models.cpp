#include "models/iid_models.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"
#include "math/normal.hpp"

namespace gprc::models {

namespace {

struct GammaState final : IidAdapter::State {
  GammaPosterior post;
};

struct NormalState final : IidAdapter::State {
  NormalKnownVarPosterior post;
};

struct NigState final : IidAdapter::State {
  NIGPosterior post;
};

template <typename StateT, typename AdapterState>
const StateT& as(const AdapterState& state) {
  const auto* typed = dynamic_cast<const StateT*>(&state);
  require(typed != nullptr, Status::invalid_argument,
          "iid model: state from a different adapter");
  return *typed;
}

}  // namespace

// ------------------------------------------------------------------ gamma

std::unique_ptr<IidAdapter::State> GammaIidModel::fit(std::span<const double> data) const {
  require(!data.empty(), Status::insufficient_data, "gamma model: empty data");
  auto state = std::make_unique<GammaState>();
  state->post = gamma_posterior(prior_shape_, prior_rate_, model_shape_, data);
  return state;
}

GeneralizedBetaPrime GammaIidModel::predictive(const State& state, double eta) const {
  return gamma_generalized_predictive(as<GammaState>(state).post, eta);
}

void GammaIidModel::quantiles(std::span<const State* const> states, double eta,
                              double alpha, std::span<double> out) const {
  require(states.size() == out.size(), Status::shape_mismatch,
          "gamma model: output size mismatch");
  if (states.empty()) return;
  // All replicates share n, hence (p, q); the beta-prime quantile scales with
  // d = b_n / eta, so a single unit-scale inversion serves the whole batch.
  const auto& first = as<GammaState>(*states[0]).post;
  const double p = eta * (model_shape_ - 1.0) + 1.0;
  const double q = first.shape + eta - 1.0;
  require(q > 0.0, Status::invalid_argument,
          "gamma model: a_n + eta - 1 must be positive");
  const double unit = GeneralizedBetaPrime(1.0, 1.0, p, q).upper_quantile(alpha);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& post = as<GammaState>(*states[i]).post;
    require(post.shape == first.shape, Status::invalid_argument,
            "gamma model: mixed posterior shapes in one batch");
    out[i] = (post.rate / eta) * unit;
  }
}

// ----------------------------------------------------------- normal (known var)

std::unique_ptr<IidAdapter::State> NormalKnownVarModel::fit(
    std::span<const double> data) const {
  require(!data.empty(), Status::insufficient_data, "normal model: empty data");
  auto state = std::make_unique<NormalState>();
  state->post = normal_knownvar_posterior(prior_mean_, prior_variance_, sigma2_, data);
  return state;
}

NormalPredictive NormalKnownVarModel::predictive(const State& state, double eta) const {
  const auto& post = as<NormalState>(state).post;
  return normal_knownvar_generalized_predictive(post.mean, post.variance, sigma2_, eta);
}

void NormalKnownVarModel::quantiles(std::span<const State* const> states, double eta,
                                    double alpha, std::span<double> out) const {
  require(states.size() == out.size(), Status::shape_mismatch,
          "normal model: output size mismatch");
  require(eta > 0.0, Status::invalid_argument, "normal model: eta must be positive");
  if (states.empty()) return;
  const double z = math::norm_upper_quantile(alpha);
  const double v_n = as<NormalState>(*states[0]).post.variance;
  const double spread = std::sqrt(v_n + sigma2_ / eta) * z;
  for (std::size_t i = 0; i < states.size(); ++i) {
    out[i] = as<NormalState>(*states[i]).post.mean + spread;
  }
}

// ------------------------------------------------------------ NIG / log-normal

std::unique_ptr<IidAdapter::State> NormalNigModel::fit(std::span<const double> data) const {
  auto state = std::make_unique<NigState>();
  if (log_scale_) {
    std::vector<double> logs(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      require(data[i] > 0.0, Status::domain_error,
              "log-normal model: data value at index " + std::to_string(i) +
                  " is not positive");
      logs[i] = std::log(data[i]);
    }
    state->post = nig_posterior(m_, k_, a_, b_, logs);
  } else {
    state->post = nig_posterior(m_, k_, a_, b_, data);
  }
  return state;
}

const NIGPosterior& NormalNigModel::posterior(const State& state) const {
  return as<NigState>(state).post;
}

void NormalNigModel::quantiles(std::span<const State* const> states, double eta,
                               double alpha, std::span<double> out) const {
  require(states.size() == out.size(), Status::shape_mismatch,
          "NIG model: output size mismatch");
  require(eta > 0.0, Status::invalid_argument, "NIG model: eta must be positive");
  if (states.empty()) return;
  const auto& first = as<NigState>(*states[0]).post;
  const double df = 2.0 * first.a_n + eta - 1.0;
  require(df > 0.0, Status::invalid_argument,
          "NIG model: 2*a_n + eta - 1 must be positive");
  const double tq = student_t_upper_quantile(df, alpha);
  const double nk1 = static_cast<double>(first.n) * first.k + 1.0;
  const double factor = std::sqrt((1.0 / eta + first.k / nk1) * 2.0 / df);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& post = as<NigState>(*states[i]).post;
    require(post.n == first.n, Status::invalid_argument,
            "NIG model: mixed sample sizes in one batch");
    const double q = post.m_n + factor * std::sqrt(post.b_n) * tq;
    out[i] = log_scale_ ? std::exp(q) : q;
  }
}

}  // namespace gprc::models
