#include "resampling.hpp"

#include <cmath>

#include "error.hpp"

namespace gprc {

math::Rng replicate_rng(const BootstrapPlan& plan, std::size_t b) {
  return math::Rng(math::derive_seed(plan.seed, {math::kStreamBootstrap, b}));
}

std::vector<std::vector<std::size_t>> iid_resample_indices(std::size_t n,
                                                           std::size_t draws_per_replicate,
                                                           const BootstrapPlan& plan) {
  require(n >= 1, Status::insufficient_data, "resample: empty data");
  require(plan.replicates >= 1, Status::invalid_argument, "resample: B must be >= 1");
  std::vector<std::vector<std::size_t>> out(plan.replicates);
  for (std::size_t b = 0; b < plan.replicates; ++b) {
    math::Rng rng = replicate_rng(plan, b);
    auto& idx = out[b];
    idx.resize(draws_per_replicate);
    for (auto& value : idx) value = rng.uniform_index(n);
  }
  return out;
}

std::vector<std::vector<double>> iid_bootstrap(std::span<const double> data,
                                               const BootstrapPlan& plan) {
  const auto indices = iid_resample_indices(data.size(), data.size(), plan);
  std::vector<std::vector<double>> out(indices.size());
  for (std::size_t b = 0; b < indices.size(); ++b) {
    auto& rep = out[b];
    rep.reserve(data.size());
    for (const std::size_t i : indices[b]) rep.push_back(data[i]);
  }
  return out;
}

std::vector<RegressionData> paired_bootstrap(const RegressionData& data,
                                             const BootstrapPlan& plan) {
  const std::size_t n = data.n();
  require(data.x.rows() == n, Status::shape_mismatch,
          "paired_bootstrap: design and response lengths differ");
  const auto indices = iid_resample_indices(n, n, plan);
  std::vector<RegressionData> out(indices.size());
  for (std::size_t b = 0; b < indices.size(); ++b) {
    RegressionData rep;
    rep.x = math::Matrix(n, data.q());
    rep.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t src = indices[b][i];
      for (std::size_t j = 0; j < data.q(); ++j) rep.x(i, j) = data.x(src, j);
      rep.y[i] = data.y[src];
    }
    out[b] = std::move(rep);
  }
  return out;
}

std::vector<std::vector<double>> residual_bootstrap(std::span<const double> fitted,
                                                    std::span<const double> residuals,
                                                    const BootstrapPlan& plan) {
  require(fitted.size() == residuals.size(), Status::shape_mismatch,
          "residual_bootstrap: fitted and residual lengths differ");
  const std::size_t n = fitted.size();
  const auto indices = iid_resample_indices(n, n, plan);
  std::vector<std::vector<double>> out(indices.size());
  for (std::size_t b = 0; b < indices.size(); ++b) {
    auto& rep = out[b];
    rep.resize(n);
    for (std::size_t i = 0; i < n; ++i) rep[i] = fitted[i] + residuals[indices[b][i]];
  }
  return out;
}

std::size_t default_block_length(std::size_t n) {
  const double root = std::cbrt(static_cast<double>(n));
  const auto len = static_cast<std::size_t>(std::lround(root));
  return len < 1 ? 1 : len;
}

std::vector<std::vector<double>> block_bootstrap(std::span<const double> series,
                                                 const BootstrapPlan& plan) {
  const std::size_t n = series.size();
  require(n >= 1, Status::insufficient_data, "block_bootstrap: empty series");
  require(plan.block_length.has_value(), Status::invalid_argument,
          "block_bootstrap: block length required");
  const std::size_t len = *plan.block_length;
  require(len >= 1 && len <= n, Status::invalid_argument,
          "block_bootstrap: block length must lie in [1, n]");
  const std::size_t blocks = (n + len - 1) / len;  // ceil(n/len)
  const std::size_t starts = n - len + 1;
  std::vector<std::vector<double>> out(plan.replicates);
  for (std::size_t b = 0; b < plan.replicates; ++b) {
    math::Rng rng = replicate_rng(plan, b);
    auto& rep = out[b];
    rep.reserve(blocks * len);
    for (std::size_t j = 0; j < blocks; ++j) {
      const std::size_t s = rng.uniform_index(starts);
      for (std::size_t k = 0; k < len && rep.size() < blocks * len; ++k) {
        rep.push_back(series[s + k]);
      }
    }
    rep.resize(n);
  }
  return out;
}

std::vector<double> spatial_whiten(const math::Matrix& chol_n, double mu,
                                   std::span<const double> y) {
  std::vector<double> centered(y.begin(), y.end());
  for (auto& value : centered) value -= mu;
  return math::forward_solve(chol_n, centered);
}

std::vector<double> spatial_recolor(const math::Matrix& chol_np1, double mu,
                                    std::span<const double> residuals,
                                    std::span<const std::size_t> indices) {
  const std::size_t m = chol_np1.rows();
  require(indices.size() == m, Status::shape_mismatch,
          "spatial_recolor: need one residual index per output entry");
  std::vector<double> eps(m);
  for (std::size_t i = 0; i < m; ++i) {
    require(indices[i] < residuals.size(), Status::invalid_argument,
            "spatial_recolor: residual index out of range");
    eps[i] = residuals[indices[i]];
  }
  std::vector<double> field(m, mu);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += chol_np1(i, k) * eps[k];
    field[i] += s;
  }
  return field;
}

std::vector<std::vector<double>> spatial_semiparametric_bootstrap(
    std::span<const Point> sites, std::span<const double> y,
    const SpatialTheta& theta_hat, const BootstrapPlan& plan) {
  const std::size_t n = y.size();
  require(n >= 1, Status::insufficient_data, "spatial bootstrap: empty field");
  require(sites.size() == n + 1, Status::shape_mismatch,
          "spatial bootstrap: need n observation sites plus the target");

  const math::Matrix cov_n =
      exp_covariance_matrix(theta_hat, sites.subspan(0, n));
  const math::Matrix chol_n = math::cholesky_lower(cov_n);
  const std::vector<double> residuals = spatial_whiten(chol_n, theta_hat.mu, y);

  const math::Matrix cov_np1 = exp_covariance_matrix(theta_hat, sites);
  const math::Matrix chol_np1 = math::cholesky_lower(cov_np1);

  std::vector<std::vector<double>> out(plan.replicates);
  std::vector<std::size_t> indices(n + 1);
  for (std::size_t b = 0; b < plan.replicates; ++b) {
    math::Rng rng = replicate_rng(plan, b);
    for (auto& idx : indices) idx = rng.uniform_index(n);
    out[b] = spatial_recolor(chol_np1, theta_hat.mu, residuals, indices);
  }
  return out;
}

}  // namespace gprc
