#include "models/spatial.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "math/normal.hpp"
#include "math/rng.hpp"

namespace gprc::models {

namespace {

constexpr std::size_t kVariogramBins = 15;
constexpr std::size_t kPhiGridSize = 64;
constexpr double kSigma2Floor = 1e-12;

// Correlation-scale kriging scaffolding: the factorization and the target row
// depend only on the site geometry, not on the observed field.
struct KrigingCore {
  math::Matrix chol_corr;           // lower factor of R over the n sites
  std::vector<double> kriging_row;  // R^{-1} r
  std::vector<double> rinv_one;     // R^{-1} 1
  double mean_coef = 0.0;           // B = 1 - r^T R^{-1} 1
  double cond_weight = 0.0;         // w = (1 + tau) - r^T R^{-1} r
  double s11 = 0.0;                 // 1^T R^{-1} 1
};

KrigingCore build_core(std::span<const Point> sites, Point s_new, double phi, double tau) {
  require(!sites.empty(), Status::insufficient_data, "spatial model: no sites");
  require(phi > 0.0 && tau >= 0.0, Status::invalid_argument,
          "spatial model: invalid covariance parameters");
  const std::size_t n = sites.size();
  KrigingCore core;
  core.chol_corr = math::cholesky_lower(exp_correlation_matrix(phi, tau, sites));
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = distance(sites[i], s_new);
    r[i] = std::exp(-d / phi) + ((d == 0.0) ? tau : 0.0);
  }
  core.kriging_row = math::cholesky_solve(core.chol_corr, r);
  const std::vector<double> ones(n, 1.0);
  core.rinv_one = math::cholesky_solve(core.chol_corr, ones);
  core.mean_coef = 1.0;
  core.s11 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    core.mean_coef -= core.kriging_row[i];
    core.s11 += core.rinv_one[i];
  }
  core.cond_weight = 1.0 + tau - math::dot(core.kriging_row, r);
  return core;
}

struct GpPosterior {
  double a = 0.0;  // r^T R^{-1} y
  double m_n = 0.0;
  double v_n = 0.0;
  double a_n = 0.0;
  double b_n = 0.0;
};

GpPosterior gp_posterior(const KrigingCore& core, const GpNigPrior& prior,
                         std::span<const double> y) {
  const std::size_t n = y.size();
  require(prior.mean_scale > 0.0 && prior.shape > 0.0 && prior.rate > 0.0,
          Status::invalid_argument, "spatial model: invalid prior");
  GpPosterior post;
  post.a = math::dot(core.kriging_row, y);
  const double s1y = math::dot(core.rinv_one, y);
  const std::vector<double> rinv_y = math::cholesky_solve(core.chol_corr, y);
  const double syy = math::dot(rinv_y, y);
  post.v_n = 1.0 / (1.0 / prior.mean_scale + core.s11);
  post.m_n = post.v_n * (prior.mean / prior.mean_scale + s1y);
  post.a_n = prior.shape + 0.5 * static_cast<double>(n);
  post.b_n = prior.rate +
             0.5 * (syy + prior.mean * prior.mean / prior.mean_scale -
                    post.m_n * post.m_n / post.v_n);
  require(post.b_n > 0.0, Status::invalid_argument,
          "spatial model: posterior rate is not positive");
  return post;
}

StudentTLocationScale closed_form(double mean_coef, double cond_weight,
                                  const GpPosterior& post, double eta) {
  require(eta > 0.0, Status::invalid_argument, "spatial model: eta must be positive");
  const double df = 2.0 * post.a_n + eta - 1.0;
  require(df > 0.0, Status::invalid_argument,
          "spatial model: 2*a_n + eta - 1 must be positive");
  const double b2vn = mean_coef * mean_coef * post.v_n;
  const double scale2 = (cond_weight / eta + b2vn) * 2.0 * post.b_n / df;
  return StudentTLocationScale(df, post.a + mean_coef * post.m_n, std::sqrt(scale2));
}

}  // namespace

KrigingMoments kriging_moments(const SpatialTheta& theta, std::span<const Point> sites,
                               std::span<const double> y, Point s_new) {
  require(sites.size() == y.size(), Status::shape_mismatch,
          "kriging_moments: sites and values differ in length");
  const KrigingCore core = build_core(sites, s_new, theta.phi, theta.tau);
  KrigingMoments result;
  const double ry = math::dot(core.kriging_row, y);
  result.mean = theta.mu + ry - theta.mu * (1.0 - core.mean_coef);
  result.variance = std::max(theta.sigma2 * core.cond_weight, 0.0);
  return result;
}

SpatialTheta variogram_fit(std::span<const Point> sites, std::span<const double> y) {
  const std::size_t n = sites.size();
  require(n == y.size(), Status::shape_mismatch,
          "variogram_fit: sites and values differ in length");
  require(n >= 10, Status::insufficient_data,
          "variogram_fit: need at least 10 locations");

  double mu = 0.0;
  for (const double value : y) mu += value;
  mu /= static_cast<double>(n);

  double max_dist = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      max_dist = std::max(max_dist, distance(sites[i], sites[j]));
    }
  }
  require(max_dist > 0.0, Status::insufficient_data,
          "variogram_fit: all locations coincide");

  const double cutoff = 0.5 * max_dist;
  const double width = cutoff / static_cast<double>(kVariogramBins);
  std::vector<double> sq_sum(kVariogramBins, 0.0);
  std::vector<double> count(kVariogramBins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(sites[i], sites[j]);
      if (d <= 0.0 || d > cutoff) continue;
      auto bin = static_cast<std::size_t>(d / width);
      if (bin >= kVariogramBins) bin = kVariogramBins - 1;
      const double diff = y[i] - y[j];
      sq_sum[bin] += diff * diff;
      count[bin] += 1.0;
    }
  }

  std::vector<double> h;
  std::vector<double> gamma_hat;
  std::vector<double> pairs;
  for (std::size_t b = 0; b < kVariogramBins; ++b) {
    if (count[b] <= 0.0) continue;
    h.push_back((static_cast<double>(b) + 0.5) * width);
    gamma_hat.push_back(sq_sum[b] / (2.0 * count[b]));
    pairs.push_back(count[b]);
  }
  require(h.size() >= 3, Status::insufficient_data,
          "variogram_fit: fewer than 3 nonempty distance bins");

  // Profile the range over a log grid; nugget and sill are linear given phi.
  const double phi_lo = cutoff / 100.0;
  const double phi_hi = 2.0 * cutoff;
  double best_sse = std::numeric_limits<double>::infinity();
  double phi_hat = phi_lo;
  double nugget = 0.0;         // A = sigma2 * tau
  double sill = kSigma2Floor;  // B = sigma2
  for (std::size_t g = 0; g < kPhiGridSize; ++g) {
    const double t = static_cast<double>(g) / static_cast<double>(kPhiGridSize - 1);
    const double phi = phi_lo * std::pow(phi_hi / phi_lo, t);
    double sw = 0.0, swg = 0.0, swgg = 0.0, swy = 0.0, swgy = 0.0;
    for (std::size_t b = 0; b < h.size(); ++b) {
      const double gshape = 1.0 - std::exp(-h[b] / phi);
      sw += pairs[b];
      swg += pairs[b] * gshape;
      swgg += pairs[b] * gshape * gshape;
      swy += pairs[b] * gamma_hat[b];
      swgy += pairs[b] * gshape * gamma_hat[b];
    }
    const double det = sw * swgg - swg * swg;
    double a;
    double b_coef;
    if (std::fabs(det) < 1e-14 * sw * swgg + 1e-300) {
      a = 0.0;
      b_coef = (swgg > 0.0) ? swgy / swgg : kSigma2Floor;
    } else {
      b_coef = (sw * swgy - swg * swy) / det;
      a = (swy - b_coef * swg) / sw;
    }
    if (a < 0.0) {
      a = 0.0;
      b_coef = (swgg > 0.0) ? swgy / swgg : kSigma2Floor;
    }
    if (b_coef < kSigma2Floor) {
      b_coef = kSigma2Floor;
      a = std::max((swy - b_coef * swg) / sw, 0.0);
    }
    double sse = 0.0;
    for (std::size_t b = 0; b < h.size(); ++b) {
      const double gshape = 1.0 - std::exp(-h[b] / phi);
      const double r = gamma_hat[b] - a - b_coef * gshape;
      sse += pairs[b] * r * r;
    }
    if (sse < best_sse) {
      best_sse = sse;
      phi_hat = phi;
      nugget = a;
      sill = b_coef;
    }
  }

  // A near-pure-nugget fit would send tau = nugget/sill to extremes and the
  // conditional variance with it; keep at least 1% of the total variation on
  // the spatially structured component.  The relative floor preserves scale
  // equivariance.
  const double total = nugget + sill;
  if (sill < 0.01 * total) {
    sill = 0.01 * total;
    nugget = total - sill;
  }

  SpatialTheta theta;
  theta.mu = mu;
  theta.sigma2 = sill;
  theta.phi = phi_hat;
  theta.tau = nugget / sill;
  return theta;
}

PredictiveCurve gp_mc_predictive(std::span<const Point> sites, std::span<const double> y,
                                 Point s_new, double phi_hat, double tau_hat, double eta,
                                 const PosteriorSampleSet& mu_sigma2_draws,
                                 std::size_t grid_points) {
  require(sites.size() == y.size(), Status::shape_mismatch,
          "gp_mc_predictive: sites and values differ in length");
  require(!mu_sigma2_draws.samples.empty(), Status::insufficient_data,
          "gp_mc_predictive: no posterior draws");
  const KrigingCore core = build_core(sites, s_new, phi_hat, tau_hat);
  const double a = math::dot(core.kriging_row, y);
  const double b_coef = core.mean_coef;
  const double w = core.cond_weight;

  const LogDensityFn log_density = [a, b_coef, w](std::span<const double> theta,
                                                  double value) {
    return math::norm_log_pdf(value, a + b_coef * theta[0], theta[1] * w);
  };

  // Grid bounds from the ordinary (eta = 1) mixture.
  double lo0 = std::numeric_limits<double>::infinity();
  double hi0 = -lo0;
  double max_sd = 0.0;
  for (const auto& draw : mu_sigma2_draws.samples) {
    require(draw.size() == 2, Status::shape_mismatch,
            "gp_mc_predictive: draws must be (mu, sigma2) pairs");
    require(draw[1] > 0.0, Status::invalid_argument,
            "gp_mc_predictive: sigma2 draw must be positive");
    const double mean = a + b_coef * draw[0];
    lo0 = std::min(lo0, mean);
    hi0 = std::max(hi0, mean);
    max_sd = std::max(max_sd, std::sqrt(draw[1] * w));
  }
  const auto provisional = linspace(lo0 - 9.0 * max_sd, hi0 + 9.0 * max_sd, 2049);
  const PredictiveCurve ordinary =
      mc_generalized_predictive(mu_sigma2_draws, log_density, 1.0, provisional);
  const auto grid = default_grid(ordinary, grid_points);
  return mc_generalized_predictive(mu_sigma2_draws, log_density, eta, grid);
}

PredictiveCurve gp_generalized_predictive(std::span<const Point> sites,
                                          std::span<const double> y, Point s_new,
                                          double phi_hat, double tau_hat, double eta,
                                          const GpPredictiveOptions& options) {
  require(options.posterior_draws >= 1, Status::invalid_argument,
          "gp_generalized_predictive: need at least one posterior draw");
  require(sites.size() == y.size(), Status::shape_mismatch,
          "gp_generalized_predictive: sites and values differ in length");
  const KrigingCore core = build_core(sites, s_new, phi_hat, tau_hat);
  const GpPosterior post = gp_posterior(core, options.prior, y);
  math::Rng rng(math::derive_seed(options.seed, {math::kStreamPosterior}));
  PosteriorSampleSet draws;
  draws.samples.reserve(options.posterior_draws);
  for (std::size_t m = 0; m < options.posterior_draws; ++m) {
    const double sigma2 = rng.inverse_gamma(post.a_n, post.b_n);
    const double mu = rng.normal(post.m_n, std::sqrt(sigma2 * post.v_n));
    draws.samples.push_back({mu, sigma2});
  }
  return gp_mc_predictive(sites, y, s_new, phi_hat, tau_hat, eta, draws,
                          options.grid_points);
}

StudentTLocationScale gp_closed_form_predictive(std::span<const Point> sites,
                                                std::span<const double> y, Point s_new,
                                                double phi_hat, double tau_hat,
                                                double eta, const GpNigPrior& prior) {
  require(sites.size() == y.size(), Status::shape_mismatch,
          "gp_closed_form_predictive: sites and values differ in length");
  const KrigingCore core = build_core(sites, s_new, phi_hat, tau_hat);
  const GpPosterior post = gp_posterior(core, prior, y);
  return closed_form(core.mean_coef, core.cond_weight, post, eta);
}

double spatial_plugin_limit(std::span<const Point> sites, std::span<const double> y,
                            Point s_new, const SpatialTheta& theta_hat, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "spatial_plugin_limit: alpha must lie in (0,1)");
  const KrigingMoments moments = kriging_moments(theta_hat, sites, y, s_new);
  return moments.mean + math::norm_upper_quantile(alpha) * std::sqrt(moments.variance);
}

double spatial_bootstrap_limit(std::span<const std::vector<double>> boot_fields,
                               double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Status::domain_error,
          "spatial_bootstrap_limit: alpha must lie in (0,1)");
  require(!boot_fields.empty(), Status::insufficient_data,
          "spatial_bootstrap_limit: no bootstrap fields");
  std::vector<double> targets;
  targets.reserve(boot_fields.size());
  for (const auto& field : boot_fields) {
    require(!field.empty(), Status::shape_mismatch,
            "spatial_bootstrap_limit: empty replicate");
    targets.push_back(field.back());
  }
  std::sort(targets.begin(), targets.end());
  const double rank = std::ceil((1.0 - alpha) * static_cast<double>(targets.size()));
  auto k = static_cast<std::size_t>(std::max(rank, 1.0));
  if (k > targets.size()) k = targets.size();
  return targets[k - 1];
}

// --------------------------------------------------------------- adapter

namespace {

struct GpState final : SpatialAdapter::State {
  GpPosterior post;
};

const GpState& as_gp_state(const SpatialAdapter::State& state) {
  const auto* typed = dynamic_cast<const GpState*>(&state);
  require(typed != nullptr, Status::invalid_argument,
          "spatial model: state from a different adapter");
  return *typed;
}

}  // namespace

struct GpSpatialModel::Core : KrigingCore {};

GpSpatialModel::GpSpatialModel(std::vector<Point> sites_with_target, double phi_hat,
                               double tau_hat, GpNigPrior prior)
    : sites_(std::move(sites_with_target)), phi_(phi_hat), tau_(tau_hat), prior_(prior) {
  require(sites_.size() >= 2, Status::insufficient_data,
          "GpSpatialModel: need at least one observation site plus the target");
  const std::size_t n = sites_.size() - 1;
  core_ = std::make_shared<Core>();
  static_cast<KrigingCore&>(*core_) =
      build_core(std::span<const Point>(sites_.data(), n), sites_.back(), phi_, tau_);
}

std::unique_ptr<SpatialAdapter::State> GpSpatialModel::fit(
    std::span<const double> field) const {
  const std::size_t n = sites_.size() - 1;
  require(field.size() == n, Status::shape_mismatch,
          "GpSpatialModel: field length must match the observation sites");
  auto state = std::make_unique<GpState>();
  state->post = gp_posterior(*core_, prior_, field);
  return state;
}

void GpSpatialModel::quantiles(std::span<const State* const> states, double eta,
                               double alpha, std::span<double> out) const {
  require(states.size() == out.size(), Status::shape_mismatch,
          "GpSpatialModel: output size mismatch");
  require(eta > 0.0, Status::invalid_argument, "GpSpatialModel: eta must be positive");
  if (states.empty()) return;
  const auto& first = as_gp_state(*states[0]).post;
  const double df = 2.0 * first.a_n + eta - 1.0;
  require(df > 0.0, Status::invalid_argument,
          "GpSpatialModel: 2*a_n + eta - 1 must be positive");
  const double tq = student_t_upper_quantile(df, alpha);
  const double mean_coef = core_->mean_coef;
  const double cond_weight = core_->cond_weight;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& post = as_gp_state(*states[i]).post;
    const double b2vn = mean_coef * mean_coef * post.v_n;
    const double scale2 = (cond_weight / eta + b2vn) * 2.0 * post.b_n / df;
    out[i] = post.a + mean_coef * post.m_n + std::sqrt(scale2) * tq;
  }
}

StudentTLocationScale GpSpatialModel::predictive(const State& state, double eta) const {
  const auto& post = as_gp_state(state).post;
  return closed_form(core_->mean_coef, core_->cond_weight, post, eta);
}

}  // namespace gprc::models
