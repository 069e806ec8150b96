#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "calibrate.hpp"
#include "models/spatial.hpp"
#include "simgen.hpp"

namespace gprc::experiment {

enum class Regime { iid, regression, timeseries, spatial };

enum class ScenarioId {
  gamma_true,
  normal_scale,
  lognormal,
  pareto,
  gev,
  laplace_normal,
  regression_chisq,
  regression_gev,
  ts1,
  ts2,
  ts3,
  sp1,
  sp2,
  sp3,
};

const char* scenario_name(ScenarioId id);
ScenarioId scenario_from_name(const std::string& name);
Regime scenario_regime(ScenarioId id);

struct ScenarioInfo {
  const char* name;
  const char* regime;
  const char* description;
};
const std::vector<ScenarioInfo>& scenario_catalog();

// True-distribution parameters; each scenario reads the fields it uses.
struct ScenarioConfig {
  ScenarioId id = ScenarioId::gamma_true;
  double gamma_shape = 3.0;   // gamma_true
  double gamma_rate = 2.0;
  double variance_ratio = 1.0;  // normal_scale: (sigma/sigma*)^2
  double lognormal_mu = 1.0;    // lognormal truth
  double lognormal_sigma = 1.0;
  double pareto_a = 2.0;
  double gev_xi = 0.7;
  double laplace_scale = 1.0;  // laplace_normal, mean zero
};

enum class ModelId { gamma, normal_knownvar, normal_nig, lognormal, regression, ar1, gp };

const char* model_name(ModelId id);
ModelId model_from_name(const std::string& name);

struct ModelConfig {
  ModelId id = ModelId::gamma;
  // gamma model
  double gamma_prior_shape = 1.0;
  double gamma_prior_rate = 1.0;
  double gamma_model_shape = 3.0;  // k0
  // normal with known variance
  std::optional<double> sigma2{};  // defaults to the scenario's model variance
  double normal_prior_mean = 0.0;
  double normal_prior_variance = 100.0;
  // scalar NIG (normal_nig, lognormal)
  double nig_m = 0.0;
  double nig_k = 100.0;
  double nig_a = 2.0;
  double nig_b = 1.0;
  // linear models (regression, ar1)
  double linear_precision_scale = 0.01;
  double linear_a = 2.0;
  double linear_b = 1.0;
  // gp
  models::GpNigPrior gp_prior{};
};

enum class Method { gprc, bayes_eta1, plugin, bootstrap_raw };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct ExperimentConfig {
  ScenarioConfig scenario{};
  ModelConfig model{};
  std::size_t n = 400;
  std::vector<double> alphas{0.05};
  std::size_t bootstrap_replicates = 200;  // B
  std::size_t replications = 200;          // R
  std::size_t posterior_draws = 2000;      // M, where Monte-Carlo predictives apply
  std::optional<std::size_t> block_length{};
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::gprc};
  std::size_t max_iterations = 1000;
  std::string output_path = "results.csv";
};

// JSON config document; errors carry the offending field path.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

struct ReplicationRow {
  std::size_t replication = 0;
  Method method = Method::gprc;
  double alpha = 0.0;
  double q_hat = 0.0;
  double y_next = 0.0;
  std::optional<double> q_star{};
  std::optional<double> eta_hat{};
  std::optional<std::size_t> iterations{};
  std::optional<bool> converged{};
  std::string error;  // empty on success
};

struct SummaryRow {
  Method method = Method::gprc;
  double alpha = 0.0;
  std::size_t replications = 0;  // successful
  std::size_t failures = 0;
  double coverage = 0.0;
  double score = 0.0;
  std::optional<double> relative_score{};
  std::optional<double> mean_eta{};
  std::optional<double> mean_iterations{};
  std::optional<double> converged_fraction{};
};

struct ExperimentResults {
  ExperimentConfig config;
  std::vector<ReplicationRow> rows;
  std::vector<SummaryRow> summary;
};

ExperimentResults run_experiment(const ExperimentConfig& config, int threads = 0);

std::string results_csv(const ExperimentResults& results);
std::string summary_csv(const ExperimentResults& results);
std::string summary_table(const ExperimentResults& results);

// Runs the experiment and writes <output> plus <output stem>_summary.csv
// atomically; returns the results.
ExperimentResults run_and_write(const ExperimentConfig& config, int threads = 0);

// ------------------------------------------- single-shot file calibration

struct CalibrateOptions {
  ModelId model = ModelId::gamma;
  double alpha = 0.05;
  std::size_t bootstrap_replicates = 200;
  std::uint64_t seed = 1;
  std::optional<std::size_t> block_length{};
  std::size_t max_iterations = 1000;
  ModelConfig model_config{};  // hyperparameters; model id is overridden
  std::optional<Point> spatial_target{};
};

struct CalibrateOutcome {
  CalibrationResult calibration;
  double prediction_limit = 0.0;  // Q_alpha(eta_hat; data)
  std::size_t n = 0;
  Regime regime = Regime::iid;
};

CalibrateOutcome calibrate_file(const std::string& data_path, const CalibrateOptions& options);

// In-memory variants, one per regime; options.model must match.
CalibrateOutcome calibrate_values_iid(std::span<const double> data,
                                      const CalibrateOptions& options);
CalibrateOutcome calibrate_values_timeseries(std::span<const double> series,
                                             const CalibrateOptions& options);
CalibrateOutcome calibrate_values_regression(const RegressionData& data,
                                             const CalibrateOptions& options);
CalibrateOutcome calibrate_values_spatial(std::span<const Point> sites,
                                          std::span<const double> values,
                                          const CalibrateOptions& options);

Regime model_regime(ModelId id);

}  // namespace gprc::experiment
