#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "dataio.hpp"
#include "error.hpp"
#include "math/normal.hpp"
#include "metrics.hpp"
#include "models/ar1.hpp"
#include "models/iid_models.hpp"
#include "models/regression.hpp"
#include "models/spatial.hpp"
#include "parallel.hpp"

namespace gprc::experiment {

using nlohmann::json;

// ------------------------------------------------------------------ names

const char* scenario_name(ScenarioId id) {
  switch (id) {
    case ScenarioId::gamma_true: return "gamma_true";
    case ScenarioId::normal_scale: return "normal_scale";
    case ScenarioId::lognormal: return "lognormal";
    case ScenarioId::pareto: return "pareto";
    case ScenarioId::gev: return "gev";
    case ScenarioId::laplace_normal: return "laplace_normal";
    case ScenarioId::regression_chisq: return "regression_chisq";
    case ScenarioId::regression_gev: return "regression_gev";
    case ScenarioId::ts1: return "ts1";
    case ScenarioId::ts2: return "ts2";
    case ScenarioId::ts3: return "ts3";
    case ScenarioId::sp1: return "sp1";
    case ScenarioId::sp2: return "sp2";
    case ScenarioId::sp3: return "sp3";
  }
  return "?";
}

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = {
      {"gamma_true", "iid", "Gamma(shape, rate) data; well-specified gamma model"},
      {"normal_scale", "iid", "N(0,1) data; normal model with fixed variance ratio"},
      {"lognormal", "iid", "logN(mu, sigma^2) data; default gamma model"},
      {"pareto", "iid", "Pareto(a) data, F(y) = 1-(1+y)^-a; log-normal model"},
      {"gev", "iid", "generalized extreme value data (shape xi); log-normal model"},
      {"laplace_normal", "iid", "Laplace(0, scale) data; normal NIG model"},
      {"regression_chisq", "regression", "linear model, centered chi-square(2) errors"},
      {"regression_gev", "regression", "linear model, centered GEV(0.5) errors"},
      {"ts1", "timeseries", "AR(1) with rho 0.9 and Laplace errors"},
      {"ts2", "timeseries", "Y' = sin(Y) + Laplace error"},
      {"ts3", "timeseries", "Y' = sin(Y) + heteroscedastic Laplace error"},
      {"sp1", "spatial", "well-specified Gaussian process field"},
      {"sp2", "spatial", "log of a colored log-normal field"},
      {"sp3", "spatial", "log of a hierarchical GEV process"},
  };
  return catalog;
}

ScenarioId scenario_from_name(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(ScenarioId::sp3); ++i) {
    const auto id = static_cast<ScenarioId>(i);
    if (name == scenario_name(id)) return id;
  }
  fail(Status::parse_error, "unknown scenario '" + name + "'");
}

Regime scenario_regime(ScenarioId id) {
  switch (id) {
    case ScenarioId::gamma_true:
    case ScenarioId::normal_scale:
    case ScenarioId::lognormal:
    case ScenarioId::pareto:
    case ScenarioId::gev:
    case ScenarioId::laplace_normal:
      return Regime::iid;
    case ScenarioId::regression_chisq:
    case ScenarioId::regression_gev:
      return Regime::regression;
    case ScenarioId::ts1:
    case ScenarioId::ts2:
    case ScenarioId::ts3:
      return Regime::timeseries;
    case ScenarioId::sp1:
    case ScenarioId::sp2:
    case ScenarioId::sp3:
      return Regime::spatial;
  }
  fail(Status::invalid_argument, "unknown scenario id");
}

const char* model_name(ModelId id) {
  switch (id) {
    case ModelId::gamma: return "gamma";
    case ModelId::normal_knownvar: return "normal_knownvar";
    case ModelId::normal_nig: return "normal";
    case ModelId::lognormal: return "lognormal";
    case ModelId::regression: return "regression";
    case ModelId::ar1: return "ar1";
    case ModelId::gp: return "gp";
  }
  return "?";
}

ModelId model_from_name(const std::string& name) {
  for (const ModelId id : {ModelId::gamma, ModelId::normal_knownvar, ModelId::normal_nig,
                           ModelId::lognormal, ModelId::regression, ModelId::ar1,
                           ModelId::gp}) {
    if (name == model_name(id)) return id;
  }
  fail(Status::parse_error, "unknown model '" + name + "'");
}

Regime model_regime(ModelId id) {
  switch (id) {
    case ModelId::gamma:
    case ModelId::normal_knownvar:
    case ModelId::normal_nig:
    case ModelId::lognormal:
      return Regime::iid;
    case ModelId::regression: return Regime::regression;
    case ModelId::ar1: return Regime::timeseries;
    case ModelId::gp: return Regime::spatial;
  }
  fail(Status::invalid_argument, "unknown model id");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::gprc: return "gprc";
    case Method::bayes_eta1: return "bayes_eta1";
    case Method::plugin: return "plugin";
    case Method::bootstrap_raw: return "bootstrap_raw";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  for (const Method m :
       {Method::gprc, Method::bayes_eta1, Method::plugin, Method::bootstrap_raw}) {
    if (name == method_name(m)) return m;
  }
  fail(Status::parse_error, "unknown method '" + name + "'");
}

// ----------------------------------------------------------- config parse

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  fail(Status::parse_error, "config: " + path + ": " + what);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    config_fail(path, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) config_fail(path, "expected a string");
  return j.get<std::string>();
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) config_fail(path + "." + item.key(), "unknown field");
  }
}

ModelId default_model_for(ScenarioId id) {
  switch (id) {
    case ScenarioId::gamma_true: return ModelId::gamma;
    case ScenarioId::normal_scale: return ModelId::normal_knownvar;
    case ScenarioId::lognormal: return ModelId::gamma;
    case ScenarioId::pareto:
    case ScenarioId::gev:
      return ModelId::lognormal;
    case ScenarioId::laplace_normal: return ModelId::normal_nig;
    case ScenarioId::regression_chisq:
    case ScenarioId::regression_gev:
      return ModelId::regression;
    case ScenarioId::ts1:
    case ScenarioId::ts2:
    case ScenarioId::ts3:
      return ModelId::ar1;
    case ScenarioId::sp1:
    case ScenarioId::sp2:
    case ScenarioId::sp3:
      return ModelId::gp;
  }
  fail(Status::invalid_argument, "unknown scenario id");
}

ScenarioConfig parse_scenario(const json& obj) {
  if (!obj.is_object()) config_fail("scenario", "expected an object");
  if (!obj.contains("id")) config_fail("scenario.id", "required field missing");
  ScenarioConfig sc;
  sc.id = scenario_from_name(as_string(obj.at("id"), "scenario.id"));
  check_keys(obj, "scenario",
             {"id", "shape", "rate", "variance_ratio", "mu", "sigma", "a", "xi", "scale"});
  if (obj.contains("shape")) sc.gamma_shape = as_number(obj.at("shape"), "scenario.shape");
  if (obj.contains("rate")) sc.gamma_rate = as_number(obj.at("rate"), "scenario.rate");
  if (obj.contains("variance_ratio")) {
    sc.variance_ratio = as_number(obj.at("variance_ratio"), "scenario.variance_ratio");
  }
  if (obj.contains("mu")) sc.lognormal_mu = as_number(obj.at("mu"), "scenario.mu");
  if (obj.contains("sigma")) sc.lognormal_sigma = as_number(obj.at("sigma"), "scenario.sigma");
  if (obj.contains("a")) sc.pareto_a = as_number(obj.at("a"), "scenario.a");
  if (obj.contains("xi")) sc.gev_xi = as_number(obj.at("xi"), "scenario.xi");
  if (obj.contains("scale")) sc.laplace_scale = as_number(obj.at("scale"), "scenario.scale");
  return sc;
}

ModelConfig parse_model(const json& obj, ScenarioId scenario) {
  ModelConfig mc;
  if (obj.is_null()) {
    mc.id = default_model_for(scenario);
    return mc;
  }
  if (!obj.is_object()) config_fail("model", "expected an object");
  if (obj.contains("id")) {
    mc.id = model_from_name(as_string(obj.at("id"), "model.id"));
  } else {
    mc.id = default_model_for(scenario);
  }
  check_keys(obj, "model",
             {"id", "prior_shape", "prior_rate", "k0", "sigma2", "prior_mean",
              "prior_variance", "m", "k", "a", "b", "precision_scale",
              "prior_mean_scale"});
  if (obj.contains("prior_shape")) {
    mc.gamma_prior_shape = as_number(obj.at("prior_shape"), "model.prior_shape");
  }
  if (obj.contains("prior_rate")) {
    mc.gamma_prior_rate = as_number(obj.at("prior_rate"), "model.prior_rate");
  }
  if (obj.contains("k0")) mc.gamma_model_shape = as_number(obj.at("k0"), "model.k0");
  if (obj.contains("sigma2")) mc.sigma2 = as_number(obj.at("sigma2"), "model.sigma2");
  if (obj.contains("prior_mean")) {
    mc.normal_prior_mean = as_number(obj.at("prior_mean"), "model.prior_mean");
    mc.gp_prior.mean = mc.normal_prior_mean;
  }
  if (obj.contains("prior_variance")) {
    mc.normal_prior_variance = as_number(obj.at("prior_variance"), "model.prior_variance");
  }
  if (obj.contains("m")) mc.nig_m = as_number(obj.at("m"), "model.m");
  if (obj.contains("k")) mc.nig_k = as_number(obj.at("k"), "model.k");
  if (obj.contains("a")) {
    const double a = as_number(obj.at("a"), "model.a");
    mc.nig_a = a;
    mc.linear_a = a;
    mc.gp_prior.shape = a;
  }
  if (obj.contains("b")) {
    const double b = as_number(obj.at("b"), "model.b");
    mc.nig_b = b;
    mc.linear_b = b;
    mc.gp_prior.rate = b;
  }
  if (obj.contains("precision_scale")) {
    mc.linear_precision_scale = as_number(obj.at("precision_scale"), "model.precision_scale");
  }
  if (obj.contains("prior_mean_scale")) {
    mc.gp_prior.mean_scale = as_number(obj.at("prior_mean_scale"), "model.prior_mean_scale");
  }
  return mc;
}

void validate_config(const ExperimentConfig& config) {
  require(config.replications >= 1, Status::parse_error, "config: R: must be >= 1");
  require(config.bootstrap_replicates >= 1, Status::parse_error,
          "config: B: must be >= 1");
  require(config.n >= 2, Status::parse_error, "config: n: must be >= 2");
  require(!config.alphas.empty(), Status::parse_error, "config: alpha: list is empty");
  for (const double alpha : config.alphas) {
    require(alpha > 0.0 && alpha < 1.0, Status::parse_error,
            "config: alpha: values must lie in (0,1)");
  }
  require(!config.methods.empty(), Status::parse_error, "config: methods: list is empty");

  const Regime regime = scenario_regime(config.scenario.id);
  require(model_regime(config.model.id) == regime, Status::parse_error,
          std::string("config: model.id: model '") + model_name(config.model.id) +
              "' does not fit scenario '" + scenario_name(config.scenario.id) + "'");
  for (const Method m : config.methods) {
    const bool ok = (m == Method::gprc || m == Method::bayes_eta1) ||
                    (m == Method::plugin && regime != Regime::iid) ||
                    (m == Method::bootstrap_raw && regime == Regime::spatial);
    require(ok, Status::parse_error,
            std::string("config: methods: '") + method_name(m) +
                "' is not available for scenario '" + scenario_name(config.scenario.id) +
                "'");
  }
  if (config.model.id == ModelId::normal_knownvar &&
      config.scenario.id != ScenarioId::normal_scale) {
    require(config.model.sigma2.has_value(), Status::parse_error,
            "config: model.sigma2: required for the known-variance normal model");
  }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) fail(Status::parse_error, "config: not valid JSON");
  if (!doc.is_object()) fail(Status::parse_error, "config: top level must be an object");
  check_keys(doc, "config",
             {"scenario", "model", "n", "alpha", "B", "R", "M", "block_length", "seed",
              "methods", "output", "max_iterations"});
  if (!doc.contains("scenario")) config_fail("scenario", "required field missing");

  ExperimentConfig config;
  config.scenario = parse_scenario(doc.at("scenario"));
  config.model = parse_model(doc.contains("model") ? doc.at("model") : json(), config.scenario.id);
  if (doc.contains("n")) config.n = as_count(doc.at("n"), "n");
  if (doc.contains("alpha")) {
    const json& a = doc.at("alpha");
    config.alphas.clear();
    if (a.is_array()) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        config.alphas.push_back(as_number(a.at(i), "alpha[" + std::to_string(i) + "]"));
      }
    } else {
      config.alphas.push_back(as_number(a, "alpha"));
    }
  }
  if (doc.contains("B")) config.bootstrap_replicates = as_count(doc.at("B"), "B");
  if (doc.contains("R")) config.replications = as_count(doc.at("R"), "R");
  if (doc.contains("M")) config.posterior_draws = as_count(doc.at("M"), "M");
  if (doc.contains("block_length")) {
    config.block_length = as_count(doc.at("block_length"), "block_length");
  }
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_integer()) config_fail("seed", "expected an integer");
    config.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("methods")) {
    const json& m = doc.at("methods");
    if (!m.is_array()) config_fail("methods", "expected an array");
    config.methods.clear();
    for (std::size_t i = 0; i < m.size(); ++i) {
      config.methods.push_back(
          method_from_name(as_string(m.at(i), "methods[" + std::to_string(i) + "]")));
    }
  }
  if (doc.contains("output")) config.output_path = as_string(doc.at("output"), "output");
  if (doc.contains("max_iterations")) {
    config.max_iterations = as_count(doc.at("max_iterations"), "max_iterations");
  }
  validate_config(config);
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Status::io_error, "cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

// -------------------------------------------------------------- replication

namespace {

struct MethodPlan {
  Method method;
  std::size_t row_offset;  // first row index for (replication 0, this method)
};

// Row layout: rows[(r * methods + m) * alphas + a].
std::size_t row_index(const ExperimentConfig& config, std::size_t r, std::size_t m,
                      std::size_t a) {
  return (r * config.methods.size() + m) * config.alphas.size() + a;
}

std::unique_ptr<IidAdapter> make_iid_adapter(const ExperimentConfig& config) {
  const ModelConfig& mc = config.model;
  switch (mc.id) {
    case ModelId::gamma:
      return std::make_unique<models::GammaIidModel>(
          mc.gamma_prior_shape, mc.gamma_prior_rate, mc.gamma_model_shape);
    case ModelId::normal_knownvar: {
      const double sigma2 = mc.sigma2.value_or(config.scenario.variance_ratio);
      return std::make_unique<models::NormalKnownVarModel>(sigma2, mc.normal_prior_mean,
                                                           mc.normal_prior_variance);
    }
    case ModelId::normal_nig:
      return std::make_unique<models::NormalNigModel>(mc.nig_m, mc.nig_k, mc.nig_a,
                                                      mc.nig_b, false);
    case ModelId::lognormal:
      return std::make_unique<models::NormalNigModel>(mc.nig_m, mc.nig_k, mc.nig_a,
                                                      mc.nig_b, true);
    default:
      fail(Status::invalid_argument, "not an iid model");
  }
}

std::vector<double> simulate_iid(const ScenarioConfig& sc, std::size_t count,
                                 math::Rng& rng) {
  switch (sc.id) {
    case ScenarioId::gamma_true:
      return simgen::gamma_sample(sc.gamma_shape, sc.gamma_rate, count, rng);
    case ScenarioId::normal_scale:
      return simgen::normal_sample(0.0, 1.0, count, rng);
    case ScenarioId::lognormal:
      return simgen::lognormal_sample(sc.lognormal_mu, sc.lognormal_sigma, count, rng);
    case ScenarioId::pareto:
      return simgen::pareto_sample(sc.pareto_a, count, rng);
    case ScenarioId::gev:
      return simgen::gev_sample(sc.gev_xi, count, rng);
    case ScenarioId::laplace_normal:
      return simgen::laplace_sample(0.0, sc.laplace_scale, count, rng);
    default:
      fail(Status::invalid_argument, "not an iid scenario");
  }
}

double iid_true_quantile(const ScenarioConfig& sc, double alpha) {
  switch (sc.id) {
    case ScenarioId::gamma_true:
      return simgen::gamma_quantile(sc.gamma_shape, sc.gamma_rate, alpha);
    case ScenarioId::normal_scale:
      return simgen::normal_quantile_upper(0.0, 1.0, alpha);
    case ScenarioId::lognormal:
      return simgen::lognormal_quantile(sc.lognormal_mu, sc.lognormal_sigma, alpha);
    case ScenarioId::pareto:
      return simgen::pareto_quantile(sc.pareto_a, alpha);
    case ScenarioId::gev:
      return simgen::gev_quantile(sc.gev_xi, alpha);
    case ScenarioId::laplace_normal:
      return simgen::laplace_quantile(0.0, sc.laplace_scale, alpha);
    default:
      fail(Status::invalid_argument, "not an iid scenario");
  }
}

simgen::TsScenario ts_scenario(ScenarioId id) {
  switch (id) {
    case ScenarioId::ts1: return simgen::TsScenario::ar1_laplace;
    case ScenarioId::ts2: return simgen::TsScenario::sin_laplace;
    case ScenarioId::ts3: return simgen::TsScenario::sin_heteroscedastic;
    default: fail(Status::invalid_argument, "not a time series scenario");
  }
}

simgen::SpScenario sp_scenario(ScenarioId id) {
  switch (id) {
    case ScenarioId::sp1: return simgen::SpScenario::gaussian;
    case ScenarioId::sp2: return simgen::SpScenario::lognormal_field;
    case ScenarioId::sp3: return simgen::SpScenario::gev_process;
    default: fail(Status::invalid_argument, "not a spatial scenario");
  }
}

simgen::RegressionError regression_error(ScenarioId id) {
  switch (id) {
    case ScenarioId::regression_chisq: return simgen::RegressionError::chisq2_centered;
    case ScenarioId::regression_gev: return simgen::RegressionError::gev05_centered;
    default: fail(Status::invalid_argument, "not a regression scenario");
  }
}

void record_method_error(std::vector<ReplicationRow>& rows, const ExperimentConfig& config,
                         std::size_t r, std::size_t m, const std::string& what) {
  for (std::size_t a = 0; a < config.alphas.size(); ++a) {
    rows[row_index(config, r, m, a)].error = what;
  }
}

CalibrationControl make_control(const ExperimentConfig& config) {
  CalibrationControl control;
  control.max_iterations = config.max_iterations;
  return control;
}

void run_iid_replication(const ExperimentConfig& config, const IidAdapter& model,
                         std::size_t r, std::vector<ReplicationRow>& rows) {
  math::Rng rng(math::derive_seed(config.seed, {math::kStreamSimulation, r}));
  const auto sample = simulate_iid(config.scenario, config.n + 1, rng);
  const std::span<const double> data(sample.data(), config.n);
  const double y_next = sample.back();

  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const Method method = config.methods[m];
    try {
      if (method == Method::gprc) {
        BootstrapPlan plan{BootstrapKind::iid, config.bootstrap_replicates, std::nullopt,
                           math::derive_seed(config.seed, {math::kStreamBootstrap, r})};
        const auto boot = iid_bootstrap(data, plan);
        const IidCoverage cache(model, data, boot);
        const auto fit = model.fit(data);
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          const auto result = calibrate_root(
              [&](double eta) { return cache.coverage(eta, alpha); }, alpha,
              default_tolerance(alpha), make_control(config));
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = model.quantile(*fit, result.eta_hat, alpha);
          row.y_next = y_next;
          row.q_star = iid_true_quantile(config.scenario, alpha);
          row.eta_hat = result.eta_hat;
          row.iterations = result.iterations;
          row.converged = result.converged;
        }
      } else {  // bayes_eta1
        const auto fit = model.fit(data);
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = model.quantile(*fit, 1.0, alpha);
          row.y_next = y_next;
          row.q_star = iid_true_quantile(config.scenario, alpha);
        }
      }
    } catch (const Error& e) {
      record_method_error(rows, config, r, m, e.what());
    }
  }
}

void run_regression_replication(const ExperimentConfig& config,
                                const models::ConjugateRegressionModel& model,
                                std::size_t r, std::vector<ReplicationRow>& rows) {
  math::Rng rng(math::derive_seed(config.seed, {math::kStreamSimulation, r}));
  const auto kind = regression_error(config.scenario.id);
  const auto sample = simgen::regression_sample(kind, config.n, rng);
  double true_mean = 0.0;
  for (const double x : sample.x_next) true_mean += 2.0 * x;

  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const Method method = config.methods[m];
    try {
      if (method == Method::gprc) {
        BootstrapPlan plan{BootstrapKind::paired, config.bootstrap_replicates, std::nullopt,
                           math::derive_seed(config.seed, {math::kStreamBootstrap, r})};
        const auto boot = paired_bootstrap(sample.data, plan);
        const RegressionCoverage cache(model, sample.data, boot);
        const auto fit = model.fit(sample.data, sample.data.x);
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          const auto result = calibrate_root(
              [&](double eta) { return cache.coverage(eta, alpha); }, alpha,
              default_tolerance(alpha), make_control(config));
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = model.quantile_at(*fit, sample.x_next, result.eta_hat, alpha);
          row.y_next = sample.y_next;
          row.q_star = true_mean + simgen::regression_error_quantile(kind, alpha);
          row.eta_hat = result.eta_hat;
          row.iterations = result.iterations;
          row.converged = result.converged;
        }
      } else if (method == Method::bayes_eta1) {
        const auto fit = model.fit(sample.data, sample.data.x);
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = model.quantile_at(*fit, sample.x_next, 1.0, alpha);
          row.y_next = sample.y_next;
          row.q_star = true_mean + simgen::regression_error_quantile(kind, alpha);
        }
      } else {  // plugin
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = models::regression_plugin_limit(sample.data, sample.x_next, alpha);
          row.y_next = sample.y_next;
          row.q_star = true_mean + simgen::regression_error_quantile(kind, alpha);
        }
      }
    } catch (const Error& e) {
      record_method_error(rows, config, r, m, e.what());
    }
  }
}

void run_timeseries_replication(const ExperimentConfig& config,
                                const models::Ar1ConjugateModel& model, std::size_t r,
                                std::vector<ReplicationRow>& rows) {
  math::Rng rng(math::derive_seed(config.seed, {math::kStreamSimulation, r}));
  const auto scenario = ts_scenario(config.scenario.id);
  const auto sample = simgen::timeseries_sample(scenario, config.n + 1, rng);
  const std::span<const double> series(sample.data(), config.n);
  const double y_prev = series.back();
  const double y_next = sample.back();

  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const Method method = config.methods[m];
    try {
      if (method == Method::gprc) {
        BootstrapPlan plan{BootstrapKind::block, config.bootstrap_replicates,
                           config.block_length.value_or(default_block_length(config.n)),
                           math::derive_seed(config.seed, {math::kStreamBootstrap, r})};
        const auto boot = block_bootstrap(series, plan);
        const TimeSeriesCoverage cache(model, series, boot);
        const auto fit = model.fit(series);
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          const auto result = calibrate_root(
              [&](double eta) { return cache.coverage(eta, alpha); }, alpha,
              default_tolerance(alpha), make_control(config));
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = model.quantile_at(*fit, y_prev, result.eta_hat, alpha);
          row.y_next = y_next;
          row.q_star = simgen::timeseries_conditional_quantile(scenario, y_prev, alpha);
          row.eta_hat = result.eta_hat;
          row.iterations = result.iterations;
          row.converged = result.converged;
        }
      } else if (method == Method::bayes_eta1) {
        const auto fit = model.fit(series);
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = model.quantile_at(*fit, y_prev, 1.0, alpha);
          row.y_next = y_next;
          row.q_star = simgen::timeseries_conditional_quantile(scenario, y_prev, alpha);
        }
      } else {  // plugin
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = models::ar1_plugin_limit(series, y_prev, alpha);
          row.y_next = y_next;
          row.q_star = simgen::timeseries_conditional_quantile(scenario, y_prev, alpha);
        }
      }
    } catch (const Error& e) {
      record_method_error(rows, config, r, m, e.what());
    }
  }
}

void run_spatial_replication(const ExperimentConfig& config, std::size_t r,
                             std::vector<ReplicationRow>& rows) {
  math::Rng rng(math::derive_seed(config.seed, {math::kStreamSimulation, r}));
  const auto scenario = sp_scenario(config.scenario.id);
  const auto sample = simgen::spatial_sample(scenario, config.n, rng);
  const std::span<const Point> sites(sample.sites.data(), sample.sites.size());
  const std::span<const Point> obs_sites(sample.sites.data(), config.n);
  const std::span<const double> field(sample.field.data(), config.n);
  const double y_next = sample.field.back();
  const Point target = sample.sites.back();

  // True conditional quantile is available only for the Gaussian scenario.
  std::optional<models::KrigingMoments> true_moments;
  if (scenario == simgen::SpScenario::gaussian) {
    true_moments =
        models::kriging_moments(simgen::sp_gaussian_theta(), obs_sites, field, target);
  }
  auto true_quantile = [&](double alpha) -> std::optional<double> {
    if (!true_moments) return std::nullopt;
    return true_moments->mean +
           math::norm_upper_quantile(alpha) * std::sqrt(true_moments->variance);
  };

  SpatialTheta theta_hat;
  std::vector<std::vector<double>> fields;
  bool need_fields = false;
  for (const Method m : config.methods) {
    if (m == Method::gprc || m == Method::bootstrap_raw) need_fields = true;
  }
  try {
    theta_hat = models::variogram_fit(obs_sites, field);
    if (need_fields) {
      BootstrapPlan plan{BootstrapKind::spatial, config.bootstrap_replicates, std::nullopt,
                         math::derive_seed(config.seed, {math::kStreamBootstrap, r})};
      fields = spatial_semiparametric_bootstrap(sites, field, theta_hat, plan);
    }
  } catch (const Error& e) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      record_method_error(rows, config, r, m, e.what());
    }
    return;
  }

  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const Method method = config.methods[m];
    try {
      if (method == Method::gprc || method == Method::bayes_eta1) {
        const models::GpSpatialModel model(sample.sites, theta_hat.phi, theta_hat.tau,
                                           config.model.gp_prior);
        const auto fit = model.fit(field);
        if (method == Method::gprc) {
          const SpatialCoverage cache(model, fields);
          for (std::size_t a = 0; a < config.alphas.size(); ++a) {
            const double alpha = config.alphas[a];
            const auto result = calibrate_root(
                [&](double eta) { return cache.coverage(eta, alpha); }, alpha,
                spatial_tolerance(alpha, config.bootstrap_replicates),
                make_control(config));
            auto& row = rows[row_index(config, r, m, a)];
            row.q_hat = model.quantile(*fit, result.eta_hat, alpha);
            row.y_next = y_next;
            row.q_star = true_quantile(alpha);
            row.eta_hat = result.eta_hat;
            row.iterations = result.iterations;
            row.converged = result.converged;
          }
        } else {
          for (std::size_t a = 0; a < config.alphas.size(); ++a) {
            const double alpha = config.alphas[a];
            auto& row = rows[row_index(config, r, m, a)];
            row.q_hat = model.quantile(*fit, 1.0, alpha);
            row.y_next = y_next;
            row.q_star = true_quantile(alpha);
          }
        }
      } else if (method == Method::plugin) {
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = models::spatial_plugin_limit(obs_sites, field, target, theta_hat, alpha);
          row.y_next = y_next;
          row.q_star = true_quantile(alpha);
        }
      } else {  // bootstrap_raw
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
          const double alpha = config.alphas[a];
          auto& row = rows[row_index(config, r, m, a)];
          row.q_hat = models::spatial_bootstrap_limit(fields, alpha);
          row.y_next = y_next;
          row.q_star = true_quantile(alpha);
        }
      }
    } catch (const Error& e) {
      record_method_error(rows, config, r, m, e.what());
    }
  }
}

}  // namespace

ExperimentResults run_experiment(const ExperimentConfig& config, int threads) {
  validate_config(config);
  ExperimentResults results;
  results.config = config;
  const std::size_t total =
      config.replications * config.methods.size() * config.alphas.size();
  results.rows.resize(total);
  for (std::size_t r = 0; r < config.replications; ++r) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      for (std::size_t a = 0; a < config.alphas.size(); ++a) {
        auto& row = results.rows[row_index(config, r, m, a)];
        row.replication = r;
        row.method = config.methods[m];
        row.alpha = config.alphas[a];
      }
    }
  }

  const Regime regime = scenario_regime(config.scenario.id);
  switch (regime) {
    case Regime::iid: {
      const auto model = make_iid_adapter(config);
      parallel_for(config.replications, threads, [&](std::size_t r) {
        run_iid_replication(config, *model, r, results.rows);
      });
      break;
    }
    case Regime::regression: {
      const models::ConjugateRegressionModel model(models::vague_linear_prior(
          simgen::kRegressionDim, config.model.linear_precision_scale,
          config.model.linear_a, config.model.linear_b));
      parallel_for(config.replications, threads, [&](std::size_t r) {
        run_regression_replication(config, model, r, results.rows);
      });
      break;
    }
    case Regime::timeseries: {
      const models::Ar1ConjugateModel model(models::vague_linear_prior(
          1, config.model.linear_precision_scale, config.model.linear_a,
          config.model.linear_b));
      parallel_for(config.replications, threads, [&](std::size_t r) {
        run_timeseries_replication(config, model, r, results.rows);
      });
      break;
    }
    case Regime::spatial: {
      parallel_for(config.replications, threads, [&](std::size_t r) {
        run_spatial_replication(config, r, results.rows);
      });
      break;
    }
  }

  // Aggregate per (method, alpha).
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    for (std::size_t a = 0; a < config.alphas.size(); ++a) {
      SummaryRow summary;
      summary.method = config.methods[m];
      summary.alpha = config.alphas[a];
      std::vector<ReplicationRecord> records;
      bool all_have_star = true;
      double eta_sum = 0.0;
      double iter_sum = 0.0;
      std::size_t converged = 0;
      std::size_t with_eta = 0;
      for (std::size_t r = 0; r < config.replications; ++r) {
        const auto& row = results.rows[row_index(config, r, m, a)];
        if (!row.error.empty()) {
          ++summary.failures;
          continue;
        }
        records.push_back({row.q_hat, row.y_next, row.q_star});
        if (!row.q_star) all_have_star = false;
        if (row.eta_hat) {
          ++with_eta;
          eta_sum += *row.eta_hat;
          iter_sum += static_cast<double>(*row.iterations);
          if (row.converged.value_or(false)) ++converged;
        }
      }
      summary.replications = records.size();
      if (!records.empty()) {
        summary.coverage = empirical_coverage(records);
        summary.score = interval_score(records, summary.alpha);
        if (all_have_star) {
          summary.relative_score = relative_score(records, summary.alpha);
        }
        if (with_eta > 0) {
          summary.mean_eta = eta_sum / static_cast<double>(with_eta);
          summary.mean_iterations = iter_sum / static_cast<double>(with_eta);
          summary.converged_fraction =
              static_cast<double>(converged) / static_cast<double>(with_eta);
        }
      }
      results.summary.push_back(summary);
    }
  }
  return results;
}

// ------------------------------------------------------------------ output

namespace {

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::string optional_number(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string();
}

std::string csv_quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::string results_csv(const ExperimentResults& results) {
  const auto& config = results.config;
  std::ostringstream out;
  out << "scenario,method,n,alpha,replication,q_hat,y_next,q_star,eta_hat,iterations,"
         "converged,error\n";
  for (const auto& row : results.rows) {
    out << scenario_name(config.scenario.id) << ',' << method_name(row.method) << ','
        << config.n << ',' << format_number(row.alpha) << ',' << row.replication << ',';
    if (row.error.empty()) {
      out << format_number(row.q_hat) << ',' << format_number(row.y_next) << ','
          << optional_number(row.q_star) << ',' << optional_number(row.eta_hat) << ',';
      if (row.iterations) out << *row.iterations;
      out << ',';
      if (row.converged) out << (*row.converged ? 1 : 0);
      out << ',';
    } else {
      out << ",,,,,," << csv_quote(row.error);
    }
    out << '\n';
  }
  return out.str();
}

std::string summary_csv(const ExperimentResults& results) {
  const auto& config = results.config;
  std::ostringstream out;
  out << "scenario,method,n,alpha,coverage,score,relative_score,R,seed,mean_eta,"
         "mean_iterations,converged_fraction,failures\n";
  for (const auto& s : results.summary) {
    out << scenario_name(config.scenario.id) << ',' << method_name(s.method) << ','
        << config.n << ',' << format_number(s.alpha) << ',' << format_number(s.coverage)
        << ',' << format_number(s.score) << ',' << optional_number(s.relative_score)
        << ',' << s.replications << ',' << config.seed << ','
        << optional_number(s.mean_eta) << ',' << optional_number(s.mean_iterations)
        << ',' << optional_number(s.converged_fraction) << ',' << s.failures << '\n';
  }
  return out.str();
}

std::string summary_table(const ExperimentResults& results) {
  const auto& config = results.config;
  std::ostringstream out;
  out << "scenario " << scenario_name(config.scenario.id) << ", n=" << config.n
      << ", B=" << config.bootstrap_replicates << ", R=" << config.replications
      << ", seed=" << config.seed << "\n";
  char line[200];
  std::snprintf(line, sizeof(line), "%-14s %-7s %-10s %-12s %-12s %-10s %s\n", "method",
                "alpha", "coverage", "score", "rel_score", "mean_eta", "failures");
  out << line;
  for (const auto& s : results.summary) {
    std::snprintf(line, sizeof(line), "%-14s %-7.4g %-10.4f %-12.5g %-12s %-10s %zu\n",
                  method_name(s.method), s.alpha, s.coverage, s.score,
                  s.relative_score ? format_number(*s.relative_score).c_str() : "-",
                  s.mean_eta ? format_number(*s.mean_eta).c_str() : "-", s.failures);
    out << line;
  }
  return out.str();
}

ExperimentResults run_and_write(const ExperimentConfig& config, int threads) {
  ExperimentResults results = run_experiment(config, threads);
  dataio::write_file_atomic(config.output_path, results_csv(results));
  std::string summary_path = config.output_path;
  const std::string suffix = ".csv";
  if (summary_path.size() > suffix.size() &&
      summary_path.compare(summary_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    summary_path.resize(summary_path.size() - suffix.size());
  }
  summary_path += "_summary.csv";
  dataio::write_file_atomic(summary_path, summary_csv(results));
  return results;
}

// ------------------------------------------------- file-based calibration

namespace {

void check_calibrate_options(const CalibrateOptions& options) {
  require(options.alpha > 0.0 && options.alpha < 1.0, Status::domain_error,
          "calibrate: alpha must lie in (0,1)");
  require(options.bootstrap_replicates >= 1, Status::invalid_argument,
          "calibrate: B must be >= 1");
  require(options.max_iterations >= 1, Status::invalid_argument,
          "calibrate: max_iterations must be >= 1");
}

CalibrationControl calibrate_control(const CalibrateOptions& options) {
  CalibrationControl control;
  control.max_iterations = options.max_iterations;
  return control;
}

}  // namespace

CalibrateOutcome calibrate_values_iid(std::span<const double> data,
                                      const CalibrateOptions& options) {
  check_calibrate_options(options);
  require(model_regime(options.model) == Regime::iid, Status::invalid_argument,
          "calibrate: not an iid model");
  require(data.size() >= 2, Status::insufficient_data,
          "calibrate: need at least two observations");
  ModelConfig mc = options.model_config;
  mc.id = options.model;
  if (mc.id == ModelId::normal_knownvar) {
    require(mc.sigma2.has_value(), Status::invalid_argument,
            "calibrate: model.sigma2 required for the known-variance normal model");
  }
  ExperimentConfig shim;
  shim.model = mc;
  const auto model = make_iid_adapter(shim);

  CalibrateOutcome outcome;
  outcome.regime = Regime::iid;
  outcome.n = data.size();
  BootstrapPlan plan{BootstrapKind::iid, options.bootstrap_replicates, std::nullopt,
                     options.seed};
  outcome.calibration =
      gprc_calibrate(data, options.alpha, plan, *model, calibrate_control(options));
  const auto fit = model->fit(data);
  outcome.prediction_limit =
      model->quantile(*fit, outcome.calibration.eta_hat, options.alpha);
  return outcome;
}

CalibrateOutcome calibrate_values_timeseries(std::span<const double> series,
                                             const CalibrateOptions& options) {
  check_calibrate_options(options);
  require(model_regime(options.model) == Regime::timeseries, Status::invalid_argument,
          "calibrate: not a time series model");
  require(series.size() >= 2, Status::insufficient_data,
          "calibrate: need at least two observations");
  const ModelConfig& mc = options.model_config;
  const models::Ar1ConjugateModel model(models::vague_linear_prior(
      1, mc.linear_precision_scale, mc.linear_a, mc.linear_b));

  CalibrateOutcome outcome;
  outcome.regime = Regime::timeseries;
  outcome.n = series.size();
  BootstrapPlan plan{BootstrapKind::block, options.bootstrap_replicates,
                     options.block_length.value_or(default_block_length(series.size())),
                     options.seed};
  outcome.calibration =
      gprc_calibrate(series, options.alpha, plan, model, calibrate_control(options));
  const auto fit = model.fit(series);
  outcome.prediction_limit =
      model.quantile_at(*fit, series.back(), outcome.calibration.eta_hat, options.alpha);
  return outcome;
}

CalibrateOutcome calibrate_values_regression(const RegressionData& data,
                                             const CalibrateOptions& options) {
  check_calibrate_options(options);
  require(model_regime(options.model) == Regime::regression, Status::invalid_argument,
          "calibrate: not a regression model");
  require(data.n() >= 2, Status::insufficient_data,
          "calibrate: need at least two observations");
  const ModelConfig& mc = options.model_config;
  const models::ConjugateRegressionModel model(models::vague_linear_prior(
      data.q(), mc.linear_precision_scale, mc.linear_a, mc.linear_b));

  CalibrateOutcome outcome;
  outcome.regime = Regime::regression;
  outcome.n = data.n();
  BootstrapPlan plan{BootstrapKind::paired, options.bootstrap_replicates, std::nullopt,
                     options.seed};
  outcome.calibration =
      gprc_calibrate(data, options.alpha, plan, model, calibrate_control(options));
  const auto fit = model.fit(data, data.x);
  // The reported limit conditions on the final row's covariates.
  outcome.prediction_limit = model.quantile_at(
      *fit, data.x.row(data.n() - 1), outcome.calibration.eta_hat, options.alpha);
  return outcome;
}

CalibrateOutcome calibrate_values_spatial(std::span<const Point> sites,
                                          std::span<const double> values,
                                          const CalibrateOptions& options) {
  check_calibrate_options(options);
  require(model_regime(options.model) == Regime::spatial, Status::invalid_argument,
          "calibrate: not a spatial model");
  require(sites.size() == values.size(), Status::shape_mismatch,
          "calibrate: sites and values differ in length");
  require(sites.size() >= 2, Status::insufficient_data,
          "calibrate: need at least two observations");
  const Point target = options.spatial_target.value_or(Point{0.0, 0.0});
  const SpatialTheta theta_hat = models::variogram_fit(sites, values);
  std::vector<Point> sites_with_target(sites.begin(), sites.end());
  sites_with_target.push_back(target);
  const models::GpSpatialModel model(sites_with_target, theta_hat.phi, theta_hat.tau,
                                     options.model_config.gp_prior);

  CalibrateOutcome outcome;
  outcome.regime = Regime::spatial;
  outcome.n = sites.size();
  BootstrapPlan plan{BootstrapKind::spatial, options.bootstrap_replicates, std::nullopt,
                     options.seed};
  outcome.calibration = gprc_calibrate(sites_with_target, values, theta_hat,
                                       options.alpha, plan, model,
                                       calibrate_control(options));
  const auto fit = model.fit(values);
  outcome.prediction_limit =
      model.quantile(*fit, outcome.calibration.eta_hat, options.alpha);
  return outcome;
}

CalibrateOutcome calibrate_file(const std::string& data_path,
                                const CalibrateOptions& options) {
  switch (model_regime(options.model)) {
    case Regime::iid:
      return calibrate_values_iid(dataio::read_column(data_path), options);
    case Regime::timeseries:
      return calibrate_values_timeseries(dataio::read_column(data_path), options);
    case Regime::regression:
      return calibrate_values_regression(dataio::read_regression(data_path), options);
    case Regime::spatial: {
      const auto file = dataio::read_spatial(data_path);
      return calibrate_values_spatial(file.sites, file.values, options);
    }
  }
  fail(Status::invalid_argument, "calibrate: unknown regime");
}

}  // namespace gprc::experiment
