#include "gprc/gprc.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "calibrate.hpp"
#include "error.hpp"
#include "experiment.hpp"

namespace {

thread_local std::string t_last_error;

gprc_status to_status(gprc::Status status) {
  using gprc::Status;
  switch (status) {
    case Status::ok: return GPRC_OK;
    case Status::invalid_argument: return GPRC_ERROR_INVALID_ARGUMENT;
    case Status::domain_error: return GPRC_ERROR_DOMAIN;
    case Status::insufficient_data: return GPRC_ERROR_INSUFFICIENT_DATA;
    case Status::shape_mismatch: return GPRC_ERROR_SHAPE;
    case Status::singular: return GPRC_ERROR_SINGULAR;
    case Status::nonconvergence: return GPRC_ERROR_NONCONVERGENT;
    case Status::degenerate_support: return GPRC_ERROR_DEGENERATE;
    case Status::parse_error: return GPRC_ERROR_PARSE;
    case Status::io_error: return GPRC_ERROR_IO;
  }
  return GPRC_ERROR_UNKNOWN;
}

template <typename Fn>
gprc_status guarded(Fn&& fn) {
  try {
    fn();
    return GPRC_OK;
  } catch (const gprc::Error& e) {
    t_last_error = e.what();
    return to_status(e.status());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return GPRC_ERROR_UNKNOWN;
  } catch (...) {
    t_last_error = "unknown error";
    return GPRC_ERROR_UNKNOWN;
  }
}

gprc::experiment::CalibrateOptions convert_options(const gprc_calibrate_options* options) {
  gprc::require(options != nullptr, gprc::Status::invalid_argument,
                "options must not be NULL");
  gprc::require(options->model != nullptr, gprc::Status::invalid_argument,
                "options->model must not be NULL");
  gprc::experiment::CalibrateOptions out;
  out.model = gprc::experiment::model_from_name(options->model);
  out.alpha = options->alpha;
  out.bootstrap_replicates = options->bootstrap_replicates;
  out.seed = options->seed;
  if (options->block_length > 0) out.block_length = options->block_length;
  if (options->max_iterations > 0) out.max_iterations = options->max_iterations;
  if (options->gamma_model_shape > 0) {
    out.model_config.gamma_model_shape = options->gamma_model_shape;
  }
  if (options->sigma2 > 0) out.model_config.sigma2 = options->sigma2;
  out.spatial_target = gprc::Point{options->target_x, options->target_y};
  return out;
}

void copy_summary(const std::string& text, char* summary, size_t capacity) {
  if (summary == nullptr || capacity == 0) return;
  const size_t count = std::min(capacity - 1, text.size());
  std::memcpy(summary, text.data(), count);
  summary[count] = '\0';
}

}  // namespace

struct gprc_calibrator {
  gprc::experiment::CalibrateOutcome outcome;
};

extern "C" {

const char* gprc_version(void) { return "0.1.0"; }

const char* gprc_status_name(gprc_status status) {
  switch (status) {
    case GPRC_OK: return "ok";
    case GPRC_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case GPRC_ERROR_DOMAIN: return "domain error";
    case GPRC_ERROR_INSUFFICIENT_DATA: return "insufficient data";
    case GPRC_ERROR_SHAPE: return "shape mismatch";
    case GPRC_ERROR_SINGULAR: return "singular";
    case GPRC_ERROR_NONCONVERGENT: return "nonconvergence";
    case GPRC_ERROR_DEGENERATE: return "degenerate support";
    case GPRC_ERROR_PARSE: return "parse error";
    case GPRC_ERROR_IO: return "i/o error";
    case GPRC_ERROR_UNKNOWN: return "unknown error";
  }
  return "unknown status";
}

const char* gprc_last_error(void) { return t_last_error.c_str(); }

void gprc_calibrate_options_init(gprc_calibrate_options* options) {
  if (options == nullptr) return;
  options->model = "gamma";
  options->alpha = 0.05;
  options->bootstrap_replicates = 200;
  options->seed = 1;
  options->block_length = 0;
  options->max_iterations = 0;
  options->gamma_model_shape = 0.0;
  options->sigma2 = 0.0;
  options->target_x = 0.0;
  options->target_y = 0.0;
}

gprc_status gprc_calibrate_iid(const double* values, size_t n,
                               const gprc_calibrate_options* options,
                               gprc_calibrator** out) {
  return guarded([&] {
    gprc::require(values != nullptr && out != nullptr, gprc::Status::invalid_argument,
                  "values and out must not be NULL");
    const auto opts = convert_options(options);
    auto handle = std::make_unique<gprc_calibrator>();
    handle->outcome = gprc::experiment::calibrate_values_iid({values, n}, opts);
    *out = handle.release();
  });
}

gprc_status gprc_calibrate_timeseries(const double* series, size_t n,
                                      const gprc_calibrate_options* options,
                                      gprc_calibrator** out) {
  return guarded([&] {
    gprc::require(series != nullptr && out != nullptr, gprc::Status::invalid_argument,
                  "series and out must not be NULL");
    const auto opts = convert_options(options);
    auto handle = std::make_unique<gprc_calibrator>();
    handle->outcome =
        gprc::experiment::calibrate_values_timeseries({series, n}, opts);
    *out = handle.release();
  });
}

gprc_status gprc_calibrate_regression(const double* x, size_t n, size_t q,
                                      const double* y,
                                      const gprc_calibrate_options* options,
                                      gprc_calibrator** out) {
  return guarded([&] {
    gprc::require(x != nullptr && y != nullptr && out != nullptr,
                  gprc::Status::invalid_argument, "x, y and out must not be NULL");
    gprc::require(q >= 1, gprc::Status::invalid_argument, "q must be >= 1");
    const auto opts = convert_options(options);
    gprc::RegressionData data;
    data.x = gprc::math::Matrix(n, q);
    data.y.assign(y, y + n);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < q; ++j) data.x(i, j) = x[i * q + j];
    }
    auto handle = std::make_unique<gprc_calibrator>();
    handle->outcome = gprc::experiment::calibrate_values_regression(data, opts);
    *out = handle.release();
  });
}

gprc_status gprc_calibrate_spatial(const double* site_x, const double* site_y,
                                   const double* values, size_t n,
                                   const gprc_calibrate_options* options,
                                   gprc_calibrator** out) {
  return guarded([&] {
    gprc::require(site_x != nullptr && site_y != nullptr && values != nullptr &&
                      out != nullptr,
                  gprc::Status::invalid_argument, "arrays and out must not be NULL");
    const auto opts = convert_options(options);
    std::vector<gprc::Point> sites(n);
    for (size_t i = 0; i < n; ++i) sites[i] = {site_x[i], site_y[i]};
    auto handle = std::make_unique<gprc_calibrator>();
    handle->outcome =
        gprc::experiment::calibrate_values_spatial(sites, {values, n}, opts);
    *out = handle.release();
  });
}

gprc_status gprc_calibrate_file(const char* path,
                                const gprc_calibrate_options* options,
                                gprc_calibrator** out) {
  return guarded([&] {
    gprc::require(path != nullptr && out != nullptr, gprc::Status::invalid_argument,
                  "path and out must not be NULL");
    const auto opts = convert_options(options);
    auto handle = std::make_unique<gprc_calibrator>();
    handle->outcome = gprc::experiment::calibrate_file(path, opts);
    *out = handle.release();
  });
}

double gprc_calibrator_eta(const gprc_calibrator* c) {
  return c ? c->outcome.calibration.eta_hat : 0.0;
}

int gprc_calibrator_converged(const gprc_calibrator* c) {
  return (c && c->outcome.calibration.converged) ? 1 : 0;
}

size_t gprc_calibrator_iterations(const gprc_calibrator* c) {
  return c ? c->outcome.calibration.iterations : 0;
}

double gprc_calibrator_tolerance(const gprc_calibrator* c) {
  return c ? c->outcome.calibration.tolerance_used : 0.0;
}

double gprc_calibrator_prediction_limit(const gprc_calibrator* c) {
  return c ? c->outcome.prediction_limit : 0.0;
}

size_t gprc_calibrator_trace_length(const gprc_calibrator* c) {
  return c ? c->outcome.calibration.trace.size() : 0;
}

gprc_status gprc_calibrator_trace(const gprc_calibrator* c, double* eta,
                                  double* coverage, size_t capacity, size_t* length) {
  return guarded([&] {
    gprc::require(c != nullptr, gprc::Status::invalid_argument,
                  "calibrator must not be NULL");
    const auto& trace = c->outcome.calibration.trace;
    const size_t count = std::min(capacity, trace.size());
    for (size_t i = 0; i < count; ++i) {
      if (eta != nullptr) eta[i] = trace[i].eta;
      if (coverage != nullptr) coverage[i] = trace[i].coverage;
    }
    if (length != nullptr) *length = trace.size();
  });
}

void gprc_calibrator_free(gprc_calibrator* c) { delete c; }

gprc_status gprc_experiment_run_file(const char* config_path,
                                     const char* output_override, int threads,
                                     char* summary, size_t summary_capacity) {
  return guarded([&] {
    gprc::require(config_path != nullptr, gprc::Status::invalid_argument,
                  "config_path must not be NULL");
    auto config = gprc::experiment::load_config_file(config_path);
    if (output_override != nullptr) config.output_path = output_override;
    const auto results = gprc::experiment::run_and_write(config, threads);
    copy_summary(gprc::experiment::summary_table(results), summary, summary_capacity);
  });
}

gprc_status gprc_experiment_run_text(const char* config_json,
                                     const char* output_override, int threads,
                                     char* summary, size_t summary_capacity) {
  return guarded([&] {
    gprc::require(config_json != nullptr, gprc::Status::invalid_argument,
                  "config_json must not be NULL");
    auto config = gprc::experiment::parse_config_text(config_json);
    if (output_override != nullptr) config.output_path = output_override;
    const auto results = gprc::experiment::run_and_write(config, threads);
    copy_summary(gprc::experiment::summary_table(results), summary, summary_capacity);
  });
}

size_t gprc_scenario_count(void) {
  return gprc::experiment::scenario_catalog().size();
}

const char* gprc_scenario_name(size_t i) {
  const auto& catalog = gprc::experiment::scenario_catalog();
  return i < catalog.size() ? catalog[i].name : nullptr;
}

const char* gprc_scenario_regime(size_t i) {
  const auto& catalog = gprc::experiment::scenario_catalog();
  return i < catalog.size() ? catalog[i].regime : nullptr;
}

const char* gprc_scenario_description(size_t i) {
  const auto& catalog = gprc::experiment::scenario_catalog();
  return i < catalog.size() ? catalog[i].description : nullptr;
}

}  // extern "C"
