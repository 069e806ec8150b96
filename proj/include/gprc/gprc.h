/* Generalized predictive calibration (GPrC): C interface.
 *
 * The library tunes the learning rate of a generalized Bayesian predictive
 * distribution so that its upper-alpha quantile is a calibrated frequentist
 * prediction limit, using model-appropriate bootstrap coverage estimates and
 * stochastic approximation.
 *
 * All functions return GPRC_OK (0) on success or a negative status code; a
 * thread-local message for the last failure is available via gprc_last_error().
 * Objects returned through out-parameters are owned by the caller and must be
 * released with the matching _free function.
 */

#ifndef GPRC_H
#define GPRC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gprc_status {
  GPRC_OK = 0,
  GPRC_ERROR_INVALID_ARGUMENT = -1,
  GPRC_ERROR_DOMAIN = -2,
  GPRC_ERROR_INSUFFICIENT_DATA = -3,
  GPRC_ERROR_SHAPE = -4,
  GPRC_ERROR_SINGULAR = -5,
  GPRC_ERROR_NONCONVERGENT = -6,
  GPRC_ERROR_DEGENERATE = -7,
  GPRC_ERROR_PARSE = -8,
  GPRC_ERROR_IO = -9,
  GPRC_ERROR_UNKNOWN = -10
} gprc_status;

const char* gprc_version(void);

/* Static name for a status code. */
const char* gprc_status_name(gprc_status status);

/* Thread-local detail message for the most recent failing call. */
const char* gprc_last_error(void);

/* ------------------------------------------------------------ calibration */

/* Opaque calibration result: tuned learning rate, trace, prediction limit. */
typedef struct gprc_calibrator gprc_calibrator;

typedef struct gprc_calibrate_options {
  /* Model id: "gamma", "normal_knownvar", "normal", "lognormal",
   * "regression", "ar1", "gp". */
  const char* model;
  double alpha;               /* upper-alpha prediction level, in (0,1) */
  size_t bootstrap_replicates; /* B */
  uint64_t seed;
  size_t block_length;   /* time series only; 0 picks round(n^(1/3)) */
  size_t max_iterations; /* 0 picks the default (1000) */
  /* gamma model */
  double gamma_model_shape; /* k0; 0 picks the default (3) */
  /* known-variance normal model (required when model == "normal_knownvar") */
  double sigma2;
  /* spatial prediction target (model == "gp") */
  double target_x;
  double target_y;
} gprc_calibrate_options;

/* Fills every field with its default. */
void gprc_calibrate_options_init(gprc_calibrate_options* options);

/* iid models ("gamma", "normal_knownvar", "normal", "lognormal"). */
gprc_status gprc_calibrate_iid(const double* values, size_t n,
                               const gprc_calibrate_options* options,
                               gprc_calibrator** out);

/* AR(1) model on an ordered series (block bootstrap). */
gprc_status gprc_calibrate_timeseries(const double* series, size_t n,
                                      const gprc_calibrate_options* options,
                                      gprc_calibrator** out);

/* Conjugate linear regression (paired bootstrap).  x is row-major n x q.
 * The reported prediction limit conditions on the final row. */
gprc_status gprc_calibrate_regression(const double* x, size_t n, size_t q,
                                      const double* y,
                                      const gprc_calibrate_options* options,
                                      gprc_calibrator** out);

/* Gaussian-process model at (target_x, target_y); semi-parametric bootstrap. */
gprc_status gprc_calibrate_spatial(const double* site_x, const double* site_y,
                                   const double* values, size_t n,
                                   const gprc_calibrate_options* options,
                                   gprc_calibrator** out);

/* Reads the file per the model's regime: one column (iid, time series),
 * covariates-then-response rows (regression), x y value triples (spatial). */
gprc_status gprc_calibrate_file(const char* path,
                                const gprc_calibrate_options* options,
                                gprc_calibrator** out);

double gprc_calibrator_eta(const gprc_calibrator* c);
int gprc_calibrator_converged(const gprc_calibrator* c);
size_t gprc_calibrator_iterations(const gprc_calibrator* c);
double gprc_calibrator_tolerance(const gprc_calibrator* c);
/* Upper-alpha predictive quantile of the tuned predictive on the input data. */
double gprc_calibrator_prediction_limit(const gprc_calibrator* c);
size_t gprc_calibrator_trace_length(const gprc_calibrator* c);
/* Copies up to capacity trace points (learning rate, estimated coverage). */
gprc_status gprc_calibrator_trace(const gprc_calibrator* c, double* eta,
                                  double* coverage, size_t capacity, size_t* length);
void gprc_calibrator_free(gprc_calibrator* c);

/* ------------------------------------------------------------ experiments */

/* Runs a JSON experiment config, writing the replication CSV to the config's
 * output path (or output_override when non-NULL) plus a _summary.csv next to
 * it.  threads == 0 uses GPRC_THREADS or the hardware count.  When summary is
 * non-NULL, up to summary_capacity bytes of a human-readable summary table
 * are copied into it (always NUL-terminated). */
gprc_status gprc_experiment_run_file(const char* config_path,
                                     const char* output_override, int threads,
                                     char* summary, size_t summary_capacity);

/* Same, with the config document passed as text. */
gprc_status gprc_experiment_run_text(const char* config_json,
                                     const char* output_override, int threads,
                                     char* summary, size_t summary_capacity);

/* ---------------------------------------------------------------- catalog */

size_t gprc_scenario_count(void);
/* name/regime/description of scenario i; returns NULL when out of range. */
const char* gprc_scenario_name(size_t i);
const char* gprc_scenario_regime(size_t i);
const char* gprc_scenario_description(size_t i);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GPRC_H */
