// gprc command line: experiment runner, single-shot calibration, scenario
// listing.  Talks to the library exclusively through the C API in gprc/gprc.h.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gprc/gprc.h"

namespace {

int report_failure(gprc_status status) {
  std::fprintf(stderr, "error (%s): %s\n", gprc_status_name(status), gprc_last_error());
  return 1;
}

int run_experiment(const std::string& config_path, const std::string& output,
                   int threads) {
  std::vector<char> summary(8192);
  const gprc_status status = gprc_experiment_run_file(
      config_path.c_str(), output.empty() ? nullptr : output.c_str(), threads,
      summary.data(), summary.size());
  if (status != GPRC_OK) return report_failure(status);
  std::fputs(summary.data(), stdout);
  return 0;
}

int run_calibrate(const std::string& data_path, const gprc_calibrate_options& options,
                  const std::string& trace_path) {
  gprc_calibrator* calibrator = nullptr;
  const gprc_status status = gprc_calibrate_file(data_path.c_str(), &options, &calibrator);
  if (status != GPRC_OK) return report_failure(status);

  std::printf("eta_hat            %.6g\n", gprc_calibrator_eta(calibrator));
  std::printf("prediction_limit   %.10g\n", gprc_calibrator_prediction_limit(calibrator));
  std::printf("iterations         %zu\n", gprc_calibrator_iterations(calibrator));
  std::printf("converged          %s\n",
              gprc_calibrator_converged(calibrator) ? "yes" : "no");
  std::printf("tolerance          %.6g\n", gprc_calibrator_tolerance(calibrator));

  int rc = 0;
  if (!trace_path.empty()) {
    const size_t length = gprc_calibrator_trace_length(calibrator);
    std::vector<double> eta(length);
    std::vector<double> coverage(length);
    size_t written = 0;
    if (gprc_calibrator_trace(calibrator, eta.data(), coverage.data(), length,
                              &written) != GPRC_OK) {
      rc = report_failure(GPRC_ERROR_UNKNOWN);
    } else if (FILE* out = std::fopen(trace_path.c_str(), "w")) {
      std::fprintf(out, "t,eta,coverage\n");
      for (size_t t = 0; t < written; ++t) {
        std::fprintf(out, "%zu,%.10g,%.10g\n", t, eta[t], coverage[t]);
      }
      std::fclose(out);
    } else {
      std::fprintf(stderr, "error: cannot write trace to '%s'\n", trace_path.c_str());
      rc = 1;
    }
  }
  gprc_calibrator_free(calibrator);
  return rc;
}

int list_scenarios() {
  std::printf("%-18s %-11s %s\n", "scenario", "regime", "description");
  for (size_t i = 0; i < gprc_scenario_count(); ++i) {
    std::printf("%-18s %-11s %s\n", gprc_scenario_name(i), gprc_scenario_regime(i),
                gprc_scenario_description(i));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized predictive calibration (GPrC)"};
  app.require_subcommand(1);

  // experiment <config>
  std::string config_path;
  std::string output_override;
  int threads = 0;
  auto* experiment = app.add_subcommand(
      "experiment", "Run a JSON experiment config and write replication CSVs");
  experiment->add_option("config", config_path, "Path to the JSON config")->required();
  experiment->add_option("--output", output_override, "Override the config's output path");
  experiment->add_option("--threads", threads,
                         "Worker threads (default: GPRC_THREADS or all cores)");

  // calibrate <data> --model ...
  std::string data_path;
  std::string model = "gamma";
  std::string trace_path;
  double alpha = 0.05;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  std::size_t block_length = 0;
  std::size_t max_iterations = 0;
  double k0 = 0.0;
  double sigma2 = 0.0;
  std::vector<double> target{0.0, 0.0};
  auto* calibrate = app.add_subcommand(
      "calibrate", "Tune the learning rate for a data file and print the limit");
  calibrate->add_option("data", data_path, "Data file")->required();
  calibrate->add_option("--model", model,
                        "gamma | normal_knownvar | normal | lognormal | regression | "
                        "ar1 | gp");
  calibrate->add_option("--alpha", alpha, "Upper-alpha level (default 0.05)");
  calibrate->add_option("--B", replicates, "Bootstrap replicates (default 200)");
  calibrate->add_option("--seed", seed, "RNG seed (default 1)");
  calibrate->add_option("--block-length", block_length,
                        "Block length for ar1 (default: round(n^(1/3)))");
  calibrate->add_option("--max-iterations", max_iterations,
                        "Iteration cap (default 1000)");
  calibrate->add_option("--k0", k0, "Gamma model shape (default 3)");
  calibrate->add_option("--sigma2", sigma2, "Known variance for normal_knownvar");
  calibrate->add_option("--target", target, "Spatial prediction target x y")
      ->expected(2);
  calibrate->add_option("--trace", trace_path, "Write the (t, eta, coverage) trace CSV");

  // scenarios list
  auto* scenarios = app.add_subcommand("scenarios", "Scenario catalog");
  auto* scenarios_list = scenarios->add_subcommand("list", "List available scenarios");

  CLI11_PARSE(app, argc, argv);

  if (experiment->parsed()) return run_experiment(config_path, output_override, threads);
  if (calibrate->parsed()) {
    gprc_calibrate_options options;
    gprc_calibrate_options_init(&options);
    options.model = model.c_str();
    options.alpha = alpha;
    options.bootstrap_replicates = replicates;
    options.seed = seed;
    options.block_length = block_length;
    options.max_iterations = max_iterations;
    options.gamma_model_shape = k0;
    options.sigma2 = sigma2;
    options.target_x = target[0];
    options.target_y = target[1];
    return run_calibrate(data_path, options, trace_path);
  }
  if (scenarios->parsed()) {
    if (scenarios_list->parsed() || scenarios->get_subcommands().empty()) {
      return list_scenarios();
    }
  }
  return 0;
}
