#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gprc/gprc.h"

namespace {

std::vector<double> gamma_like_sample(std::size_t n) {
  // deterministic positive data, roughly gamma shaped
  std::vector<double> data(n);
  unsigned long long state = 88172645463325252ull;
  for (auto& v : data) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    const double u1 = static_cast<double>(state % 100000) / 100000.0 + 1e-6;
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    const double u2 = static_cast<double>(state % 100000) / 100000.0 + 1e-6;
    const double u3 = static_cast<double>((state >> 32) % 100000) / 100000.0 + 1e-6;
    v = -std::log(u1) - std::log(u2) - std::log(u3);  // sum of three Exp(1)
  }
  return data;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(gprc_version()) == "0.1.0");
  CHECK(std::string(gprc_status_name(GPRC_OK)) == "ok");
  CHECK(std::string(gprc_status_name(GPRC_ERROR_PARSE)) == "parse error");
}

TEST_CASE("iid calibration through the C surface") {
  const auto data = gamma_like_sample(300);
  gprc_calibrate_options options;
  gprc_calibrate_options_init(&options);
  options.model = "gamma";
  options.alpha = 0.10;
  options.bootstrap_replicates = 100;
  options.seed = 4;

  gprc_calibrator* calibrator = nullptr;
  REQUIRE(gprc_calibrate_iid(data.data(), data.size(), &options, &calibrator) == GPRC_OK);
  REQUIRE(calibrator != nullptr);
  CHECK(gprc_calibrator_eta(calibrator) > 0.0);
  CHECK(gprc_calibrator_prediction_limit(calibrator) > 0.0);
  CHECK(gprc_calibrator_iterations(calibrator) >= 1);
  CHECK(gprc_calibrator_tolerance(calibrator) == doctest::Approx(0.001));

  const size_t length = gprc_calibrator_trace_length(calibrator);
  CHECK(length == gprc_calibrator_iterations(calibrator));
  std::vector<double> eta(length);
  std::vector<double> coverage(length);
  size_t written = 0;
  CHECK(gprc_calibrator_trace(calibrator, eta.data(), coverage.data(), length,
                              &written) == GPRC_OK);
  CHECK(written == length);
  CHECK(eta.front() == doctest::Approx(0.5));  // documented starting value
  for (const double c : coverage) {
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
  }
  gprc_calibrator_free(calibrator);
}

TEST_CASE("error codes and messages cross the boundary") {
  gprc_calibrate_options options;
  gprc_calibrate_options_init(&options);
  options.model = "gamma";

  gprc_calibrator* calibrator = nullptr;
  const double one = 1.0;
  CHECK(gprc_calibrate_iid(&one, 1, &options, &calibrator) ==
        GPRC_ERROR_INSUFFICIENT_DATA);
  CHECK(calibrator == nullptr);
  CHECK(std::string(gprc_last_error()).find("two observations") != std::string::npos);

  options.model = "no_such_model";
  const double data[4] = {1.0, 2.0, 3.0, 4.0};
  CHECK(gprc_calibrate_iid(data, 4, &options, &calibrator) == GPRC_ERROR_PARSE);

  options.model = "gamma";
  options.alpha = 2.0;
  CHECK(gprc_calibrate_iid(data, 4, &options, &calibrator) == GPRC_ERROR_DOMAIN);

  // negative data cannot be gamma distributed
  options.alpha = 0.1;
  const double bad[4] = {1.0, -2.0, 3.0, 4.0};
  CHECK(gprc_calibrate_iid(bad, 4, &options, &calibrator) == GPRC_ERROR_DOMAIN);
}

TEST_CASE("time series and regression entry points") {
  std::vector<double> series(150);
  double y = 0.0;
  unsigned long long state = 99ull;
  for (auto& v : series) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    const double u = static_cast<double>(state >> 11) * 0x1.0p-53 + 1e-12;
    y = 0.7 * y + (u - 0.5);
    v = y;
  }
  gprc_calibrate_options options;
  gprc_calibrate_options_init(&options);
  options.model = "ar1";
  options.alpha = 0.1;
  options.bootstrap_replicates = 50;
  gprc_calibrator* calibrator = nullptr;
  REQUIRE(gprc_calibrate_timeseries(series.data(), series.size(), &options,
                                    &calibrator) == GPRC_OK);
  CHECK(gprc_calibrator_eta(calibrator) > 0.0);
  gprc_calibrator_free(calibrator);

  // simple line with noise-free responses still calibrates (wide eta)
  const size_t n = 40;
  std::vector<double> x(n * 2);
  std::vector<double> resp(n);
  for (size_t i = 0; i < n; ++i) {
    x[2 * i] = 1.0;
    x[2 * i + 1] = static_cast<double>(i) / 10.0;
    resp[i] = 2.0 + 0.5 * x[2 * i + 1] + ((i % 3 == 0) ? 0.2 : -0.1);
  }
  options.model = "regression";
  calibrator = nullptr;
  REQUIRE(gprc_calibrate_regression(x.data(), n, 2, resp.data(), &options,
                                    &calibrator) == GPRC_OK);
  CHECK(gprc_calibrator_prediction_limit(calibrator) > 0.0);
  gprc_calibrator_free(calibrator);
}

TEST_CASE("experiment runner via config text") {
  const char* config = R"({
    "scenario": {"id": "gamma_true"},
    "n": 60, "alpha": [0.1], "B": 30, "R": 4, "seed": 12,
    "methods": ["gprc"], "output": "capi_experiment.csv"
  })";
  char summary[2048] = {0};
  REQUIRE(gprc_experiment_run_text(config, nullptr, 1, summary, sizeof(summary)) ==
          GPRC_OK);
  CHECK(std::string(summary).find("gprc") != std::string::npos);
  std::ifstream out("capi_experiment.csv");
  CHECK(out.good());
  std::string header;
  std::getline(out, header);
  CHECK(header.rfind("scenario,method,n,alpha", 0) == 0);
  out.close();
  std::remove("capi_experiment.csv");
  std::remove("capi_experiment_summary.csv");

  // config errors surface as parse failures with a message
  CHECK(gprc_experiment_run_text("{\"n\": 4}", nullptr, 1, nullptr, 0) ==
        GPRC_ERROR_PARSE);
  CHECK(std::string(gprc_last_error()).find("scenario") != std::string::npos);
}

TEST_CASE("scenario catalog is exposed") {
  REQUIRE(gprc_scenario_count() == 14);
  bool found = false;
  for (size_t i = 0; i < gprc_scenario_count(); ++i) {
    if (std::string(gprc_scenario_name(i)) == "sp3") {
      found = true;
      CHECK(std::string(gprc_scenario_regime(i)) == "spatial");
    }
  }
  CHECK(found);
  CHECK(gprc_scenario_name(999) == nullptr);
}
