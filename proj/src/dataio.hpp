#pragma once

#include <string>
#include <vector>

#include "covariance.hpp"
#include "data_types.hpp"

namespace gprc::dataio {

// One numeric value per line; blank lines and '#' comments are skipped.
// Parse failures name the offending line.
std::vector<double> read_column(const std::string& path);

// Each line holds the covariates followed by the response; the covariate
// count is fixed by the first data line.
RegressionData read_regression(const std::string& path);

struct SpatialFile {
  std::vector<Point> sites;
  std::vector<double> values;
};

// Lines of (x, y, value) triples.
SpatialFile read_spatial(const std::string& path);

// Writes text to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace gprc::dataio
