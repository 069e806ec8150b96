#pragma once

#include <vector>

#include "math/linalg.hpp"

namespace gprc {

// Regression sample: n x q design plus response vector of length n.
struct RegressionData {
  math::Matrix x;
  std::vector<double> y;

  std::size_t n() const { return y.size(); }
  std::size_t q() const { return x.cols(); }
};

}  // namespace gprc
