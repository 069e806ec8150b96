#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace testutil {

// Adaptive Simpson quadrature; independent of the library's trapezoid path.
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fb, double fm, double whole, double tol,
                           int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_step(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fb, fm, whole, tol, 40);
}

// Kolmogorov statistic of a sample against an analytic CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double value = cdf(sample[i]);
    worst = std::max(worst, std::fabs(value - static_cast<double>(i) / n));
    worst = std::max(worst, std::fabs(static_cast<double>(i + 1) / n - value));
  }
  return worst;
}

inline double mean(const std::vector<double>& values) {
  double s = 0.0;
  for (const double v : values) s += v;
  return s / static_cast<double>(values.size());
}

inline double variance(const std::vector<double>& values) {
  const double m = mean(values);
  double s = 0.0;
  for (const double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(values.size());
}

}  // namespace testutil
