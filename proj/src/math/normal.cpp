#include "math/normal.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "error.hpp"

namespace gprc::math {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

double rational(const double* num, const double* den, std::size_t k, double x) {
  double u = num[k - 1];
  for (std::size_t i = k - 1; i > 0; --i) u = x * u + num[i - 1];
  double v = den[k - 1];
  for (std::size_t i = k - 1; i > 0; --i) v = x * v + den[i - 1];
  return u / v;
}

// AS 241 regions: |p - 0.5| <= 0.425, and two tail pieces split at r = 5.
double ppnd16_central(double q) {
  static const double a[8] = {
      3.387132872796366608,  133.14166789178437745, 1971.5909503065514427,
      13731.693765509461125, 45921.953931549871457, 67265.770927008700853,
      33430.575583588128105, 2509.0809287301226727};
  static const double b[8] = {
      1.0,
      42.313330701600911252,
      687.1870074920579083,
      5394.1960214247511077,
      21213.794301586595867,
      39307.89580009271061,
      28729.085735721942674,
      5226.495278852854561};
  const double r = 0.180625 - q * q;
  return q * rational(a, b, 8, r);
}

double ppnd16_intermediate(double r) {
  static const double a[8] = {
      1.42343711074968357734,   4.6303378461565452959,
      5.7694972214606914055,    3.64784832476320460504,
      1.27045825245236838258,   0.24178072517745061177,
      0.0227238449892691845833, 7.7454501427834140764e-4};
  static const double b[8] = {
      1.0,
      2.05319162663775882187,
      1.6763848301838038494,
      0.68976733498510000455,
      0.14810397642748007459,
      0.0151986665636164571966,
      5.475938084995344946e-4,
      1.05075007164441684324e-9};
  return rational(a, b, 8, r - 1.6);
}

double ppnd16_tail(double r) {
  static const double a[8] = {
      6.6579046435011037772,     5.4637849111641143699,
      1.7848265399172913358,     0.29656057182850489123,
      0.026532189526576123093,   0.0012426609473880784386,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double b[8] = {
      1.0,
      0.59983220655588793769,
      0.13692988092273580531,
      0.0148753612908506148525,
      7.868691311456132591e-4,
      1.8463183175100546818e-5,
      1.4215117583164458887e-7,
      2.04426310338993978564e-15};
  return rational(a, b, 8, r - 5.0);
}

}  // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }

double norm_log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double norm_log_pdf(double x, double mean, double variance) {
  const double z = x - mean;
  return -0.5 * z * z / variance - 0.5 * std::log(variance) - kLogSqrt2Pi;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

double norm_quantile(double p) {
  require(p > 0.0 && p < 1.0, Status::domain_error,
          "norm_quantile: p must lie in (0,1)");
  const double dp = p - 0.5;
  if (std::fabs(dp) <= 0.425) return ppnd16_central(dp);
  const double pp = (p < 0.5) ? p : 1.0 - p;
  const double r = std::sqrt(-std::log(pp));
  const double x = (r <= 5.0) ? ppnd16_intermediate(r) : ppnd16_tail(r);
  return (p < 0.5) ? -x : x;
}

double norm_upper_quantile(double alpha) { return norm_quantile(1.0 - alpha); }

}  // namespace gprc::math
