#pragma once

namespace gprc::math {

double norm_pdf(double x);
double norm_log_pdf(double x);
double norm_log_pdf(double x, double mean, double variance);
double norm_cdf(double x);

// Inverse standard normal CDF for p in (0,1).  Rational approximation after
// Wichura's AS 241 (PPND16), accurate to ~1e-16 over the full range.
double norm_quantile(double p);

// Upper-alpha standard normal quantile, norm_quantile(1 - alpha).
double norm_upper_quantile(double alpha);

}  // namespace gprc::math
