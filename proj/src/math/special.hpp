#pragma once

namespace gprc::math {

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
// Continued-fraction evaluation (Lentz), relative accuracy ~1e-15.
double incomplete_beta(double a, double b, double x);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
// Series for x < a + 1, continued fraction otherwise.
double incomplete_gamma_p(double a, double x);

// CDF of the standard Student-t distribution with df degrees of freedom.
double student_t_cdf(double t, double df);

}  // namespace gprc::math
