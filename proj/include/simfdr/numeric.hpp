#pragma once

namespace simfdr {

// Standard normal CDF, absolute error below 1e-12 for |x| <= 8.
double std_normal_cdf(double x);

// Standard normal density.
double std_normal_pdf(double x);

// Inverse standard normal CDF. Domain (0,1), throws std::domain_error at the
// endpoints. Absolute error below 1e-9 over [1e-12, 1 - 1e-12].
double std_normal_quantile(double p);

// Student-t CDF with v >= 1 degrees of freedom; absolute error below 1e-10.
double student_t_cdf(double x, int v);

// Student-t quantile on (0,1); bisection on student_t_cdf (oracle support).
double student_t_quantile(double p, int v);

// Chi-square CDF with k >= 1 degrees of freedom; returns 0 for x <= 0.
// Absolute error below 1e-10.
double chi_square_cdf(double x, int k);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_lower_gamma(double a, double x);

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

} // namespace simfdr
