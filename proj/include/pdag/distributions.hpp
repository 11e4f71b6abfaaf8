#pragma once

namespace pdag {

/// Regularized lower incomplete gamma P(a, x), series for x < a+1 and
/// continued fraction otherwise.
double reg_inc_gamma(double a, double x);

double chi2_cdf(double x, double df);
double chi2_quantile(double q, double df);  // inverted to 1e-10

double chi2_pdf(double x, double df);

double normal_cdf(double z);
double normal_quantile(double q);

/// Minimum of d independent chi-square(1) variables.
double min_chi2_survival(double x, int d);
double min_chi2_quantile(double q, int d);
double min_chi2_pdf(double x, int d);

/// Limit law of 2 d^2 lr for long pathways: survival exp(-sqrt(2x/pi)).
double gen_gamma_survival(double x);
double gen_gamma_quantile(double q);
/// Quantile of the point with survival probability s; the exact inverse of
/// gen_gamma_survival without 1 - q cancellation in the far tail.
double gen_gamma_quantile_survival(double s);
double gen_gamma_pdf(double x);

}  // namespace pdag
