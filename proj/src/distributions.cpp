#include "pdag/distributions.hpp"

#include <cmath>
#include <limits>

#include "pdag/types.hpp"

namespace pdag {

namespace {

double inc_gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double inc_gamma_cf(double a, double x) {
  const double fpmin = std::numeric_limits<double>::min() / 1e-16;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;  // upper tail Q(a, x)
}

}  // namespace

double reg_inc_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw Error::domain("reg_inc_gamma: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return inc_gamma_series(a, x);
  return 1.0 - inc_gamma_cf(a, x);
}

double chi2_cdf(double x, double df) {
  if (!(df >= 1.0)) throw Error::domain("chi2_cdf: df must be >= 1");
  if (x < 0.0) throw Error::domain("chi2_cdf: x must be >= 0");
  return reg_inc_gamma(df / 2.0, x / 2.0);
}

double chi2_pdf(double x, double df) {
  if (!(df >= 1.0)) throw Error::domain("chi2_pdf: df must be >= 1");
  if (x < 0.0) return 0.0;
  if (x == 0.0) return df < 2.0 ? std::numeric_limits<double>::infinity() : (df == 2.0 ? 0.5 : 0.0);
  double half = df / 2.0;
  return std::exp((half - 1.0) * std::log(x) - x / 2.0 - half * std::log(2.0) - std::lgamma(half));
}

double chi2_quantile(double q, double df) {
  if (!(q > 0.0 && q < 1.0)) throw Error::domain("chi2_quantile: q must be in (0, 1)");
  if (!(df >= 1.0)) throw Error::domain("chi2_quantile: df must be >= 1");
  // Bracket then bisection/Newton hybrid.
  double lo = 0.0, hi = df + 10.0;
  while (chi2_cdf(hi, df) < q) hi *= 2.0;
  double x = df;  // start near the mean
  for (int it = 0; it < 200; ++it) {
    double f = chi2_cdf(x, df) - q;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    double pdf = chi2_pdf(x, df);
    double step = pdf > 0.0 ? f / pdf : 0.0;
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) < 1e-12 * (1.0 + std::fabs(x)) && std::fabs(f) < 1e-12) {
      x = next;
      break;
    }
    x = next;
    if (hi - lo < 1e-13 * (1.0 + hi)) break;
  }
  return x;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error::domain("normal_quantile: q must be in (0, 1)");
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < q)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double min_chi2_survival(double x, int d) {
  if (d < 1) throw Error::domain("min_chi2_survival: d must be >= 1");
  if (x < 0.0) throw Error::domain("min_chi2_survival: x must be >= 0");
  return std::pow(1.0 - chi2_cdf(x, 1.0), d);
}

double min_chi2_quantile(double q, int d) {
  if (d < 1) throw Error::domain("min_chi2_quantile: d must be >= 1");
  if (!(q > 0.0 && q < 1.0)) throw Error::domain("min_chi2_quantile: q must be in (0, 1)");
  double inner = 1.0 - std::pow(1.0 - q, 1.0 / d);
  return chi2_quantile(inner, 1.0);
}

double min_chi2_pdf(double x, int d) {
  if (d < 1) throw Error::domain("min_chi2_pdf: d must be >= 1");
  if (x <= 0.0) return 0.0;
  double s = 1.0 - chi2_cdf(x, 1.0);
  return d * std::pow(s, d - 1) * chi2_pdf(x, 1.0);
}

double gen_gamma_survival(double x) {
  if (x < 0.0) throw Error::domain("gen_gamma_survival: x must be >= 0");
  return std::exp(-std::sqrt(2.0 * x / M_PI));
}

double gen_gamma_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error::domain("gen_gamma_quantile: q must be in (0, 1)");
  double t = std::log1p(-q);
  return 0.5 * M_PI * t * t;
}

double gen_gamma_quantile_survival(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw Error::domain("gen_gamma_quantile_survival: s must be in (0, 1]");
  double t = std::log(s);
  return 0.5 * M_PI * t * t;
}

double gen_gamma_pdf(double x) {
  if (x <= 0.0) return 0.0;
  return std::sqrt(1.0 / (2.0 * M_PI * x)) * std::exp(-std::sqrt(2.0 * x / M_PI));
}

}  // namespace pdag
