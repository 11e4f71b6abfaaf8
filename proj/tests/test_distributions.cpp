#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "pdag/distributions.hpp"
#include "pdag/rng.hpp"
#include "pdag/types.hpp"

using namespace pdag;

namespace {

// Independent quadrature oracle: adaptive Simpson over the chi-square density.
double simpson(const std::function<double(double)>& f, double a, double b, int steps) {
  if (steps % 2) ++steps;  // composite Simpson needs an even panel count
  double h = (b - a) / steps;
  double total = f(a) + f(b);
  for (int i = 1; i < steps; ++i) total += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return total * h / 3.0;
}

double chi2_cdf_quadrature(double x, double df) {
  auto density = [df](double t) {
    double half = df / 2.0;
    if (t <= 0.0) return df == 2.0 ? 0.5 : 0.0;  // continuous limit at zero
    return std::exp((half - 1.0) * std::log(t) - t / 2.0 - half * std::log(2.0) - std::lgamma(half));
  };
  // avoid the t^{-1/2} endpoint by substituting t = u^2 for df = 1:
  // the integrand becomes 2 exp(-u^2/2) / sqrt(2 pi)
  if (df == 1.0) {
    auto g = [](double u) { return 2.0 * std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); };
    return simpson(g, 0.0, std::sqrt(x), 20000);
  }
  return simpson(density, 0.0, x, 20000);
}

}  // namespace

TEST_CASE("chi2 quantile closed forms") {
  // chi-square with 2 df is exponential(mean 2): median = 2 ln 2
  CHECK(std::fabs(chi2_quantile(0.5, 2) - 2.0 * std::log(2.0)) < 1e-9);
  CHECK(chi2_cdf(0.0, 1) == 0.0);
  CHECK(chi2_cdf(0.0, 7) == 0.0);
}

TEST_CASE("chi2 quantile against the quadrature oracle") {
  double q95 = chi2_quantile(0.95, 1);
  CHECK(q95 == doctest::Approx(3.841459).epsilon(1e-6));
  CHECK(chi2_cdf_quadrature(q95, 1.0) == doctest::Approx(0.95).epsilon(1e-7));

  for (double df : {1.0, 2.0, 5.0, 30.0}) {
    for (double q : {0.05, 0.5, 0.9, 0.99}) {
      double x = chi2_quantile(q, df);
      CHECK(chi2_cdf(x, df) == doctest::Approx(q).epsilon(1e-9));
      CHECK(chi2_cdf_quadrature(x, df) == doctest::Approx(q).epsilon(1e-6));
    }
  }
}

TEST_CASE("normal cdf and quantile") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-7));
}

TEST_CASE("min chi2 reduces to chi2 at d = 1") {
  for (double x : {0.0, 0.3, 1.7, 5.2, 11.0}) {
    CHECK(std::fabs(min_chi2_survival(x, 1) - (1.0 - chi2_cdf(x, 1))) < 1e-12);
  }
  for (double q : {0.1, 0.5, 0.95}) {
    CHECK(min_chi2_quantile(q, 1) == doctest::Approx(chi2_quantile(q, 1)).epsilon(1e-10));
  }
  CHECK(min_chi2_survival(0.0, 5) == 1.0);
}

TEST_CASE("min chi2 quantile against a large Monte Carlo draw") {
  Rng rng(123);
  const int reps = 1000000;
  std::vector<double> sample(reps);
  for (int r = 0; r < reps; ++r) {
    double m = std::numeric_limits<double>::infinity();
    for (int d = 0; d < 5; ++d) {
      double z = rng.next_gaussian();
      m = std::min(m, z * z);
    }
    sample[r] = m;
  }
  std::nth_element(sample.begin(), sample.begin() + static_cast<long>(0.95 * reps), sample.end());
  double mc95 = sample[static_cast<long>(0.95 * reps)];
  CHECK(std::fabs(min_chi2_quantile(0.95, 5) - mc95) < 0.01);
}

TEST_CASE("generalized gamma closed forms") {
  CHECK(gen_gamma_survival(0.0) == 1.0);
  double q95 = gen_gamma_quantile(0.95);
  CHECK(q95 == doctest::Approx(0.5 * M_PI * std::pow(std::log(0.05), 2)).epsilon(1e-12));
  CHECK(q95 == doctest::Approx(14.0969).epsilon(1e-4));
  CHECK(gen_gamma_survival(q95) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("generalized gamma round trip on a log-spaced grid") {
  for (double x = 1e-6; x < 1e4; x *= 3.0) {
    double s = gen_gamma_survival(x);
    CHECK(gen_gamma_quantile_survival(s) == doctest::Approx(x).epsilon(1e-10));
  }
  // the (0,1)-parameterized quantile agrees where 1 - q is representable
  for (double x : {0.01, 0.5, 3.0, 10.0}) {
    double q = 1.0 - gen_gamma_survival(x);
    CHECK(gen_gamma_quantile(q) == doctest::Approx(x).epsilon(1e-9));
  }
}

TEST_CASE("generalized gamma density integrates to one") {
  // substitute x = t^2: integrand becomes sqrt(2/pi) exp(-t sqrt(2/pi)) * ...
  auto g = [](double t) { return 2.0 * t * gen_gamma_pdf(t * t); };
  double integral = simpson(g, 1e-12, 100.0, 200001);
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("p-values are monotone in the statistic") {
  for (int df : {1, 3, 5}) {
    double prev_chi = 1.0, prev_min = 1.0;
    for (double x = 0.0; x < 20.0; x += 0.37) {
      double pc = 1.0 - chi2_cdf(x, df);
      double pm = min_chi2_survival(x, df);
      CHECK(pc <= prev_chi + 1e-12);
      CHECK(pm <= prev_min + 1e-12);
      prev_chi = pc;
      prev_min = pm;
    }
  }
  double prev = 1.0;
  for (double x = 0.0; x < 40.0; x += 0.61) {
    double pg = gen_gamma_survival(x);
    CHECK(pg <= prev + 1e-12);
    prev = pg;
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(chi2_cdf(-1.0, 2), Error);
  CHECK_THROWS_AS(chi2_quantile(0.0, 2), Error);
  CHECK_THROWS_AS(chi2_quantile(0.5, 0), Error);
  CHECK_THROWS_AS(min_chi2_survival(1.0, 0), Error);
  CHECK_THROWS_AS(gen_gamma_survival(-0.1), Error);
  CHECK_THROWS_AS(gen_gamma_quantile(1.0), Error);
}
