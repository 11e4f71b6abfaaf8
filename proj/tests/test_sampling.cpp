#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdag/sampling.hpp"
#include "test_util.hpp"

using namespace pdag;

TEST_CASE("poisson(1) sample mean") {
  CoefMatrix coef(1);
  const int n = 100000;
  CountMatrix sample = sample_dag(coef, n, 42);
  double mean = sample.values().col(0).mean();
  // sd of the mean = 1/sqrt(n)
  CHECK(std::fabs(mean - 1.0) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("chain mean matches the truncated-enumeration oracle") {
  // X1 ~ Poisson(1); E[X2] = E[exp(-0.5 X1)] = sum_k e^{-1}/k! * e^{-0.5 k}
  CoefMatrix coef(3);
  coef.set_weight(1, 2, -0.5);
  coef.set_weight(2, 3, -0.5);
  double expected = 0.0;
  double logfact = 0.0;
  for (int k = 0; k <= 50; ++k) {
    if (k >= 2) logfact += std::log(static_cast<double>(k));
    expected += std::exp(-1.0 - logfact - 0.5 * k);
  }
  const int n = 100000;
  CountMatrix sample = sample_dag(coef, n, 7);
  double mean = sample.values().col(1).mean();
  // Var(X2) = E[e^{-0.5 X1}] + Var(e^{-0.5 X1}); bound loosely by 1.0
  CHECK(std::fabs(mean - expected) <= 3.0 * std::sqrt(1.0 / n));
}

TEST_CASE("determinism: identical seeds give identical draws") {
  CoefMatrix coef = testutil::random_coef(4, 5, 0.2);
  // make support acyclic: keep only upper-triangular weights
  CoefMatrix tri(4);
  for (int i = 1; i <= 4; ++i) {
    tri.set_intercept(i, coef.intercepts()[i - 1] * 0.1);
    for (int j = i + 1; j <= 4; ++j) tri.set_weight(i, j, coef.weight(i, j));
  }
  CountMatrix a = sample_dag(tri, 200, 99);
  CountMatrix b = sample_dag(tri, 200, 99);
  CHECK(a.values() == b.values());
  CountMatrix c = sample_dag(tri, 200, 100);
  CHECK(a.values() != c.values());
}

TEST_CASE("outputs are nonnegative integers") {
  CoefMatrix coef(3);
  coef.set_weight(1, 2, 0.3);
  coef.set_weight(2, 3, -0.4);
  CountMatrix sample = sample_dag(coef, 500, 11);
  for (int h = 0; h < sample.n(); ++h)
    for (int j = 0; j < sample.p(); ++j) {
      double v = sample.values()(h, j);
      CHECK(v >= 0.0);
      CHECK(v == std::floor(v));
    }
}

TEST_CASE("cyclic support and mean cap raise errors") {
  CoefMatrix cyclic(2);
  cyclic.set_weight(1, 2, 0.5);
  cyclic.set_weight(2, 1, 0.5);
  CHECK_THROWS_AS(sample_dag(cyclic, 10, 1), Error);

  CoefMatrix exploding(2);
  exploding.set_intercept(1, 3.0);
  exploding.set_weight(1, 2, 2.0);  // mean e^{2 X1} blows past the cap for large X1
  SampleOptions opts;
  opts.mean_cap = 50.0;
  CHECK_THROWS_AS(sample_dag(exploding, 2000, 3, opts), Error);
}

TEST_CASE("poisson sampler regimes agree with theoretical moments") {
  // exercise the rejection regime (mean >= 10)
  CoefMatrix coef(1);
  coef.set_intercept(1, std::log(25.0));
  const int n = 50000;
  CountMatrix sample = sample_dag(coef, n, 13);
  double mean = sample.values().col(0).mean();
  double var = (sample.values().col(0).array() - mean).square().sum() / (n - 1);
  CHECK(std::fabs(mean - 25.0) <= 3.0 * std::sqrt(25.0 / n));
  CHECK(std::fabs(var - 25.0) <= 0.05 * 25.0);
}
