#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "pdag/graph.hpp"
#include "pdag/simgen.hpp"

using namespace pdag;

TEST_CASE("chain and hub families") {
  CoefMatrix chain = gen_graph(GraphFamily::chain(6), 1);
  CHECK(chain.support().size() == 5);
  for (int i = 1; i < 6; ++i) CHECK(chain.weight(i, i + 1) == doctest::Approx(-0.5));

  CoefMatrix hub = gen_graph(GraphFamily::hub(6), 1);
  CHECK(hub.support().size() == 5);
  for (const Edge& e : hub.support()) CHECK(e.from == 1);
}

TEST_CASE("random family edge count matches the orientation convention") {
  // permutation-respecting pairs: C(p,2) candidates at probability 1/p
  const int p = 50;
  const int seeds = 1000;
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) total += gen_graph(GraphFamily::random(p), s).support().size();
  double mean = total / seeds;
  double expected = (p * (p - 1) / 2.0) / p;  // 24.5
  double se = std::sqrt(expected * (1.0 - 1.0 / p)) / std::sqrt(static_cast<double>(seeds));
  CHECK(std::fabs(mean - expected) <= 3.0 * se);
}

TEST_CASE("generated graphs are always acyclic and seed-deterministic") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CoefMatrix g = gen_graph(GraphFamily::random(12), seed);
    CHECK(is_acyclic(g.support(), 12));
    CHECK(gen_graph(GraphFamily::random(12), seed) == g);
  }
}

TEST_CASE("choose_test_set samples the requested stratum") {
  CoefMatrix coef = gen_graph(GraphFamily::chain(5), 3);
  EdgeSet support = coef.support();

  EdgeSet nulls = choose_test_set(coef, TestSetMode::NullZeros, 4, 7);
  CHECK(nulls.size() == 4);
  for (const Edge& e : nulls) CHECK(!support.contains(e));

  EdgeSet alts = choose_test_set(coef, TestSetMode::AltNonzeros, 2, 7);
  CHECK(alts.size() == 2);
  for (const Edge& e : alts) CHECK(support.contains(e));

  // exhaustive draw returns every zero entry
  int zero_count = 5 * 4 - 4;
  EdgeSet all_zeros = choose_test_set(coef, TestSetMode::NullZeros, zero_count, 9);
  CHECK(static_cast<int>(all_zeros.size()) == zero_count);

  CHECK_THROWS_AS(choose_test_set(coef, TestSetMode::AltNonzeros, 10, 3), Error);
}

TEST_CASE("testable zero set keeps the graph acyclic") {
  CoefMatrix coef = gen_graph(GraphFamily::chain(6), 1);
  EdgeSet support = coef.support();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EdgeSet f = choose_testable_zero_set(coef, 2, seed);
    for (const Edge& e : f) {
      EdgeSet merged = support;
      merged.insert(e);
      CHECK(is_acyclic(merged, 6));
    }
  }
}

TEST_CASE("selection frequencies are uniform across candidates") {
  CoefMatrix coef = gen_graph(GraphFamily::chain(5), 1);
  const int draws = 10000;
  std::map<std::pair<int, int>, int> freq;
  for (int s = 0; s < draws; ++s) {
    EdgeSet f = choose_test_set(coef, TestSetMode::NullZeros, 1, 1000 + s);
    const Edge& e = *f.begin();
    ++freq[{e.from, e.to}];
  }
  const int candidates = 5 * 4 - 4;
  double expect = static_cast<double>(draws) / candidates;
  double sigma = std::sqrt(expect * (1.0 - 1.0 / candidates));
  for (const auto& [edge, count] : freq) CHECK(std::fabs(count - expect) <= 4.0 * sigma);
  CHECK(static_cast<int>(freq.size()) == candidates);
}

TEST_CASE("apply_alternative fixed values and scaling") {
  CoefMatrix coef = gen_graph(GraphFamily::chain(4), 1);
  EdgeSet targets({{1, 2}, {2, 3}});

  CoefMatrix unchanged = apply_alternative(coef, AlternativeSpec::fixed_value(targets, -0.5));
  CHECK(unchanged.weight(1, 2) == doctest::Approx(-0.5));

  CoefMatrix shifted = apply_alternative(coef, AlternativeSpec::fixed_value(targets, -0.1));
  CHECK(shifted.weight(1, 2) == doctest::Approx(-0.1));
  CHECK(shifted.weight(3, 4) == doctest::Approx(-0.5));  // untouched

  // Frobenius scaling: h = 2, n = 400 -> ||delta||_F = 0.1
  CoefMatrix zero(4);
  AlternativeSpec local = AlternativeSpec::local_shift(targets, 2.0, 400);
  CoefMatrix bumped = apply_alternative(zero, local);
  double frob = std::sqrt(std::pow(bumped.weight(1, 2), 2) + std::pow(bumped.weight(2, 3), 2));
  CHECK(frob == doctest::Approx(0.1).epsilon(1e-12));

  // zero shift leaves the matrix unchanged
  CoefMatrix same = apply_alternative(coef, AlternativeSpec::local_shift(targets, 0.0, 400));
  CHECK(same == coef);
}

TEST_CASE("apply_alternative rejects cycle-creating shifts") {
  CoefMatrix coef = gen_graph(GraphFamily::chain(3), 1);
  EdgeSet back({{3, 1}});
  CHECK_THROWS_AS(apply_alternative(coef, AlternativeSpec::fixed_value(back, -0.4)), Error);
}

TEST_CASE("family validation") {
  CHECK_THROWS_AS(gen_graph(GraphFamily::chain(1), 0), Error);
  GraphFamily bad = GraphFamily::random(5);
  bad.weight = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(gen_graph(bad, 0), Error);
}
