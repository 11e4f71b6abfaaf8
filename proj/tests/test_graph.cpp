#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdag/graph.hpp"
#include "test_util.hpp"

using namespace pdag;

TEST_CASE("detect_cycle on small graphs") {
  EdgeSet triangle({{1, 2}, {2, 3}, {3, 1}});
  auto cyc = detect_cycle(triangle, 3);
  REQUIRE(cyc.has_value());
  CHECK(cyc->size() == 3);

  EdgeSet chain({{1, 2}, {2, 3}});
  CHECK(!detect_cycle(chain, 3).has_value());
}

TEST_CASE("detect_cycle agrees with path enumeration on all 3-node graphs") {
  for (const EdgeSet& g : testutil::all_digraphs(3)) {
    bool got = detect_cycle(g, 3).has_value();
    bool want = testutil::has_cycle_by_enumeration(g, 3);
    CHECK(got == want);
  }
}

TEST_CASE("detect_cycle agrees with path enumeration on all 4-node graphs") {
  for (const EdgeSet& g : testutil::all_digraphs(4)) {
    bool got = detect_cycle(g, 4).has_value();
    bool want = testutil::has_cycle_by_enumeration(g, 4);
    CHECK(got == want);
  }
}

TEST_CASE("reported cycle is a real cycle") {
  for (const EdgeSet& g : testutil::all_digraphs(3)) {
    auto cyc = detect_cycle(g, 3);
    if (!cyc) continue;
    for (std::size_t t = 0; t < cyc->size(); ++t) {
      Edge e{(*cyc)[t], (*cyc)[(t + 1) % cyc->size()]};
      CHECK(g.contains(e));
    }
  }
}

TEST_CASE("topological depths follow edges") {
  EdgeSet g({{1, 2}, {2, 3}, {1, 3}});
  auto depth = topological_depths(g, 3);
  CHECK(depth[0] == 0);
  CHECK(depth[1] == 1);
  CHECK(depth[2] == 2);
  CHECK_THROWS_AS(topological_depths(EdgeSet({{1, 2}, {2, 1}}), 2), Error);
}

TEST_CASE("reachability closure") {
  EdgeSet g({{1, 2}, {2, 3}});
  auto reach = reachability(g, 4);
  CHECK(reach[1][3]);
  CHECK(!reach[3][1]);
  CHECK(!reach[1][4]);
}

TEST_CASE("threshold_support scans weights") {
  CoefMatrix coef(3);
  CHECK(threshold_support(coef, 0.1).empty());
  coef.set_weight(1, 2, 0.5);
  coef.set_weight(2, 1, 0.05);
  EdgeSet s = threshold_support(coef, 0.1);
  CHECK(s.size() == 1);
  CHECK(s.contains({1, 2}));

  // elementwise scan oracle on random matrices
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CoefMatrix c = testutil::random_coef(4, seed);
    EdgeSet got = threshold_support(c, 0.12);
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j) {
        if (i == j) continue;
        CHECK(got.contains({i, j}) == (std::fabs(c.weight(i, j)) > 0.12));
      }
  }
}

TEST_CASE("edge set validation") {
  EdgeSet bad({{0, 2}});
  CHECK_THROWS_AS(bad.validate(3), Error);
  EdgeSet dup({{1, 2}, {1, 2}});
  CHECK(dup.size() == 1);
}
