#include "pdag/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pdag/graph.hpp"

namespace pdag {

GraphFamily GraphFamily::random(int p, double weight, double edge_prob) {
  return {Kind::Random, p, edge_prob, weight};
}
GraphFamily GraphFamily::hub(int p, double weight) { return {Kind::Hub, p, 0.0, weight}; }
GraphFamily GraphFamily::chain(int p, double weight) { return {Kind::Chain, p, 0.0, weight}; }

CoefMatrix gen_graph(const GraphFamily& family, std::uint64_t seed) {
  const int p = family.p;
  if (p < 2) throw Error::domain("gen_graph: p must be >= 2");
  if (!std::isfinite(family.weight)) throw Error::domain("gen_graph: weight must be finite");
  CoefMatrix coef(p);
  switch (family.kind) {
    case GraphFamily::Kind::Chain:
      for (int i = 1; i < p; ++i) coef.set_weight(i, i + 1, family.weight);
      break;
    case GraphFamily::Kind::Hub:
      for (int i = 2; i <= p; ++i) coef.set_weight(1, i, family.weight);
      break;
    case GraphFamily::Kind::Random: {
      double prob = family.edge_prob > 0.0 ? family.edge_prob : 1.0 / p;
      Rng rng(seed);
      std::vector<int> perm(p);
      std::iota(perm.begin(), perm.end(), 1);
      for (int i = p - 1; i > 0; --i) {
        int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
      }
      for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
          if (rng.next_double() < prob) coef.set_weight(perm[a], perm[b], family.weight);
      break;
    }
  }
  if (!is_acyclic(coef.support(), p)) throw Error::cycle("gen_graph: generated graph is cyclic");
  return coef;
}

namespace {

EdgeSet sample_without_replacement(std::vector<Edge> candidates, int size, std::uint64_t seed,
                                   const char* what) {
  if (size < 0 || static_cast<std::size_t>(size) > candidates.size())
    throw Error::domain(std::string("choose_test_set: requested ") + std::to_string(size) + " " +
                        what + " entries, only " + std::to_string(candidates.size()) +
                        " available");
  Rng rng(seed);
  EdgeSet out;
  std::size_t remaining = candidates.size();
  for (int t = 0; t < size; ++t) {
    std::size_t pick = rng.next_below(remaining);
    out.insert(candidates[pick]);
    std::swap(candidates[pick], candidates[remaining - 1]);
    --remaining;
  }
  return out;
}

}  // namespace

EdgeSet choose_test_set(const CoefMatrix& coef, TestSetMode mode, int size, std::uint64_t seed) {
  const int p = coef.p();
  std::vector<Edge> candidates;
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j) {
      if (i == j) continue;
      bool zero = coef.weight(i, j) == 0.0;
      if ((mode == TestSetMode::NullZeros) == zero) candidates.push_back({i, j});
    }
  return sample_without_replacement(std::move(candidates), size, seed,
                                    mode == TestSetMode::NullZeros ? "zero" : "nonzero");
}

EdgeSet choose_testable_zero_set(const CoefMatrix& coef, int size, std::uint64_t seed) {
  const int p = coef.p();
  EdgeSet support = coef.support();
  auto reach = reachability(support, p);
  std::vector<Edge> candidates;
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j) {
      if (i == j || coef.weight(i, j) != 0.0) continue;
      if (!reach[j][i]) candidates.push_back({i, j});  // adding i->j keeps a DAG
    }
  return sample_without_replacement(std::move(candidates), size, seed, "testable zero");
}

AlternativeSpec AlternativeSpec::fixed_value(EdgeSet targets, double value) {
  AlternativeSpec s;
  s.targets = std::move(targets);
  s.use_value = true;
  s.value = value;
  return s;
}

AlternativeSpec AlternativeSpec::local_shift(EdgeSet targets, double h, int n) {
  if (n < 1) throw Error::domain("AlternativeSpec: n must be >= 1");
  AlternativeSpec s;
  s.targets = std::move(targets);
  s.use_value = false;
  s.h = h;
  s.n = n;
  return s;
}

CoefMatrix apply_alternative(const CoefMatrix& coef, const AlternativeSpec& spec) {
  const int p = coef.p();
  spec.targets.validate(p);
  CoefMatrix out = coef;
  if (spec.use_value) {
    for (const Edge& e : spec.targets) out.set_weight(e.from, e.to, spec.value);
  } else {
    if (spec.targets.empty()) return out;
    double per_edge = -spec.h / (std::sqrt(static_cast<double>(spec.n)) *
                                 std::sqrt(static_cast<double>(spec.targets.size())));
    for (const Edge& e : spec.targets)
      out.set_weight(e.from, e.to, out.weight(e.from, e.to) + per_edge);
  }
  if (!is_acyclic(out.support(), p))
    throw Error::cycle("apply_alternative: shifted matrix contains a cycle");
  return out;
}

}  // namespace pdag
