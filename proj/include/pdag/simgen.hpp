#pragma once

#include <cstdint>
#include <vector>

#include "pdag/rng.hpp"
#include "pdag/types.hpp"

namespace pdag {

struct GraphFamily {
  enum class Kind { Random, Hub, Chain };
  Kind kind = Kind::Random;
  int p = 2;
  double edge_prob = 0.0;  // Random only; defaults to 1/p when <= 0
  double weight = -0.5;

  static GraphFamily random(int p, double weight = -0.5, double edge_prob = 0.0);
  static GraphFamily hub(int p, double weight = -0.5);
  static GraphFamily chain(int p, double weight = -0.5);
};

/// Synthetic coefficient matrix for one of the three experiment families.
/// Random graphs orient Bernoulli(1/p) pairs along a uniform permutation.
CoefMatrix gen_graph(const GraphFamily& family, std::uint64_t seed);

enum class TestSetMode { NullZeros, AltNonzeros };

/// Uniform sample without replacement from zero (null) or nonzero (alt)
/// off-diagonal entries of coef.
EdgeSet choose_test_set(const CoefMatrix& coef, TestSetMode mode, int size, std::uint64_t seed);

/// Null-mode variant restricted to testable entries: candidate zeros whose
/// addition to the support leaves the graph acyclic.
EdgeSet choose_testable_zero_set(const CoefMatrix& coef, int size, std::uint64_t seed);

struct AlternativeSpec {
  EdgeSet targets;
  // Either explicit per-edge value...
  bool use_value = true;
  double value = 0.0;
  // ...or a Frobenius-scaled local shift with ||delta||_F = h / sqrt(n).
  double h = 0.0;
  int n = 0;

  static AlternativeSpec fixed_value(EdgeSet targets, double value);
  static AlternativeSpec local_shift(EdgeSet targets, double h, int n);
};

/// Applies the alternative to coef; verifies the result stays acyclic.
CoefMatrix apply_alternative(const CoefMatrix& coef, const AlternativeSpec& spec);

}  // namespace pdag
