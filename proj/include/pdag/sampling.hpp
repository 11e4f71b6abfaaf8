#pragma once

#include "pdag/rng.hpp"
#include "pdag/types.hpp"

namespace pdag {

struct SampleOptions {
  double mean_cap = 1e6;  // guard against exploding conditional means
};

/// Draws n observations from the Poisson DAG defined by coef, visiting nodes
/// in a topological order. Deterministic given the seed.
CountMatrix sample_dag(const CoefMatrix& coef, int n, std::uint64_t seed,
                       const SampleOptions& options = {});

}  // namespace pdag
