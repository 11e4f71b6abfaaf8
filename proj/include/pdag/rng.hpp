#pragma once

#include <cstdint>

namespace pdag {

/// Deterministic counter-seeded generator (SplitMix64 core, v1). Streams for
/// parallel replications are derived from (master seed, index) so results do
/// not depend on scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng stream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64();
  double next_double();  // uniform in [0, 1)
  double next_gaussian();
  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Poisson draw: multiplicative inversion for mean < 10 (v1), PTRS
/// transformed rejection for mean >= 10 (v1).
long poisson_draw(Rng& rng, double mean);

}  // namespace pdag
