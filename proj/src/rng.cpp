#include "pdag/rng.hpp"

#include <cmath>

#include "pdag/types.hpp"

namespace pdag {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed;
  std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ (0x632be59bd9b4e019ULL * (index + 1));
  return Rng(splitmix64(t));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = next_double();
  } while (u1 <= 0.0);
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t Rng::next_below(std::uint64_t n) {
  // Rejection to avoid modulo bias.
  std::uint64_t threshold = (~n + 1) % n;  // (2^64 - n) mod n
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

namespace {

// Hormann's PTRS transformed rejection, valid for mean >= 10.
long poisson_ptrs(Rng& rng, double mean) {
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    double u = rng.next_double() - 0.5;
    double v = rng.next_double();
    double us = 0.5 - std::fabs(u);
    double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <= k * log_mean - mean - std::lgamma(k + 1.0))
      return static_cast<long>(k);
  }
}

long poisson_inversion(Rng& rng, double mean) {
  double u = rng.next_double();
  double prob = std::exp(-mean);
  double cum = prob;
  long k = 0;
  while (u > cum) {
    ++k;
    prob *= mean / static_cast<double>(k);
    cum += prob;
    if (k > 2000) break;  // cumulative rounding guard; astronomically unlikely
  }
  return k;
}

}  // namespace

long poisson_draw(Rng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw Error::domain("poisson_draw: invalid mean");
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_inversion(rng, mean);
  return poisson_ptrs(rng, mean);
}

}  // namespace pdag
