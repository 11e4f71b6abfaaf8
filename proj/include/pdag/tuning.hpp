#pragma once

#include <cstdint>
#include <vector>

#include "pdag/solver.hpp"
#include "pdag/types.hpp"

namespace pdag {

struct CvGrid {
  std::vector<double> mu_values;
  std::vector<double> tau_values;
  int folds = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CvCell {
  double mu = 0.0;
  double tau = 0.0;
  std::vector<double> fold_loglik;  // held-out log-likelihood per fold
  double total = 0.0;
  bool valid = true;
};

struct CvSelection {
  double mu = 0.0;
  double tau = 0.0;
  std::vector<CvCell> table;
};

/// Seeded fold assignment: row index -> fold, sizes differing by at most one.
std::vector<int> cv_folds(int n, int folds, std::uint64_t seed);

/// Five-fold style cross-validation over the (mu, tau) grid maximizing the
/// held-out Poisson log-likelihood under the unrestricted fit. Ties break to
/// the smaller mu, then smaller tau.
CvSelection cv_select(const DesignMatrix& data, const CvGrid& grid, const SolverConfig& base);

}  // namespace pdag
