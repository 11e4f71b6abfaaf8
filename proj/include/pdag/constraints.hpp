#pragma once

#include <vector>

#include "pdag/types.hpp"

namespace pdag {

/// Nonnegative dual variables for the acyclicity constraints.
using DualGamma = Matrix;  // p x p, all entries >= 0

struct SurrogateParams {
  double tau = 0.1;   // indicator approximation scale, > 0
  double kappa = 0.0; // sparsity budget (reporting)
  double mu = 1.0;    // penalty multiplier for the budget

  void validate() const {
    if (!(tau > 0.0)) throw Error::domain("SurrogateParams: tau must be > 0");
    if (kappa < 0.0 || mu < 0.0) throw Error::domain("SurrogateParams: kappa, mu must be >= 0");
  }
};

/// Truncated-L1 surrogate min(|z|/tau, 1).
double j_tau(double z, double tau);

/// Convex split J_tau = s1 - s2 with s1 = |z|/tau, s2 = max(|z|/tau - 1, 0).
std::pair<double, double> dc_split(double z, double tau);

/// Subgradient of s2 at the previous iterate: sign(z)/tau when |z| > tau.
double s2_subgradient(double z_prev, double tau);

/// Sum of J_tau over off-diagonal entries outside F.
double budget_value(const CoefMatrix& coef, const EdgeSet& f, const SurrogateParams& params);

/// Residual tensor r[i][j][k] = J_tau(w_jk) - gamma(i,k) - 1(i != j) + gamma(i,j),
/// for k != j (self pairs are stored as 0). The surrogate constraints hold iff
/// all residuals are <= 0. Materialized form, p <= 64 only.
std::vector<double> acyclicity_residuals(const CoefMatrix& coef, const DualGamma& gamma, double tau);

inline std::size_t residual_index(int i, int j, int k, int p) {
  return (static_cast<std::size_t>(i - 1) * p + (j - 1)) * p + (k - 1);
}

/// Largest residual, evaluated streaming; usable at any p. `indicator` swaps
/// J_tau for the thresholded support indicator 1(|w_jk| > tau).
double max_acyclicity_residual(const CoefMatrix& coef, const DualGamma& gamma, double tau,
                               bool indicator = false);

/// Streaming residual check against a plain edge set (unit indicator on edges).
double max_acyclicity_residual(const EdgeSet& edges, int p, const DualGamma& gamma);

/// Feasible dual certificate for an acyclic edge set: gamma(i, j) = 1 when the
/// longest-path depth of j exceeds that of i, else 0. Throws on cycles.
DualGamma construct_feasible_gamma(const EdgeSet& edges, int p);

}  // namespace pdag
