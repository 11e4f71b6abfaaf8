#pragma once

#include "pdag/types.hpp"

namespace pdag {

inline constexpr double kExpArgLimit = 700.0;  // exp overflow guard on the linear predictor

/// Poisson log-likelihood, summed over observations and nodes. log(x!) is
/// evaluated through the log-Gamma function.
double log_likelihood(const DesignMatrix& data, const CoefMatrix& coef);

/// Per-node term l_j; log_likelihood decomposes as the sum over j (1-based).
double node_log_likelihood(const DesignMatrix& data, const CoefMatrix& coef, int j);

/// Minimization-form objective sum_j sum_h [exp(X beta) - x X beta]; equals
/// -(log_likelihood + sum log x!).
double neg_likelihood_objective(const DesignMatrix& data, const CoefMatrix& coef);

/// Gradient of l_j with respect to the full column (intercept first, then
/// the p weight coordinates including the structural zero at i = j).
Vector score(const DesignMatrix& data, const CoefMatrix& coef, int j);

/// -d^2 l_j / d beta_j^2 = X^T Gamma_j X with Gamma_j = diag(exp(X beta_j)).
Matrix hessian(const DesignMatrix& data, const CoefMatrix& coef, int j);

/// Empirical squared Hellinger separation between two coefficient matrices,
/// averaged over the rows of the sample. Value in [0, 1].
double hellinger_sq(const DesignMatrix& data, const CoefMatrix& a, const CoefMatrix& b);

}  // namespace pdag
