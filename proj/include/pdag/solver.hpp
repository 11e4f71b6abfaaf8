#pragma once

#include <optional>
#include <vector>

#include "pdag/admm.hpp"
#include "pdag/constraints.hpp"
#include "pdag/types.hpp"

namespace pdag {

struct FitSpec {
  EdgeSet forced_zero;  // E1: hard zeros for the hypothesis at hand
  EdgeSet f;            // index set exempt from the sparsity budget
  SurrogateParams params;
  double rho = 1.0;
  double epsilon = 1e-6;        // termination tolerance on the objective decrease
  long max_dc_iterations = 50;
  long max_admm_iterations = 5000;
  double admm_tol = 1e-5;
  std::optional<CoefMatrix> warm_start;

  void validate(int p) const;
};

struct FitResult {
  CoefMatrix coef{1};
  EdgeSet edges;                        // thresholded support, acyclic
  std::vector<double> objective_trace;  // minimization objective per outer iteration
  bool converged = false;
  long dc_iterations = 0;
  long admm_iterations = 0;
  double primal_residual = 0.0;  // from the last inner solve
  double dual_residual = 0.0;
  double log_lik = 0.0;  // unpenalized log-likelihood at coef
};

/// Outer difference-of-convex loop with per-iteration ADMM solves, cycle
/// repair on the thresholded support, and objective-based termination.
FitResult fit(const DesignMatrix& data, const FitSpec& spec);

/// Variant that reuses (and hands back) the ADMM block variables, so a
/// sequence of related hypothesis fits skips the dual ramp-up each time.
FitResult fit(const DesignMatrix& data, const FitSpec& spec, AdmmState* state_io);

/// Shared solver knobs for the hypothesis-fit wrappers.
struct SolverConfig {
  SurrogateParams params;
  double rho = 1.0;
  double epsilon = 1e-6;
  long max_dc_iterations = 50;
  long max_admm_iterations = 5000;
  double admm_tol = 1e-5;

  FitSpec spec(EdgeSet forced_zero, EdgeSet f) const;
};

FitResult fit_h0_linkage(const DesignMatrix& data, const EdgeSet& f, const SolverConfig& config);
FitResult fit_ha_linkage(const DesignMatrix& data, const EdgeSet& f, const SolverConfig& config,
                         const CoefMatrix* warm_start = nullptr);
FitResult fit_h0_pathway(const DesignMatrix& data, const PathwaySpec& path, int k,
                         const SolverConfig& config);
FitResult fit_ha_pathway(const DesignMatrix& data, const PathwaySpec& path,
                         const SolverConfig& config, const CoefMatrix* warm_start = nullptr);

/// Unpenalized per-node maximum likelihood restricted to a fixed acyclic
/// support (used by the oracle tests and the brute-force checks).
CoefMatrix restricted_mle(const DesignMatrix& data, const EdgeSet& support, double grad_tol = 1e-9);

}  // namespace pdag
