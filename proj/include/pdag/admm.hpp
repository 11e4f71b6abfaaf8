#pragma once

#include <Eigen/Cholesky>
#include <cstdint>
#include <vector>

#include "pdag/constraints.hpp"
#include "pdag/types.hpp"

namespace pdag {

/// Convex-subproblem description, fixed across one ADMM run. The indicator
/// sets come from the previous outer iterate.
struct AdmmProblem {
  const DesignMatrix* data = nullptr;
  int p = 0;
  double tau = 0.0;
  double mu = 0.0;
  double rho = 0.0;

  // p*p masks, row-major (j*p + k) over ordered pairs (j, k), 0-based.
  std::vector<std::uint8_t> small;      // |beta_prev(j,k)| <= tau
  std::vector<std::uint8_t> penalized;  // off-diagonal pair outside F
  std::vector<std::uint8_t> forced;     // in E1 (or diagonal): beta pinned at 0

  // Per-node sliced design: column 0 is the intercept, then free weight rows.
  std::vector<std::vector<int>> free_rows;  // 0-based parent row indices
  std::vector<Matrix> xs;
  std::vector<Vector> ys;

  std::size_t index(int j, int k) const { return static_cast<std::size_t>(j) * p + k; }
};

AdmmProblem make_admm_problem(const DesignMatrix& data, const CoefMatrix& coef_prev,
                              const EdgeSet& forced_zero, const EdgeSet& f, double tau, double mu,
                              double rho);

/// Recomputes only the small/large indicator masks from a new outer iterate.
void refresh_indicators(AdmmProblem& problem, const CoefMatrix& coef_prev);

/// Block variables of the augmented Lagrangian plus the iteration counter.
struct AdmmState {
  Matrix A;  // p x p decoupling matrix
  Matrix W;  // p x p scaled dual for beta - A
  DualGamma gamma;
  std::vector<double> xi1, xi2;        // p^3 nonnegative slacks, ((i*p)+j)*p + k
  std::vector<double> alpha1, alpha2;  // p^3 scaled duals
  double rho = 1.0;
  long s = 0;

  static AdmmState init(int p, double rho, const Matrix& weights);
  std::size_t tensor_index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * A.rows() + j) * A.rows() + k;
  }
};

/// Per-node Newton cache reused across ADMM iterations.
struct BetaWorkspace {
  struct Node {
    Vector coef;  // intercept + free weights
    Eigen::LLT<Matrix> llt;
    bool have_factor = false;
    // likelihood-side caches, valid while coef is unchanged
    Vector eta;
    Vector like_grad;  // xs^T (exp(eta) - y)
    bool have_grad = false;
  };
  std::vector<Node> nodes;

  static BetaWorkspace init(const AdmmProblem& problem, const Vector& intercepts,
                            const Matrix& weights);
};

/// Writes the current beta (intercepts + weights) from the workspace.
void extract_beta(const AdmmProblem& problem, const BetaWorkspace& ws, Vector& intercepts,
                  Matrix& weights);

/// Elementwise A minimizer; returns the squared Frobenius change.
double update_a(const AdmmProblem& problem, AdmmState& state, const Matrix& weights);

/// Damped Newton per node to gradient norm <= tol. Throws on non-convergence.
void update_beta(const AdmmProblem& problem, const AdmmState& state, BetaWorkspace& ws,
                 double grad_tol = 1e-8, int max_newton = 80);

struct GammaXiChange {
  double dgamma_sq = 0.0;
  double dxi_sq = 0.0;
  int passes = 0;
};

/// Exact joint minimizer over (gamma, xi): alternating row-wise closed-form
/// gamma solves and nonnegative xi clamps, iterated to a fixed point.
GammaXiChange update_gamma_xi(const AdmmProblem& problem, AdmmState& state, int max_passes = 64,
                              double pass_tol = 1e-12);

struct DualResiduals {
  double consensus = 0.0;  // ||beta - A||_F
  double slack1 = 0.0;     // ||E1||_F
  double slack2 = 0.0;     // ||E2||_F
};

/// Scaled dual ascent on all equality constraints; returns primal residuals.
DualResiduals update_duals(const AdmmProblem& problem, AdmmState& state, const Matrix& weights);

struct SubproblemStatus {
  long iterations = 0;
  double primal_residual = 0.0;    // max over consensus and slack rows
  double consensus_residual = 0.0; // ||beta - A||_F alone
  double dual_residual = 0.0;
  bool converged = false;
};

/// Runs the block updates in order (A, beta, (gamma, xi), duals) until
/// max(primal, dual) <= tol or the iteration cap. State and workspace are
/// warm-started in and handed back for the next outer iteration.
SubproblemStatus run_admm(const AdmmProblem& problem, AdmmState& state, BetaWorkspace& ws,
                          double tol, long max_iterations);

/// Single-shot convex subproblem solve per the outer-loop linearization;
/// returns the beta block. Non-convergence yields a result with a warning
/// status rather than an error.
CoefMatrix solve_subproblem(const DesignMatrix& data, const CoefMatrix& coef_prev,
                            const EdgeSet& forced_zero, const EdgeSet& f,
                            const SurrogateParams& params, double rho, double tol,
                            long max_iterations, SubproblemStatus* status = nullptr);

}  // namespace pdag
