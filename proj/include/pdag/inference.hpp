#pragma once

#include <string>

#include "pdag/solver.hpp"
#include "pdag/types.hpp"

namespace pdag {

enum class NullDist {
  Degenerate,
  ChiSquare,
  NormalizedChiSquare,
  MinChiSquare,
  GeneralizedGamma,
};

std::string null_dist_name(NullDist d);

struct TestResult {
  double lr = 0.0;        // log-likelihood ratio l(Ha) - l(H0)
  int df = 0;             // |D hat| or d hat
  double statistic = 0.0; // 2lr, normalized, or 2 d^2 lr per regime
  NullDist null_dist = NullDist::Degenerate;
  double p_value = 1.0;
  FitResult h0_fit;  // for pathways, the argmax-k null fit
  FitResult ha_fit;
  int h0_fit_count = 1;  // |F| for pathway tests
};

struct TestConfig {
  SolverConfig solver;
  int df_switch = 30;  // chi-square vs normal / min-chi2 vs generalized Gamma
};

/// Testable subset of F given an estimated edge set: links whose addition
/// leaves the graph acyclic.
EdgeSet estimate_D0(const EdgeSet& f, const EdgeSet& e_hat, int p);

/// Breakpoint count for a pathway: entries of F at (thresholded) zero in the
/// unrestricted fit, floored at 1.
int estimate_d(const EdgeSet& f, const CoefMatrix& coef_free, double tau);

TestResult test_linkage(const DesignMatrix& data, const EdgeSet& f, const TestConfig& config);

TestResult test_pathway(const DesignMatrix& data, const PathwaySpec& path,
                        const TestConfig& config);

/// Oracle likelihood ratios computed on the known true edge set.
double oracle_linkage_lr(const DesignMatrix& data, const EdgeSet& f, const EdgeSet& e0);
double oracle_pathway_lr(const DesignMatrix& data, const PathwaySpec& path, const EdgeSet& e0);

/// p-value for an already-computed lr under the linkage/pathway regimes.
double linkage_p_value(double lr, int df, int df_switch, double* statistic = nullptr,
                       NullDist* dist = nullptr);
double pathway_p_value(double lr, int df, int df_switch, double* statistic = nullptr,
                       NullDist* dist = nullptr);

}  // namespace pdag
