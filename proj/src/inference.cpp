#include "pdag/inference.hpp"

#include <algorithm>
#include <cmath>

#include "pdag/distributions.hpp"
#include "pdag/graph.hpp"
#include "pdag/likelihood.hpp"

namespace pdag {

std::string null_dist_name(NullDist d) {
  switch (d) {
    case NullDist::Degenerate: return "degenerate";
    case NullDist::ChiSquare: return "chi2";
    case NullDist::NormalizedChiSquare: return "normal";
    case NullDist::MinChiSquare: return "min_chi2";
    case NullDist::GeneralizedGamma: return "gen_gamma";
  }
  return "unknown";
}

EdgeSet estimate_D0(const EdgeSet& f, const EdgeSet& e_hat, int p) {
  f.validate(p);
  e_hat.validate(p);
  EdgeSet testable;
  for (const Edge& e : f) {
    EdgeSet augmented = e_hat;
    augmented.insert(e);
    if (is_acyclic(augmented, p)) testable.insert(e);
  }
  return testable;
}

int estimate_d(const EdgeSet& f, const CoefMatrix& coef_free, double tau) {
  if (!(tau > 0.0)) throw Error::domain("estimate_d: tau must be > 0");
  int zeros = 0;
  for (const Edge& e : f)
    if (std::fabs(coef_free.weight(e.from, e.to)) <= tau) ++zeros;
  return std::max(zeros, 1);
}

double linkage_p_value(double lr, int df, int df_switch, double* statistic, NullDist* dist) {
  double stat = 0.0;
  NullDist nd = NullDist::Degenerate;
  double p = 1.0;
  double two_lr = std::max(2.0 * lr, 0.0);
  if (df <= 0) {
    stat = 0.0;
  } else if (df <= df_switch) {
    stat = two_lr;
    nd = NullDist::ChiSquare;
    p = 1.0 - chi2_cdf(stat, df);
  } else {
    stat = (two_lr - df) / std::sqrt(2.0 * df);
    nd = NullDist::NormalizedChiSquare;
    p = 1.0 - normal_cdf(stat);
  }
  if (statistic) *statistic = stat;
  if (dist) *dist = nd;
  return std::clamp(p, 0.0, 1.0);
}

double pathway_p_value(double lr, int df, int df_switch, double* statistic, NullDist* dist) {
  double stat = 0.0;
  NullDist nd = NullDist::Degenerate;
  double p = 1.0;
  double two_lr = std::max(2.0 * lr, 0.0);
  if (df <= 0) {
    stat = 0.0;
  } else if (df <= df_switch) {
    stat = two_lr;
    nd = NullDist::MinChiSquare;
    p = min_chi2_survival(stat, df);
  } else {
    stat = static_cast<double>(df) * df * two_lr;
    nd = NullDist::GeneralizedGamma;
    p = gen_gamma_survival(stat);
  }
  if (statistic) *statistic = stat;
  if (dist) *dist = nd;
  return std::clamp(p, 0.0, 1.0);
}

TestResult test_linkage(const DesignMatrix& data, const EdgeSet& f, const TestConfig& config) {
  const int p = data.p();
  if (f.empty()) throw Error::usage("test_linkage: F must be nonempty");
  f.validate(p);

  // Reverses of the tested links are pinned to zero in both fits: the null
  // fit must not reroute the tested association through the opposite
  // direction, and the common constraint keeps the problems nested.
  EdgeSet reverses;
  for (const Edge& e : f)
    if (!f.contains({e.to, e.from})) reverses.insert({e.to, e.from});

  TestResult result;
  AdmmState state;
  EdgeSet h0_forced = f;
  for (const Edge& e : reverses) h0_forced.insert(e);
  result.h0_fit = fit(data, config.solver.spec(h0_forced, f), &state);
  FitSpec ha_spec = config.solver.spec(reverses, f);
  ha_spec.warm_start = result.h0_fit.coef;
  result.ha_fit = fit(data, ha_spec, &state);
  result.lr = result.ha_fit.log_lik - result.h0_fit.log_lik;

  EdgeSet d0 = estimate_D0(f, result.h0_fit.edges, p);
  result.df = static_cast<int>(d0.size());
  if (result.df == 0) {
    result.null_dist = NullDist::Degenerate;
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  result.p_value =
      linkage_p_value(result.lr, result.df, config.df_switch, &result.statistic, &result.null_dist);
  return result;
}

TestResult test_pathway(const DesignMatrix& data, const PathwaySpec& path,
                        const TestConfig& config) {
  const int p = data.p();
  EdgeSet f = path.edges();
  f.validate(p);

  TestResult result;
  result.h0_fit_count = static_cast<int>(path.length());

  // Unrestricted fit (F = empty) supplies the breakpoint estimate, plus warm
  // coefficients and ADMM state for the single-edge-removed null fits.
  AdmmState state;
  FitResult free_fit = fit(data, config.solver.spec({}, {}), &state);
  result.df = estimate_d(f, free_fit.coef, config.solver.params.tau);

  // Reverses of the pathway edges are pinned in the hypothesis fits (not the
  // unrestricted one) so the null fits cannot reroute the tested segment.
  EdgeSet reverses;
  for (const Edge& e : f) reverses.insert({e.to, e.from});

  // |F| null fits; keep the best.
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= result.h0_fit_count; ++k) {
    const auto& nodes = path.nodes();
    EdgeSet forced = reverses;
    forced.insert({nodes[k - 1], nodes[k]});
    FitSpec spec = config.solver.spec(forced, f);
    spec.warm_start = free_fit.coef;
    AdmmState h0_state = state;
    FitResult h0 = fit(data, spec, &h0_state);
    if (h0.log_lik > best_ll) {
      best_ll = h0.log_lik;
      result.h0_fit = std::move(h0);
    }
  }
  FitSpec ha_spec = config.solver.spec(reverses, f);
  ha_spec.warm_start = result.h0_fit.coef;
  result.ha_fit = fit(data, ha_spec, &state);
  result.lr = result.ha_fit.log_lik - result.h0_fit.log_lik;

  EdgeSet combined = result.ha_fit.edges;
  for (const Edge& e : f) combined.insert(e);
  if (!is_acyclic(combined, p)) {
    result.null_dist = NullDist::Degenerate;
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  result.p_value =
      pathway_p_value(result.lr, result.df, config.df_switch, &result.statistic, &result.null_dist);
  return result;
}

double oracle_linkage_lr(const DesignMatrix& data, const EdgeSet& f, const EdgeSet& e0) {
  const int p = data.p();
  f.validate(p);
  e0.validate(p);
  EdgeSet full = e0;
  for (const Edge& e : f) full.insert(e);
  if (!is_acyclic(full, p)) throw Error::cycle("oracle_linkage_lr: E0 union F contains a cycle");
  EdgeSet reduced;
  for (const Edge& e : e0)
    if (!f.contains(e)) reduced.insert(e);
  CoefMatrix ha = restricted_mle(data, full);
  CoefMatrix h0 = restricted_mle(data, reduced);
  return log_likelihood(data, ha) - log_likelihood(data, h0);
}

double oracle_pathway_lr(const DesignMatrix& data, const PathwaySpec& path, const EdgeSet& e0) {
  const int p = data.p();
  EdgeSet f = path.edges();
  f.validate(p);
  e0.validate(p);
  EdgeSet full = e0;
  for (const Edge& e : f) full.insert(e);
  if (!is_acyclic(full, p)) throw Error::cycle("oracle_pathway_lr: E0 union F contains a cycle");
  CoefMatrix ha = restricted_mle(data, full);
  double best_h0 = -std::numeric_limits<double>::infinity();
  for (const Edge& removed : f) {
    EdgeSet reduced;
    for (const Edge& e : full)
      if (e != removed) reduced.insert(e);
    CoefMatrix h0 = restricted_mle(data, reduced);
    best_h0 = std::max(best_h0, log_likelihood(data, h0));
  }
  return log_likelihood(data, ha) - best_h0;
}

}  // namespace pdag
