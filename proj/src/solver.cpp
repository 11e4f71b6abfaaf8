#include "pdag/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pdag/graph.hpp"
#include "pdag/likelihood.hpp"

namespace pdag {

void FitSpec::validate(int p) const {
  forced_zero.validate(p);
  f.validate(p);
  params.validate();
  if (!(rho > 0.0)) throw Error::domain("FitSpec: rho must be > 0");
  if (!(epsilon > 0.0)) throw Error::domain("FitSpec: epsilon must be > 0");
  if (max_dc_iterations < 1 || max_admm_iterations < 1)
    throw Error::domain("FitSpec: iteration caps must be >= 1");
  if (warm_start && warm_start->p() != p)
    throw Error::dimension("FitSpec: warm start dimension mismatch");
}

namespace {

// Damped Newton on one node's unpenalized Poisson regression.
Vector node_poisson_newton(const Matrix& xs, const Vector& y, double grad_tol, int max_iter) {
  const int m = static_cast<int>(xs.cols());
  Vector b = Vector::Zero(m);
  b[0] = std::log(std::max(y.mean(), 0.5 / static_cast<double>(y.size())));
  Vector eta = xs * b;
  auto objective = [&](const Vector& e) {
    double f = 0.0;
    for (int h = 0; h < e.size(); ++h) {
      if (e[h] > kExpArgLimit) return std::numeric_limits<double>::infinity();
      f += std::exp(e[h]) - y[h] * e[h];
    }
    return f;
  };
  double f = objective(eta);
  for (int it = 0; it < max_iter; ++it) {
    Vector w = eta.array().min(kExpArgLimit).exp();
    Vector grad = xs.transpose() * (w - y);
    if (grad.norm() <= grad_tol) break;
    Matrix hess = xs.transpose() * w.asDiagonal() * xs;
    for (int t = 0; t < m; ++t) hess(t, t) += 1e-12 * (1.0 + hess(t, t));
    Vector dir = Eigen::LLT<Matrix>(hess).solve(-grad);
    double slope = grad.dot(dir);
    if (slope >= 0.0) break;
    double step = 1.0;
    const double noise = 1e-14 * (1.0 + std::fabs(f));
    for (int ls = 0; ls < 60; ++ls) {
      Vector trial_eta = eta + step * (xs * dir);
      double ft = objective(trial_eta);
      if (ft <= f + 1e-4 * step * slope + noise) {
        b += step * dir;
        eta = trial_eta;
        f = ft;
        break;
      }
      step *= 0.5;
    }
  }
  return b;
}

// Node-wise unpenalized regressions on the given parent sets (0-based rows).
CoefMatrix nodewise_mle(const DesignMatrix& data, const std::vector<std::vector<int>>& parents,
                        double grad_tol) {
  const int p = data.p();
  const Matrix& x = data.x();
  CoefMatrix coef(p);
  for (int c = 0; c < p; ++c) {
    const auto& rows = parents[c];
    Matrix xs(x.rows(), 1 + rows.size());
    xs.col(0).setOnes();
    for (std::size_t t = 0; t < rows.size(); ++t) xs.col(1 + t) = x.col(rows[t] + 1);
    Vector b = node_poisson_newton(xs, x.col(c + 1), grad_tol, 200);
    coef.set_intercept(c + 1, b[0]);
    for (std::size_t t = 0; t < rows.size(); ++t) coef.set_weight(rows[t] + 1, c + 1, b[1 + t]);
  }
  return coef;
}

// Cold-start initializer: dense node-wise regressions excluding the hard
// zeros. Supra-tau entries seed the large-indicator set of the first outer
// iteration; starting from zero is a fixed point of the linearization.
CoefMatrix dense_init(const DesignMatrix& data, const EdgeSet& forced_zero) {
  const int p = data.p();
  std::vector<std::vector<int>> parents(p);
  for (int c = 0; c < p; ++c)
    for (int k = 0; k < p; ++k)
      if (k != c && !forced_zero.contains({k + 1, c + 1})) parents[c].push_back(k);
  return nodewise_mle(data, parents, 1e-8);
}

double node_objective_at_mle(const DesignMatrix& data, int node, const std::vector<int>& rows) {
  const Matrix& x = data.x();
  Matrix xs(x.rows(), 1 + rows.size());
  xs.col(0).setOnes();
  for (std::size_t t = 0; t < rows.size(); ++t) xs.col(1 + t) = x.col(rows[t] + 1);
  Vector y = x.col(node);
  Vector b = node_poisson_newton(xs, y, 1e-6, 100);
  Vector eta = xs * b;
  double f = 0.0;
  for (int h = 0; h < eta.size(); ++h)
    f += std::exp(std::min(eta[h], kExpArgLimit)) - y[h] * eta[h];
  return f;
}

// Flip-improvement sweeps over the selected support: each edge is compared
// against its reversal through the two affected node refits, and the better
// orientation kept. Resolves the directions a magnitude rule cannot. Edges
// in `pinned` (the budget-exempt index set) are never flipped away: the
// penalized objective always prefers the exempt orientation.
void orient_by_likelihood(const DesignMatrix& data, EdgeSet& support, int p,
                          const EdgeSet& forced_zero, const EdgeSet& pinned,
                          int max_sweeps = 5) {
  std::vector<std::vector<int>> parents(p);
  for (const Edge& e : support) parents[e.to - 1].push_back(e.from - 1);
  auto node_cost = [&](int node) { return node_objective_at_mle(data, node, parents[node - 1]); };
  std::vector<double> cost(p);
  for (int v = 1; v <= p; ++v) cost[v - 1] = node_cost(v);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    EdgeSet snapshot = support;
    for (const Edge& e : snapshot) {
      Edge reversed{e.to, e.from};
      if (!support.contains(e) || support.contains(reversed)) continue;
      if (forced_zero.contains(reversed) || pinned.contains(e)) continue;
      EdgeSet flipped;
      for (const Edge& kept : support)
        if (kept != e) flipped.insert(kept);
      flipped.insert(reversed);
      if (!is_acyclic(flipped, p)) continue;

      std::vector<int> to_without = parents[e.to - 1];
      to_without.erase(std::remove(to_without.begin(), to_without.end(), e.from - 1),
                       to_without.end());
      std::vector<int> from_with = parents[e.from - 1];
      from_with.push_back(e.to - 1);
      std::sort(from_with.begin(), from_with.end());
      double flipped_cost = node_objective_at_mle(data, e.to, to_without) +
                            node_objective_at_mle(data, e.from, from_with);
      if (flipped_cost + 1e-9 < cost[e.to - 1] + cost[e.from - 1]) {
        support = flipped;
        parents[e.to - 1] = to_without;
        parents[e.from - 1] = from_with;
        cost[e.to - 1] = node_cost(e.to);
        cost[e.from - 1] = node_cost(e.from);
        improved = true;
      }
    }
    if (!improved) break;
  }
}

// Grow-back sweep: candidate edges dropped during cycle repair re-enter when
// they keep the graph acyclic, improve the refitted likelihood, and clear the
// support threshold. Returns true when anything was added.
bool grow_by_likelihood(const DesignMatrix& data, EdgeSet& support, int p,
                        const EdgeSet& candidates, const EdgeSet& forced_zero, double tau) {
  std::vector<std::vector<int>> parents(p);
  for (const Edge& e : support) parents[e.to - 1].push_back(e.from - 1);
  bool grew = false;
  for (const Edge& e : candidates) {
    if (support.contains(e) || forced_zero.contains(e)) continue;
    EdgeSet extended = support;
    extended.insert(e);
    if (!is_acyclic(extended, p)) continue;

    const Matrix& x = data.x();
    const auto& rows = parents[e.to - 1];
    std::vector<int> with = rows;
    with.push_back(e.from - 1);
    std::sort(with.begin(), with.end());
    double before = node_objective_at_mle(data, e.to, rows);

    Matrix xs(x.rows(), 1 + with.size());
    xs.col(0).setOnes();
    for (std::size_t t = 0; t < with.size(); ++t) xs.col(1 + t) = x.col(with[t] + 1);
    Vector b = node_poisson_newton(xs, x.col(e.to), 1e-6, 100);
    Vector eta = xs * b;
    double after = 0.0;
    for (int h = 0; h < eta.size(); ++h)
      after += std::exp(std::min(eta[h], kExpArgLimit)) - x(h, e.to) * eta[h];

    std::size_t slot =
        std::lower_bound(with.begin(), with.end(), e.from - 1) - with.begin();
    if (after + 1e-9 < before && std::fabs(b[1 + slot]) > tau) {
      support = std::move(extended);
      parents[e.to - 1] = with;
      grew = true;
    }
  }
  return grew;
}

// Likelihood-aware cycle repair for the dense initializer. A raw magnitude
// comparison cannot tell a true edge from its reversal (both node-wise
// regressions pick up the dependence), so cycles are broken by removing the
// member edge whose refitted likelihood cost is smallest.
void repair_cycles_by_likelihood(const DesignMatrix& data, CoefMatrix& coef, double tau) {
  const int p = coef.p();
  EdgeSet support = threshold_support(coef, tau);
  if (is_acyclic(support, p)) return;

  std::vector<std::vector<int>> parents(p);
  for (const Edge& e : support) parents[e.to - 1].push_back(e.from - 1);
  std::vector<double> base(p, std::numeric_limits<double>::quiet_NaN());
  auto base_of = [&](int node) {
    if (std::isnan(base[node - 1])) base[node - 1] = node_objective_at_mle(data, node, parents[node - 1]);
    return base[node - 1];
  };
  std::map<std::pair<int, int>, double> cost;  // removal cost per edge

  for (;;) {
    if (is_acyclic(support, p)) break;
    auto reach = reachability(support, p);
    Edge cheapest{0, 0};
    double cheapest_cost = std::numeric_limits<double>::infinity();
    for (const Edge& e : support) {
      if (!reach[e.to][e.from]) continue;  // not on any cycle
      auto key = std::make_pair(e.from, e.to);
      auto it = cost.find(key);
      if (it == cost.end()) {
        std::vector<int> reduced;
        for (int r : parents[e.to - 1])
          if (r != e.from - 1) reduced.push_back(r);
        double without = node_objective_at_mle(data, e.to, reduced);
        it = cost.emplace(key, without - base_of(e.to)).first;
      }
      if (it->second < cheapest_cost) {
        cheapest_cost = it->second;
        cheapest = e;
      }
    }
    coef.set_weight(cheapest.from, cheapest.to, 0.0);
    support = threshold_support(coef, tau);
    auto& rows = parents[cheapest.to - 1];
    rows.erase(std::remove(rows.begin(), rows.end(), cheapest.from - 1), rows.end());
    base[cheapest.to - 1] = std::numeric_limits<double>::quiet_NaN();
    for (int k = 1; k <= p; ++k) cost.erase({k, cheapest.to});
  }
}

// Zero out the weakest coefficient lying on a directed cycle until the
// thresholded support induces a DAG. Ties break on the smaller (i, j).
void repair_cycles(CoefMatrix& coef, double tau) {
  const int p = coef.p();
  for (;;) {
    EdgeSet support = threshold_support(coef, tau);
    if (is_acyclic(support, p)) return;
    auto reach = reachability(support, p);
    Edge weakest{0, 0};
    double weakest_mag = std::numeric_limits<double>::infinity();
    for (const Edge& e : support) {
      if (!reach[e.to][e.from]) continue;  // not on any cycle
      double mag = std::fabs(coef.weight(e.from, e.to));
      if (mag < weakest_mag || (mag == weakest_mag && Edge{e.from, e.to} < weakest)) {
        weakest = e;
        weakest_mag = mag;
      }
    }
    coef.set_weight(weakest.from, weakest.to, 0.0);
  }
}

void apply_hard_zeros(CoefMatrix& coef, const EdgeSet& forced_zero) {
  for (const Edge& e : forced_zero) coef.set_weight(e.from, e.to, 0.0);
}

}  // namespace

FitResult fit(const DesignMatrix& data, const FitSpec& spec) { return fit(data, spec, nullptr); }

FitResult fit(const DesignMatrix& data, const FitSpec& spec, AdmmState* state_io) {
  const int p = data.p();
  spec.validate(p);

  CoefMatrix beta(p);
  std::optional<CoefMatrix> baseline;  // feasible warm-start coefficients
  if (spec.warm_start) {
    beta = *spec.warm_start;
    apply_hard_zeros(beta, spec.forced_zero);
    repair_cycles(beta, spec.params.tau);
    baseline = beta;
  } else {
    beta = dense_init(data, spec.forced_zero);
    apply_hard_zeros(beta, spec.forced_zero);
    // The reverse of a budget-exempt coordinate can only lose against it in
    // the penalized objective; drop such reversals before orientation.
    for (const Edge& e : spec.f) {
      if (spec.forced_zero.contains(e)) continue;
      if (std::fabs(beta.weight(e.to, e.from)) > spec.params.tau) beta.set_weight(e.to, e.from, 0.0);
    }
    EdgeSet candidates = threshold_support(beta, spec.params.tau);
    repair_cycles_by_likelihood(data, beta, spec.params.tau);
    EdgeSet selection = threshold_support(beta, spec.params.tau);
    for (int round = 0; round < 3; ++round) {
      orient_by_likelihood(data, selection, p, spec.forced_zero, spec.f);
      if (!grow_by_likelihood(data, selection, p, candidates, spec.forced_zero, spec.params.tau))
        break;
    }
    beta = restricted_mle(data, selection);
  }

  AdmmProblem problem = make_admm_problem(data, beta, spec.forced_zero, spec.f, spec.params.tau,
                                          spec.params.mu, spec.rho);
  std::optional<AdmmState> local_state;
  if (state_io) {
    if (state_io->A.rows() != p) *state_io = AdmmState::init(p, spec.rho, beta.weights());
  } else {
    local_state = AdmmState::init(p, spec.rho, beta.weights());
  }
  AdmmState& state = state_io ? *state_io : *local_state;
  BetaWorkspace ws = BetaWorkspace::init(problem, beta.intercepts(), beta.weights());
  // Feasibility pre-solve: start the slacks and duals from the exact
  // (gamma, xi) block minimum instead of a fully violated zero state.
  update_gamma_xi(problem, state);

  FitResult result;
  result.coef = beta;
  // A warm start from a previous hypothesis fit is a legitimate objective
  // baseline (it keeps lr >= 0 under the warm-start contract). The cold
  // dense initializer is not: it only seeds the indicator sets, and the
  // first subproblem output is accepted unconditionally.
  double r_prev = std::numeric_limits<double>::infinity();
  if (baseline) {
    r_prev = neg_likelihood_objective(data, beta);
    result.objective_trace.push_back(r_prev);
  }

  for (long m = 1; m <= spec.max_dc_iterations; ++m) {
    refresh_indicators(problem, beta);
    SubproblemStatus status = run_admm(problem, state, ws, spec.admm_tol, spec.max_admm_iterations);
    result.admm_iterations += status.iterations;
    result.primal_residual = status.primal_residual;
    result.dual_residual = status.dual_residual;
    ++result.dc_iterations;

    Vector intercepts;
    Matrix weights;
    extract_beta(problem, ws, intercepts, weights);
    CoefMatrix candidate(std::move(intercepts), std::move(weights));
    repair_cycles(candidate, spec.params.tau);

    double r_new = neg_likelihood_objective(data, candidate);
    if (r_new > r_prev) {
      // No further decrease available; keep the previous accepted iterate.
      result.converged = true;
      break;
    }
    beta = candidate;
    result.objective_trace.push_back(r_new);
    if (r_prev - r_new <= spec.epsilon) {
      r_prev = r_new;
      result.converged = true;
      break;
    }
    r_prev = r_new;
  }

  // Final polish: the selected structure is refit by unpenalized restricted
  // maximum likelihood, with the budget-exempt F coordinates entered freely
  // wherever they keep the graph acyclic. This realizes the estimator the
  // outer loop converges to and removes solver noise from likelihood ratios.
  EdgeSet selection = threshold_support(beta, spec.params.tau);
  EdgeSet refit_support = selection;
  for (const Edge& e : spec.f) {
    if (spec.forced_zero.contains(e) || refit_support.contains(e)) continue;
    refit_support.insert(e);
    if (!is_acyclic(refit_support, p)) {
      EdgeSet rollback;
      for (const Edge& kept : refit_support)
        if (kept != e) rollback.insert(kept);
      refit_support = std::move(rollback);
    }
  }
  beta = restricted_mle(data, refit_support);
  result.coef = beta;
  result.edges = threshold_support(beta, spec.params.tau);
  result.log_lik = log_likelihood(data, beta);

  // Warm-started fits never report a worse likelihood than their baseline
  // (the warm coefficients after the hard zeros, which remain feasible here).
  if (baseline) {
    double warm_ll = log_likelihood(data, *baseline);
    if (result.log_lik < warm_ll) {
      result.coef = *baseline;
      result.edges = threshold_support(result.coef, spec.params.tau);
      result.log_lik = warm_ll;
    }
  }
  return result;
}

FitSpec SolverConfig::spec(EdgeSet forced_zero, EdgeSet f) const {
  FitSpec s;
  s.forced_zero = std::move(forced_zero);
  s.f = std::move(f);
  s.params = params;
  s.rho = rho;
  s.epsilon = epsilon;
  s.max_dc_iterations = max_dc_iterations;
  s.max_admm_iterations = max_admm_iterations;
  s.admm_tol = admm_tol;
  return s;
}

FitResult fit_h0_linkage(const DesignMatrix& data, const EdgeSet& f, const SolverConfig& config) {
  FitSpec spec = config.spec(f, f);
  return fit(data, spec);
}

FitResult fit_ha_linkage(const DesignMatrix& data, const EdgeSet& f, const SolverConfig& config,
                         const CoefMatrix* warm_start) {
  FitSpec spec = config.spec({}, f);
  if (warm_start) spec.warm_start = *warm_start;
  return fit(data, spec);
}

FitResult fit_h0_pathway(const DesignMatrix& data, const PathwaySpec& path, int k,
                         const SolverConfig& config) {
  const auto& nodes = path.nodes();
  if (k < 1 || static_cast<std::size_t>(k) > path.length())
    throw Error::domain("fit_h0_pathway: k out of range");
  EdgeSet removed;
  removed.insert({nodes[k - 1], nodes[k]});
  FitSpec spec = config.spec(removed, path.edges());
  return fit(data, spec);
}

FitResult fit_ha_pathway(const DesignMatrix& data, const PathwaySpec& path,
                         const SolverConfig& config, const CoefMatrix* warm_start) {
  FitSpec spec = config.spec({}, path.edges());
  if (warm_start) spec.warm_start = *warm_start;
  return fit(data, spec);
}

CoefMatrix restricted_mle(const DesignMatrix& data, const EdgeSet& support, double grad_tol) {
  const int p = data.p();
  support.validate(p);
  if (!is_acyclic(support, p)) throw Error::cycle("restricted_mle: support contains a cycle");
  std::vector<std::vector<int>> parents(p);
  for (const Edge& e : support) parents[e.to - 1].push_back(e.from - 1);
  for (auto& rows : parents) std::sort(rows.begin(), rows.end());
  return nodewise_mle(data, parents, grad_tol);
}

}  // namespace pdag
