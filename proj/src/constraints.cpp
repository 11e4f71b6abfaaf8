#include "pdag/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "pdag/graph.hpp"

namespace pdag {

double j_tau(double z, double tau) {
  if (!(tau > 0.0)) throw Error::domain("j_tau: tau must be > 0");
  return std::min(std::fabs(z) / tau, 1.0);
}

std::pair<double, double> dc_split(double z, double tau) {
  if (!(tau > 0.0)) throw Error::domain("dc_split: tau must be > 0");
  double s1 = std::fabs(z) / tau;
  return {s1, std::max(s1 - 1.0, 0.0)};
}

double s2_subgradient(double z_prev, double tau) {
  if (std::fabs(z_prev) <= tau) return 0.0;
  return (z_prev > 0.0 ? 1.0 : -1.0) / tau;
}

double budget_value(const CoefMatrix& coef, const EdgeSet& f, const SurrogateParams& params) {
  params.validate();
  const int p = coef.p();
  f.validate(p);
  double total = 0.0;
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j) {
      if (i == j || f.contains({i, j})) continue;
      total += j_tau(coef.weight(i, j), params.tau);
    }
  return total;
}

namespace {

template <typename EdgeValue>
double max_residual_impl(int p, const DualGamma& gamma, EdgeValue edge_value) {
  if (gamma.rows() != p || gamma.cols() != p)
    throw Error::dimension("acyclicity residuals: gamma must be p x p");
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j)
      for (int k = 1; k <= p; ++k) {
        if (k == j) continue;
        double r = edge_value(j, k) - gamma(i - 1, k - 1) - (i != j ? 1.0 : 0.0) + gamma(i - 1, j - 1);
        worst = std::max(worst, r);
      }
  return worst;
}

}  // namespace

std::vector<double> acyclicity_residuals(const CoefMatrix& coef, const DualGamma& gamma, double tau) {
  if (!(tau > 0.0)) throw Error::domain("acyclicity_residuals: tau must be > 0");
  const int p = coef.p();
  if (p > 64) throw Error::domain("acyclicity_residuals: tensor form is limited to p <= 64");
  if (gamma.rows() != p || gamma.cols() != p)
    throw Error::dimension("acyclicity_residuals: gamma must be p x p");
  std::vector<double> r(static_cast<std::size_t>(p) * p * p, 0.0);
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j)
      for (int k = 1; k <= p; ++k) {
        if (k == j) continue;
        r[residual_index(i, j, k, p)] = j_tau(coef.weight(j, k), tau) - gamma(i - 1, k - 1) -
                                        (i != j ? 1.0 : 0.0) + gamma(i - 1, j - 1);
      }
  return r;
}

double max_acyclicity_residual(const CoefMatrix& coef, const DualGamma& gamma, double tau,
                               bool indicator) {
  if (!(tau > 0.0)) throw Error::domain("max_acyclicity_residual: tau must be > 0");
  return max_residual_impl(coef.p(), gamma, [&](int j, int k) {
    double w = coef.weight(j, k);
    return indicator ? (std::fabs(w) > tau ? 1.0 : 0.0) : j_tau(w, tau);
  });
}

double max_acyclicity_residual(const EdgeSet& edges, int p, const DualGamma& gamma) {
  edges.validate(p);
  return max_residual_impl(p, gamma,
                           [&](int j, int k) { return edges.contains({j, k}) ? 1.0 : 0.0; });
}

DualGamma construct_feasible_gamma(const EdgeSet& edges, int p) {
  auto depth = topological_depths(edges, p);  // throws on cycles
  DualGamma gamma = DualGamma::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (depth[j] > depth[i]) gamma(i, j) = 1.0;
  return gamma;
}

}  // namespace pdag
