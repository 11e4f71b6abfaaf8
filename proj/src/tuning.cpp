#include "pdag/tuning.hpp"

#include <algorithm>
#include <cmath>

#include "pdag/likelihood.hpp"
#include "pdag/rng.hpp"

namespace pdag {

void CvGrid::validate() const {
  if (mu_values.empty() || tau_values.empty()) throw Error::domain("CvGrid: empty grid");
  if (folds < 2) throw Error::domain("CvGrid: fold count must be >= 2");
}

std::vector<int> cv_folds(int n, int folds, std::uint64_t seed) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<int> fold(n);
  for (int i = 0; i < n; ++i) fold[order[i]] = i % folds;
  return fold;
}

namespace {

Matrix select_rows(const Matrix& x, const std::vector<int>& rows) {
  Matrix out(rows.size(), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(r) = x.row(rows[r]);
  return out;
}

// Coefficients restricted to the training-fold parent sets: sub-tau weights
// evaluate as exact zeros on the held-out fold.
CoefMatrix thresholded_coef(const CoefMatrix& coef, double tau) {
  CoefMatrix out = coef;
  const int p = coef.p();
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j)
      if (i != j && std::fabs(out.weight(i, j)) <= tau) out.set_weight(i, j, 0.0);
  return out;
}

}  // namespace

CvSelection cv_select(const DesignMatrix& data, const CvGrid& grid, const SolverConfig& base) {
  grid.validate();
  const int n = data.n();
  if (n < grid.folds) throw Error::domain("cv_select: n must be >= fold count");

  std::vector<int> fold = cv_folds(n, grid.folds, grid.seed);
  std::vector<std::vector<int>> train_rows(grid.folds), test_rows(grid.folds);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < grid.folds; ++l)
      (fold[i] == l ? test_rows[l] : train_rows[l]).push_back(i);
  }

  // Ascending sweep makes the strict-improvement rule break ties toward the
  // smaller mu, then the smaller tau.
  std::vector<double> mus = grid.mu_values, taus = grid.tau_values;
  std::sort(mus.begin(), mus.end());
  std::sort(taus.begin(), taus.end());

  CvSelection sel;
  bool any_valid = false;
  double best = -std::numeric_limits<double>::infinity();
  for (double mu : mus)
    for (double tau : taus) {
      CvCell cell;
      cell.mu = mu;
      cell.tau = tau;
      for (int l = 0; l < grid.folds && cell.valid; ++l) {
        try {
          DesignMatrix train(select_rows(data.x(), train_rows[l]), data.p());
          DesignMatrix held(select_rows(data.x(), test_rows[l]), data.p());
          SolverConfig config = base;
          config.params.mu = mu;
          config.params.tau = tau;
          FitResult fit_res = fit_ha_linkage(train, EdgeSet{}, config);
          CoefMatrix eval_coef = thresholded_coef(fit_res.coef, tau);
          cell.fold_loglik.push_back(log_likelihood(held, eval_coef));
        } catch (const Error&) {
          cell.valid = false;
        }
      }
      if (cell.valid) {
        cell.total = 0.0;
        for (double v : cell.fold_loglik) cell.total += v;
        any_valid = true;
        if (cell.total > best) {
          best = cell.total;
          sel.mu = mu;
          sel.tau = tau;
        }
      }
      sel.table.push_back(std::move(cell));
    }
  if (!any_valid) throw Error::convergence("cv_select: every grid cell failed");
  return sel;
}

}  // namespace pdag
