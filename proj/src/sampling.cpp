#include "pdag/sampling.hpp"

#include <cmath>

#include "pdag/graph.hpp"

namespace pdag {

CountMatrix sample_dag(const CoefMatrix& coef, int n, std::uint64_t seed,
                       const SampleOptions& options) {
  const int p = coef.p();
  EdgeSet support = coef.support();
  if (auto cyc = detect_cycle(support, p))
    throw Error::cycle("sample_dag: coefficient support contains a cycle through node " +
                       std::to_string(cyc->front()));
  auto order = topological_order(support, p);

  // Parent lists per node (0-based indices into columns).
  std::vector<std::vector<int>> parents(p);
  for (const Edge& e : support) parents[e.to - 1].push_back(e.from - 1);

  Matrix values = Matrix::Zero(n, p);
  Rng rng(seed);
  for (int h = 0; h < n; ++h) {
    for (int node : order) {
      int j = node - 1;
      double eta = coef.intercepts()[j];
      for (int i : parents[j]) eta += values(h, i) * coef.weights()(i, j);
      double mean = std::exp(eta);
      if (!(mean <= options.mean_cap))
        throw Error::overflow("sample_dag: Poisson mean " + std::to_string(mean) + " at node " +
                              std::to_string(node) + " exceeds cap");
      values(h, j) = static_cast<double>(poisson_draw(rng, mean));
    }
  }

  std::vector<std::string> names(p);
  for (int j = 0; j < p; ++j) names[j] = "X" + std::to_string(j + 1);
  return CountMatrix(std::move(values), std::move(names));
}

}  // namespace pdag
