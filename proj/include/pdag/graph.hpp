#pragma once

#include <optional>
#include <vector>

#include "pdag/types.hpp"

namespace pdag {

/// Returns some directed cycle as a 1-based node list if one exists.
std::optional<std::vector<int>> detect_cycle(const EdgeSet& edges, int p);

bool is_acyclic(const EdgeSet& edges, int p);

/// Longest-path depth per node (0 for sources). Throws on cycles.
std::vector<int> topological_depths(const EdgeSet& edges, int p);

/// A topological order (1-based node ids). Throws on cycles.
std::vector<int> topological_order(const EdgeSet& edges, int p);

/// reach(u, v) true when a directed path u -> ... -> v exists (1-based).
std::vector<std::vector<bool>> reachability(const EdgeSet& edges, int p);

/// {(i, j) : |weights(i, j)| > tau}
EdgeSet threshold_support(const CoefMatrix& coef, double tau);

}  // namespace pdag
