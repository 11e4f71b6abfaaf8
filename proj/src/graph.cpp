#include "pdag/graph.hpp"

#include <algorithm>
#include <cmath>

namespace pdag {

namespace {

std::vector<std::vector<int>> adjacency(const EdgeSet& edges, int p) {
  std::vector<std::vector<int>> adj(p + 1);
  for (const Edge& e : edges) adj[e.from].push_back(e.to);
  return adj;
}

}  // namespace

std::optional<std::vector<int>> detect_cycle(const EdgeSet& edges, int p) {
  edges.validate(p);
  auto adj = adjacency(edges, p);
  // colors: 0 unvisited, 1 on stack, 2 done
  std::vector<int> color(p + 1, 0), parent(p + 1, 0);
  for (int start = 1; start <= p; ++start) {
    if (color[start] != 0) continue;
    // Iterative DFS keeping the active path for cycle extraction.
    std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [u, idx] = stack.back();
      if (idx < adj[u].size()) {
        int v = adj[u][idx++];
        if (color[v] == 1) {
          std::vector<int> cycle{v};
          for (auto it = stack.rbegin(); it != stack.rend() && it->first != v; ++it)
            cycle.push_back(it->first);
          std::reverse(cycle.begin() + 1, cycle.end());
          return cycle;
        }
        if (color[v] == 0) {
          color[v] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        color[u] = 2;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

bool is_acyclic(const EdgeSet& edges, int p) { return !detect_cycle(edges, p).has_value(); }

std::vector<int> topological_order(const EdgeSet& edges, int p) {
  edges.validate(p);
  auto adj = adjacency(edges, p);
  std::vector<int> indeg(p + 1, 0);
  for (const Edge& e : edges) ++indeg[e.to];
  std::vector<int> queue, order;
  for (int v = 1; v <= p; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    order.push_back(u);
    for (int v : adj[u])
      if (--indeg[v] == 0) queue.push_back(v);
  }
  if (static_cast<int>(order.size()) != p) throw Error::cycle("topological_order: graph has a cycle");
  return order;
}

std::vector<int> topological_depths(const EdgeSet& edges, int p) {
  auto order = topological_order(edges, p);
  auto adj = adjacency(edges, p);
  std::vector<int> depth(p + 1, 0);
  for (int u : order)
    for (int v : adj[u]) depth[v] = std::max(depth[v], depth[u] + 1);
  depth.erase(depth.begin());
  return depth;  // 0-based vector, depth[v-1] for node v
}

std::vector<std::vector<bool>> reachability(const EdgeSet& edges, int p) {
  std::vector<std::vector<bool>> reach(p + 1, std::vector<bool>(p + 1, false));
  for (const Edge& e : edges) reach[e.from][e.to] = true;
  for (int k = 1; k <= p; ++k)
    for (int i = 1; i <= p; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 1; j <= p; ++j)
        if (reach[k][j]) reach[i][j] = true;
    }
  return reach;
}

EdgeSet threshold_support(const CoefMatrix& coef, double tau) {
  if (!(tau > 0.0)) throw Error::domain("threshold_support: tau must be > 0");
  EdgeSet out;
  const int p = coef.p();
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j)
      if (i != j && std::fabs(coef.weight(i, j)) > tau) out.insert({i, j});
  return out;
}

}  // namespace pdag
