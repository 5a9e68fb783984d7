#include "graphdc/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <queue>

namespace graphdc {

std::vector<std::optional<std::size_t>> bfs_hops(const Adjacency& adj, NodeId source) {
  std::vector<std::optional<std::size_t>> hops(adj.size());
  std::deque<NodeId> frontier{source};
  hops[source] = 0;
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop_front();
    for (const auto& nb : adj[u]) {
      if (!hops[nb.node]) {
        hops[nb.node] = *hops[u] + 1;
        frontier.push_back(nb.node);
      }
    }
  }
  return hops;
}

std::vector<Distance> dijkstra(const Adjacency& adj, NodeId source) {
  constexpr auto kInf = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> dist(adj.size(), kInf);
  using Item = std::pair<std::uint64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0;
  heap.emplace(0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    for (const auto& nb : adj[u]) {
      const std::uint64_t cand = d + nb.w;
      if (cand < dist[nb.node]) {
        dist[nb.node] = cand;
        heap.emplace(cand, nb.node);
      }
    }
  }
  std::vector<Distance> out;
  out.reserve(adj.size());
  for (auto d : dist) out.push_back(d == kInf ? Distance::unreachable() : Distance::of(d));
  return out;
}

std::vector<std::uint32_t> component_labels(const Adjacency& adj) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(adj.size(), kUnset);
  std::uint32_t next = 0;
  std::vector<NodeId> stack;
  for (NodeId root = 0; root < adj.size(); ++root) {
    if (label[root] != kUnset) continue;
    label[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (const auto& nb : adj[u]) {
        if (label[nb.node] == kUnset) {
          label[nb.node] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return label;
}

bool has_cycle(const Graph& g) {
  const auto labels = component_labels(g.adjacency());
  const std::uint32_t components =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> nodes(components, 0), edges(components, 0);
  for (auto l : labels) ++nodes[l];
  for (const auto& e : g.edges()) ++edges[labels[e.u]];
  for (std::uint32_t c = 0; c < components; ++c) {
    if (edges[c] >= nodes[c]) return true;
  }
  return false;
}

std::uint64_t count_triangles(const Graph& g) {
  // Forward adjacency: each triangle u < v < w is found once from its lowest node.
  std::vector<std::vector<NodeId>> higher(g.node_count());
  for (const auto& e : g.edges()) higher[e.u].push_back(e.v);
  for (auto& list : higher) std::sort(list.begin(), list.end());
  std::uint64_t count = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : higher[u]) {
      const auto& a = higher[u];
      const auto& b = higher[v];
      auto ia = std::upper_bound(a.begin(), a.end(), v);
      auto ib = b.begin();
      while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
          ++ia;
        } else if (*ib < *ia) {
          ++ib;
        } else {
          ++count;
          ++ia;
          ++ib;
        }
      }
    }
  }
  return count;
}

Answer oracle_solve(const Graph& g, const Query& q) {
  q.validate_for(g);
  switch (q.task()) {
    case TaskKind::Connectivity: {
      const auto hops = bfs_hops(g.adjacency(), *q.source());
      return YesNo{hops[*q.target()].has_value()};
    }
    case TaskKind::ShortestPath:
      return dijkstra(g.adjacency(), *q.source())[*q.target()];
    case TaskKind::Cycle:
      return YesNo{has_cycle(g)};
    case TaskKind::TriangleCount:
      return Count{count_triangles(g)};
  }
  return YesNo{false};
}

}  // namespace graphdc
