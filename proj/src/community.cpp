#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "graphdc/decomposition.hpp"

namespace graphdc {

namespace {

struct Community {
  bool alive = true;
  std::int64_t degree = 0;
  std::map<std::uint32_t, std::int64_t> links;  // neighbor community -> edge count
};

}  // namespace

std::vector<SubgraphId> greedy_modularity_communities(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto m = static_cast<std::int64_t>(g.edge_count());

  // Community i is named by its lowest member, so merging j into i (i < j)
  // keeps the name valid.
  std::vector<Community> comm(n);
  std::vector<std::uint32_t> owner(n);
  for (std::uint32_t v = 0; v < n; ++v) owner[v] = v;
  for (const auto& e : g.edges()) {
    ++comm[e.u].degree;
    ++comm[e.v].degree;
    ++comm[e.u].links[e.v];
    ++comm[e.v].links[e.u];
  }

  // Gain of merging i and j is (2m * w_ij - d_i * d_j) / (2 m^2); compare the
  // integer numerator so the choice is exact and reproducible.
  while (true) {
    std::int64_t best = 0;
    std::uint32_t bi = 0, bj = 0;
    bool found = false;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!comm[i].alive) continue;
      for (auto it = comm[i].links.upper_bound(i); it != comm[i].links.end(); ++it) {
        const std::uint32_t j = it->first;
        const std::int64_t gain = 2 * m * it->second - comm[i].degree * comm[j].degree;
        if (gain > best) {
          best = gain;
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found) break;

    Community& keep = comm[bi];
    Community& gone = comm[bj];
    for (const auto& [k, w] : gone.links) {
      if (k == bi) continue;
      keep.links[k] += w;
      comm[k].links.erase(bj);
      comm[k].links[bi] += w;
    }
    keep.links.erase(bj);
    keep.degree += gone.degree;
    gone.alive = false;
    gone.links.clear();
    for (auto& o : owner) {
      if (o == bj) o = bi;
    }
  }

  // Renumber by lowest member; owner ids already are lowest members.
  std::vector<SubgraphId> rank(n, 0);
  SubgraphId next = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (comm[v].alive) rank[v] = next++;
  }
  std::vector<SubgraphId> partition(n);
  for (std::uint32_t v = 0; v < n; ++v) partition[v] = rank[owner[v]];
  return partition;
}

double modularity(const Graph& g, const std::vector<SubgraphId>& partition) {
  if (g.edge_count() == 0) {
    throw std::invalid_argument("modularity is undefined for a graph without edges");
  }
  if (partition.size() != g.node_count()) {
    throw std::invalid_argument("partition does not cover every node");
  }
  const SubgraphId blocks = *std::max_element(partition.begin(), partition.end()) + 1;
  std::vector<double> internal(blocks, 0.0), degree(blocks, 0.0);
  for (const auto& e : g.edges()) {
    degree[partition[e.u]] += 1.0;
    degree[partition[e.v]] += 1.0;
    if (partition[e.u] == partition[e.v]) internal[partition[e.u]] += 1.0;
  }
  const double m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (SubgraphId c = 0; c < blocks; ++c) {
    const double share = degree[c] / (2.0 * m);
    q += internal[c] / m - share * share;
  }
  return q;
}

}  // namespace graphdc
