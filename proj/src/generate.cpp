#include "graphdc/generate.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "graphdc/oracle.hpp"

namespace graphdc {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return mix_seed(mix_seed(a) ^ b); }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  // Largest multiple of bound that fits; reject the biased tail.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

Graph gen_random_graph(SizeBand band, double edge_density, bool weighted, std::uint64_t seed) {
  if (band.lo < 2) {
    throw std::invalid_argument("size band lower bound must be at least 2");
  }
  if (band.hi < band.lo) throw std::invalid_argument("size band is empty");
  if (!(edge_density > 0.0)) throw std::invalid_argument("edge density must be positive");

  Rng rng(seed);
  const std::size_t n = rng.between(band.lo, band.hi);
  const std::size_t max_edges = n * (n - 1) / 2;
  const auto wanted = static_cast<std::size_t>(std::llround(edge_density * static_cast<double>(n)));
  const std::size_t m = std::min(wanted, max_edges);

  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<Edge> edges;
  edges.reserve(m);
  while (edges.size() < m) {
    auto a = static_cast<NodeId>(rng.below(n));
    auto b = static_cast<NodeId>(rng.below(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.emplace(a, b).second) continue;
    Weight w = weighted ? static_cast<Weight>(rng.between(kMinWeight, kMaxWeight)) : 1;
    edges.push_back({a, b, w});
  }
  return Graph(n, std::move(edges), weighted);
}

std::pair<NodeId, NodeId> pick_far_pair(const Graph& g, std::uint64_t rng_seed) {
  const std::size_t n = g.node_count();
  if (n < 2) throw std::invalid_argument("pick_far_pair needs at least 2 nodes");

  std::vector<std::pair<NodeId, NodeId>> candidates;
  if (n * (n - 1) / 2 <= kFarPairCandidates) {
    for (NodeId s = 0; s < n; ++s) {
      for (NodeId t = s + 1; t < n; ++t) candidates.emplace_back(s, t);
    }
  } else {
    Rng rng(rng_seed);
    while (candidates.size() < kFarPairCandidates) {
      auto a = static_cast<NodeId>(rng.below(n));
      auto b = static_cast<NodeId>(rng.below(n));
      if (a == b) continue;
      candidates.emplace_back(std::min(a, b), std::max(a, b));
    }
  }

  const Adjacency adj = g.adjacency();
  std::map<NodeId, std::vector<std::optional<std::size_t>>> hops_from;
  std::pair<NodeId, NodeId> best{0, 0};
  std::optional<std::size_t> best_hops = 0;
  bool have_best = false;
  for (auto [s, t] : candidates) {
    auto it = hops_from.find(s);
    if (it == hops_from.end()) it = hops_from.emplace(s, bfs_hops(adj, s)).first;
    const auto hops = it->second[t];
    // nullopt (different components) beats any finite distance.
    const bool farther = !have_best || (best_hops && (!hops || *hops > *best_hops));
    const bool tie_lower = have_best && hops == best_hops && std::pair{s, t} < best;
    if (farther || tie_lower) {
      best = {s, t};
      best_hops = hops;
      have_best = true;
    }
  }
  return best;
}

}  // namespace graphdc
