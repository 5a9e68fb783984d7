#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "graphdc/graph.hpp"

namespace graphdc {

/// Hop counts from source; nullopt for nodes in other components.
std::vector<std::optional<std::size_t>> bfs_hops(const Adjacency& adj, NodeId source);

/// Weighted single-source distances (Dijkstra, binary heap).
std::vector<Distance> dijkstra(const Adjacency& adj, NodeId source);

/// Component label per node, labels assigned in order of lowest member.
std::vector<std::uint32_t> component_labels(const Adjacency& adj);

/// True iff some connected component has at least as many edges as nodes.
bool has_cycle(const Graph& g);

/// Exact number of 3-cliques.
std::uint64_t count_triangles(const Graph& g);

/// Ground truth for every task: BFS reachability, Dijkstra (unit weights on
/// unweighted graphs), component edge/node counting, exact triangle count.
/// Throws std::invalid_argument if q's endpoints are not nodes of g.
Answer oracle_solve(const Graph& g, const Query& q);

}  // namespace graphdc
