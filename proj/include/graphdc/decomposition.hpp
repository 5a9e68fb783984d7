#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graphdc/graph.hpp"

namespace graphdc {

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Subgraph {
  SubgraphId id = 0;
  std::vector<NodeId> nodes;        // original ids, ascending
  std::vector<Edge> internal_edges; // both endpoints in nodes, ascending
  std::vector<NodeId> exit_nodes;   // nodes with >= 1 inter edge, ascending

  bool contains(NodeId v) const;
  bool is_exit(NodeId v) const;

  bool operator==(const Subgraph&) const = default;
};

/// A subgraph re-indexed to [0, nodes.size()) for running local algorithms.
struct LocalView {
  Graph graph;
  std::vector<NodeId> to_global;
  std::unordered_map<NodeId, NodeId> to_local;
};

LocalView local_view(const Subgraph& sub, bool weighted);

struct Decomposition {
  std::size_t node_count = 0;
  bool weighted = false;
  std::vector<SubgraphId> partition;  // node -> subgraph id
  std::vector<Subgraph> subgraphs;    // indexed by id
  std::vector<Edge> inter_edges;      // ascending

  bool operator==(const Decomposition&) const = default;
};

using Splitter = std::function<Decomposition(const Graph&)>;

inline constexpr std::size_t kDefaultMaxSubgraphSize = 25;

/// Builds the decomposition induced by an explicit node -> block map. Block
/// ids must cover [0, k) with every block non-empty.
Decomposition decompose_by_partition(const Graph& g, const std::vector<SubgraphId>& partition);

/// Greedy agglomerative modularity maximization (Clauset-Newman-Moore).
/// Starting from singletons, repeatedly merges the pair of adjacent
/// communities with the largest positive modularity gain; ties go to the
/// lowest (community, community) pair, where a community is named by its
/// lowest node. Returns a node -> community map with ids numbered by lowest
/// member. Communities are always connected.
std::vector<SubgraphId> greedy_modularity_communities(const Graph& g);

/// Newman modularity of a partition on the unweighted adjacency.
/// Throws std::invalid_argument for edgeless graphs or a partition that does
/// not cover every node.
double modularity(const Graph& g, const std::vector<SubgraphId>& partition);

/// The splitter. A graph with at most max_subgraph_size nodes is returned as
/// one subgraph. Otherwise: greedy modularity communities, communities larger than the
/// cap recursively re-split on their induced subgraph (falling back to a
/// breadth-first bisection when the re-split makes no progress), singletons
/// absorbed into the adjacent community with the most edges to them (ties to
/// the lowest id, only if it has room), and isolated nodes packed into
/// consecutive runs of at most max_subgraph_size. Subgraph ids follow the
/// lowest member. Pure function of its inputs.
/// Throws std::invalid_argument if max_subgraph_size < 2.
Decomposition split(const Graph& g, std::size_t max_subgraph_size = kDefaultMaxSubgraphSize);

/// Reassembles G from the subgraphs and inter edges after checking every
/// decomposition invariant; throws DecompositionError naming the first one
/// violated.
Graph reconstruct(const Decomposition& d);

/// Audit-log record; see docs/FORMATS.md.
std::string serialize_decomposition(const Decomposition& d);
Decomposition parse_decomposition(std::string_view text);

}  // namespace graphdc
