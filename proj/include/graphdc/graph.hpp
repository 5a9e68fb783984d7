#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace graphdc {

using NodeId = std::uint32_t;
using SubgraphId = std::uint32_t;
using Weight = std::uint32_t;

/// Undirected edge, stored canonically with u < v. Unweighted graphs carry w = 1.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  Weight w = 1;

  auto operator<=>(const Edge&) const = default;
};

/// Orders edges by endpoints only, ignoring weight.
inline bool endpoints_less(const Edge& a, const Edge& b) {
  return a.u != b.u ? a.u < b.u : a.v < b.v;
}

struct Neighbor {
  NodeId node;
  Weight w;
};

using Adjacency = std::vector<std::vector<Neighbor>>;

/// Simple undirected graph over nodes [0, node_count) with optional positive
/// integer weights. Immutable after construction; the edge list is kept sorted
/// by (u, v) so that two graphs with the same edges compare equal.
class Graph {
 public:
  Graph() = default;

  /// Throws std::invalid_argument on self-loops, duplicate edges, endpoints
  /// out of range, or zero weights on a weighted graph. Weights of an
  /// unweighted graph are normalized to 1.
  Graph(std::size_t node_count, std::vector<Edge> edges, bool weighted = false);

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool weighted() const { return weighted_; }
  std::span<const Edge> edges() const { return edges_; }

  bool has_edge(NodeId a, NodeId b) const;
  std::optional<Weight> weight(NodeId a, NodeId b) const;

  /// Neighbor lists sorted by node id.
  Adjacency adjacency() const;
  std::vector<std::size_t> degrees() const;

  bool operator==(const Graph&) const = default;

 private:
  std::size_t node_count_ = 0;
  bool weighted_ = false;
  std::vector<Edge> edges_;
};

enum class TaskKind { Connectivity, Cycle, ShortestPath, TriangleCount };

inline constexpr TaskKind kAllTasks[] = {TaskKind::Connectivity, TaskKind::Cycle,
                                         TaskKind::ShortestPath, TaskKind::TriangleCount};

std::string to_string(TaskKind task);
/// Accepts the names produced by to_string ("connectivity", "cycle",
/// "shortest_path", "triangle_count"). Throws std::invalid_argument otherwise.
TaskKind parse_task(std::string_view name);

bool task_has_endpoints(TaskKind task);

class Query {
 public:
  static Query connectivity(NodeId source, NodeId target);
  static Query shortest_path(NodeId source, NodeId target);
  static Query cycle();
  static Query triangle_count();
  /// Dispatches to the factory above; endpoints are ignored for tasks that take none.
  static Query make(TaskKind task, std::optional<NodeId> source = std::nullopt,
                    std::optional<NodeId> target = std::nullopt);

  TaskKind task() const { return task_; }
  std::optional<NodeId> source() const { return source_; }
  std::optional<NodeId> target() const { return target_; }

  /// Throws std::invalid_argument if an endpoint is outside g.
  void validate_for(const Graph& g) const;

  bool operator==(const Query&) const = default;

 private:
  Query(TaskKind task, std::optional<NodeId> s, std::optional<NodeId> t)
      : task_(task), source_(s), target_(t) {}

  TaskKind task_ = TaskKind::Cycle;
  std::optional<NodeId> source_;
  std::optional<NodeId> target_;
};

/// Shortest-path length, or the distinguished unreachable value.
class Distance {
 public:
  static Distance of(std::uint64_t length) { return Distance(length); }
  static Distance unreachable() { return Distance(); }

  bool reachable() const { return length_.has_value(); }
  /// Throws std::logic_error when unreachable.
  std::uint64_t value() const;

  bool operator==(const Distance&) const = default;
  /// Unreachable orders after every finite distance.
  std::strong_ordering operator<=>(const Distance& other) const;

 private:
  Distance() = default;
  explicit Distance(std::uint64_t length) : length_(length) {}

  std::optional<std::uint64_t> length_;
};

struct YesNo {
  bool value = false;
  bool operator==(const YesNo&) const = default;
};

struct Count {
  std::uint64_t value = 0;
  bool operator==(const Count&) const = default;
};

using Answer = std::variant<YesNo, Distance, Count>;

/// True iff the answer variant is the one the task produces.
bool answer_matches_task(const Answer& answer, TaskKind task);

/// "yes", "no", "distance=5", "distance=unreachable", "triangles=3".
std::string to_string(const Answer& answer);
std::string to_string(const Distance& d);

}  // namespace graphdc
