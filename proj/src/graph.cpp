#include "graphdc/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace graphdc {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges, bool weighted)
    : node_count_(node_count), weighted_(weighted), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.u == e.v) {
      throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.v >= node_count_) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") has an endpoint outside [0," + std::to_string(node_count_) +
                                  ")");
    }
    if (!weighted_) {
      e.w = 1;
    } else if (e.w == 0) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") has weight 0");
    }
  }
  std::sort(edges_.begin(), edges_.end(), endpoints_less);
  auto dup = std::adjacent_find(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v;
  });
  if (dup != edges_.end()) {
    throw std::invalid_argument("duplicate edge (" + std::to_string(dup->u) + "," +
                                std::to_string(dup->v) + ")");
  }
}

std::optional<Weight> Graph::weight(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  Edge key{a, b, 0};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key, endpoints_less);
  if (it != edges_.end() && it->u == a && it->v == b) return it->w;
  return std::nullopt;
}

bool Graph::has_edge(NodeId a, NodeId b) const { return weight(a, b).has_value(); }

Adjacency Graph::adjacency() const {
  Adjacency adj(node_count_);
  for (const auto& e : edges_) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  return adj;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(node_count_, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

std::string to_string(TaskKind task) {
  switch (task) {
    case TaskKind::Connectivity:
      return "connectivity";
    case TaskKind::Cycle:
      return "cycle";
    case TaskKind::ShortestPath:
      return "shortest_path";
    case TaskKind::TriangleCount:
      return "triangle_count";
  }
  return "unknown";
}

TaskKind parse_task(std::string_view name) {
  for (auto task : kAllTasks) {
    if (to_string(task) == name) return task;
  }
  throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

bool task_has_endpoints(TaskKind task) {
  return task == TaskKind::Connectivity || task == TaskKind::ShortestPath;
}

namespace {

void require_distinct(NodeId source, NodeId target) {
  if (source == target) {
    throw std::invalid_argument("query endpoints must differ (both are " + std::to_string(source) +
                                ")");
  }
}

}  // namespace

Query Query::connectivity(NodeId source, NodeId target) {
  require_distinct(source, target);
  return Query(TaskKind::Connectivity, source, target);
}

Query Query::shortest_path(NodeId source, NodeId target) {
  require_distinct(source, target);
  return Query(TaskKind::ShortestPath, source, target);
}

Query Query::cycle() { return Query(TaskKind::Cycle, std::nullopt, std::nullopt); }

Query Query::triangle_count() {
  return Query(TaskKind::TriangleCount, std::nullopt, std::nullopt);
}

Query Query::make(TaskKind task, std::optional<NodeId> source, std::optional<NodeId> target) {
  if (task_has_endpoints(task)) {
    if (!source || !target) {
      throw std::invalid_argument(to_string(task) + " query needs a source and a target");
    }
    return task == TaskKind::Connectivity ? connectivity(*source, *target)
                                          : shortest_path(*source, *target);
  }
  return task == TaskKind::Cycle ? cycle() : triangle_count();
}

void Query::validate_for(const Graph& g) const {
  for (auto endpoint : {source_, target_}) {
    if (endpoint && *endpoint >= g.node_count()) {
      throw std::invalid_argument("query endpoint " + std::to_string(*endpoint) +
                                  " is not a node of the graph");
    }
  }
}

std::uint64_t Distance::value() const {
  if (!length_) throw std::logic_error("distance is unreachable");
  return *length_;
}

std::strong_ordering Distance::operator<=>(const Distance& other) const {
  if (reachable() && other.reachable()) return *length_ <=> *other.length_;
  if (reachable()) return std::strong_ordering::less;
  if (other.reachable()) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool answer_matches_task(const Answer& answer, TaskKind task) {
  switch (task) {
    case TaskKind::Connectivity:
    case TaskKind::Cycle:
      return std::holds_alternative<YesNo>(answer);
    case TaskKind::ShortestPath:
      return std::holds_alternative<Distance>(answer);
    case TaskKind::TriangleCount:
      return std::holds_alternative<Count>(answer);
  }
  return false;
}

std::string to_string(const Distance& d) {
  return d.reachable() ? std::to_string(d.value()) : std::string("unreachable");
}

std::string to_string(const Answer& answer) {
  struct Visitor {
    std::string operator()(const YesNo& a) const { return a.value ? "yes" : "no"; }
    std::string operator()(const Distance& d) const { return "distance=" + to_string(d); }
    std::string operator()(const Count& c) const { return "triangles=" + std::to_string(c.value); }
  };
  return std::visit(Visitor{}, answer);
}

}  // namespace graphdc
