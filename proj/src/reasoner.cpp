#include "graphdc/reasoner.hpp"

#include <algorithm>
#include <map>

#include "graphdc/oracle.hpp"

namespace graphdc {

namespace {

ComponentGrouping group_by_component(const LocalView& view, const std::vector<std::uint32_t>& label,
                                     const std::vector<NodeId>& members) {
  std::map<std::uint32_t, std::vector<NodeId>> by_label;
  for (NodeId v : members) by_label[label[view.to_local.at(v)]].push_back(v);
  ComponentGrouping g;
  for (auto& [_, group] : by_label) g.groups.push_back(std::move(group));
  g.canonicalize();
  return g;
}

}  // namespace

SubPayload solve_local(const Subgraph& sub, TaskKind task, const std::vector<NodeId>& terminals) {
  const LocalView view = local_view(sub, /*weighted=*/true);
  const Adjacency adj = view.graph.adjacency();
  switch (task) {
    case TaskKind::Connectivity:
      return group_by_component(view, component_labels(adj), terminals);
    case TaskKind::ShortestPath: {
      DistanceTable table;
      for (std::size_t i = 0; i < terminals.size(); ++i) {
        const auto dist = dijkstra(adj, view.to_local.at(terminals[i]));
        for (std::size_t j = i + 1; j < terminals.size(); ++j) {
          table.entries.emplace(NodePair{terminals[i], terminals[j]},
                                dist[view.to_local.at(terminals[j])]);
        }
      }
      return table;
    }
    case TaskKind::Cycle: {
      CycleSummary summary;
      summary.has_intra_cycle = has_cycle(view.graph);
      summary.exit_components = group_by_component(view, component_labels(adj), sub.exit_nodes);
      return summary;
    }
    case TaskKind::TriangleCount: {
      TriangleSummary summary;
      summary.intra_count = count_triangles(view.graph);
      for (const auto& e : sub.internal_edges) {
        if (sub.is_exit(e.u) && sub.is_exit(e.v)) summary.exit_induced_edges.emplace_back(e.u, e.v);
      }
      return summary;
    }
  }
  return ComponentGrouping{};
}

std::string ExactLocalReasoner::answer(const Subgraph& sub, const SubQuery& sq) {
  if (sq.subgraph_id != sub.id) {
    throw std::invalid_argument("sub-query for subgraph " + std::to_string(sq.subgraph_id) +
                                " sent to subgraph " + std::to_string(sub.id));
  }
  const SubPayload payload = solve_local(sub, sq.task, sq.terminals);
  return "Exact local analysis of subgraph " + std::to_string(sub.id) + " (" +
         std::to_string(sub.nodes.size()) + " nodes, " + std::to_string(sub.internal_edges.size()) +
         " edges).\n" + format_answer_line(payload) + "\n";
}

}  // namespace graphdc
