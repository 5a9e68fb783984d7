#include "graphdc/synthesis.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <set>

#include "graphdc/graph_text.hpp"
#include "graphdc/oracle.hpp"
#include "graphdc/union_find.hpp"

namespace graphdc {

namespace {

std::string node_name(NodeId v) { return "node " + std::to_string(v); }

// Terminal -> owning subgraph, after checking ids and payload kinds.
std::map<NodeId, SubgraphId> terminal_owners(const Query& q, std::span<const SubAnswer> subs) {
  std::set<SubgraphId> ids;
  std::map<NodeId, SubgraphId> owner;
  for (const auto& sa : subs) {
    if (!ids.insert(sa.subgraph_id).second) {
      throw SynthesisError("two sub-answers for subgraph " + std::to_string(sa.subgraph_id));
    }
    if (payload_task(sa.payload) != q.task()) {
      throw PayloadKindMismatch("sub-answer of subgraph " + std::to_string(sa.subgraph_id) +
                                " is a " + to_string(payload_task(sa.payload)) +
                                " payload, query is " + to_string(q.task()));
    }
    for (NodeId t : sa.terminals) {
      if (!owner.emplace(t, sa.subgraph_id).second) {
        throw SynthesisError(node_name(t) + " is a terminal of two subgraphs");
      }
    }
  }
  if (!ids.empty() && *ids.rbegin() + 1 != ids.size()) {
    for (SubgraphId id = 0;; ++id) {
      if (!ids.count(id)) throw MissingSubAnswer("no sub-answer for subgraph " + std::to_string(id));
    }
  }
  return owner;
}

void check_inter_edges(const std::map<NodeId, SubgraphId>& owner, std::span<const Edge> inter) {
  for (const auto& e : inter) {
    for (NodeId v : {e.u, e.v}) {
      if (!owner.count(v)) {
        throw MissingSubAnswer("no sub-answer covers exit " + node_name(v) + " of inter edge " +
                               format_edge(e, true));
      }
    }
    if (owner.at(e.u) == owner.at(e.v)) {
      throw SynthesisError("inter edge " + format_edge(e, true) + " lies inside subgraph " +
                           std::to_string(owner.at(e.u)));
    }
  }
}

void require_terminal(const std::map<NodeId, SubgraphId>& owner, std::optional<NodeId> v) {
  if (v && !owner.count(*v)) {
    throw MissingSubAnswer("query endpoint " + std::to_string(*v) +
                           " is not a terminal of any sub-answer");
  }
}

Answer synthesize_cycle(std::span<const SubAnswer> subs, std::span<const Edge> inter) {
  for (const auto& sa : subs) {
    if (std::get<CycleSummary>(sa.payload).has_intra_cycle) return YesNo{true};
  }
  // Every subgraph is a forest: contract each tree holding exits to a
  // supernode; the graph has a cycle iff the inter edges close a loop there.
  std::map<NodeId, std::size_t> supernode;
  std::size_t next = 0;
  for (const auto& sa : subs) {
    for (const auto& group : std::get<CycleSummary>(sa.payload).exit_components.groups) {
      for (NodeId v : group) supernode[v] = next;
      ++next;
    }
  }
  DisjointSets sets(next);
  for (const auto& e : inter) {
    auto a = supernode.find(e.u);
    auto b = supernode.find(e.v);
    if (a == supernode.end() || b == supernode.end()) {
      throw MissingSubAnswer("inter edge " + format_edge(e, false) +
                             " touches an exit missing from the component groupings");
    }
    if (!sets.unite(a->second, b->second)) return YesNo{true};
  }
  return YesNo{false};
}

Answer synthesize_triangles(std::span<const SubAnswer> subs, std::span<const Edge> inter) {
  std::map<NodeId, std::set<NodeId>> inter_nb;
  NodeId max_node = 0;
  for (const auto& e : inter) {
    inter_nb[e.u].insert(e.v);
    inter_nb[e.v].insert(e.u);
    max_node = std::max({max_node, e.u, e.v});
  }
  std::uint64_t total = 0;
  for (const auto& sa : subs) {
    const auto& summary = std::get<TriangleSummary>(sa.payload);
    total += summary.intra_count;
    // Two corners inside this subgraph, the third outside.
    for (const auto& [a, b] : summary.exit_induced_edges) {
      auto na = inter_nb.find(a);
      auto nb = inter_nb.find(b);
      if (na == inter_nb.end() || nb == inter_nb.end()) continue;
      std::vector<NodeId> common;
      std::set_intersection(na->second.begin(), na->second.end(), nb->second.begin(),
                            nb->second.end(), std::back_inserter(common));
      total += common.size();
    }
  }
  // Three corners in three different subgraphs.
  if (!inter.empty()) {
    total += count_triangles(Graph(max_node + 1, {inter.begin(), inter.end()}, false));
  }
  return Count{total};
}

std::string legend(TaskKind task) {
  switch (task) {
    case TaskKind::Connectivity:
      return "each sub-agent grouped the terminal nodes of its subgraph (its exit nodes and any "
             "question endpoints inside it) so that nodes in one group are connected inside that "
             "subgraph. Two nodes are connected in the full graph if groups can be chained "
             "together through edges between subgraphs.";
    case TaskKind::ShortestPath:
      return "each sub-agent reports, for every pair of its terminal nodes, the shortest distance "
             "inside its subgraph as (a,b,d), or unreachable. A shortest path of the full graph "
             "alternates between such inside distances and edges between subgraphs; an edge "
             "(a,b,w) between subgraphs has weight w.";
    case TaskKind::Cycle:
      return "cycle=yes means that subgraph contains a cycle by itself. components groups its exit "
             "nodes by connectivity inside the subgraph. If no subgraph has a cycle by itself, the "
             "full graph has a cycle exactly when the edges between subgraphs close a loop "
             "through these groups.";
    case TaskKind::TriangleCount:
      return "triangles counts the triangles inside each subgraph and exit_edges lists its edges "
             "between exit nodes. The full graph's triangles are the inside triangles, plus one "
             "for every exit edge (a,b) and node v of another subgraph joined to both a and b by "
             "edges between subgraphs, plus triangles made of three edges between subgraphs.";
  }
  return {};
}

}  // namespace

BoundaryGraph build_boundary_graph(const Query& q, std::span<const SubAnswer> subanswers,
                                   std::span<const Edge> inter_edges) {
  BoundaryGraph bg;
  bg.owner = terminal_owners(q, subanswers);
  check_inter_edges(bg.owner, inter_edges);
  require_terminal(bg.owner, q.source());
  require_terminal(bg.owner, q.target());
  for (const auto& sa : subanswers) {
    if (const auto* g = std::get_if<ComponentGrouping>(&sa.payload)) {
      for (const auto& group : g->groups) {
        for (std::size_t i = 1; i < group.size(); ++i) {
          bg.edges.push_back({group[i - 1], group[i], 0, BoundaryEdge::Kind::Local, sa.subgraph_id});
        }
      }
    } else if (const auto* t = std::get_if<DistanceTable>(&sa.payload)) {
      for (const auto& [pair, d] : t->entries) {
        if (!d.reachable()) continue;
        bg.edges.push_back(
            {pair.first, pair.second, d.value(), BoundaryEdge::Kind::Local, sa.subgraph_id});
      }
    }
  }
  for (const auto& e : inter_edges) {
    bg.edges.push_back({e.u, e.v, e.w, BoundaryEdge::Kind::Inter, bg.owner.at(e.u)});
  }
  return bg;
}

BoundaryPath boundary_shortest_path(const BoundaryGraph& bg, NodeId source, NodeId target) {
  constexpr auto kInf = std::numeric_limits<std::uint64_t>::max();
  std::map<NodeId, std::size_t> index;
  std::vector<NodeId> nodes;
  for (const auto& [v, _] : bg.owner) {
    index.emplace(v, nodes.size());
    nodes.push_back(v);
  }
  if (!index.count(source) || !index.count(target)) {
    throw MissingSubAnswer("path endpoint is not a boundary node");
  }
  std::vector<std::vector<std::size_t>> incident(nodes.size());
  for (std::size_t i = 0; i < bg.edges.size(); ++i) {
    incident[index.at(bg.edges[i].a)].push_back(i);
    incident[index.at(bg.edges[i].b)].push_back(i);
  }
  std::vector<std::uint64_t> dist(nodes.size(), kInf);
  std::vector<std::size_t> via(nodes.size(), SIZE_MAX);
  using Item = std::pair<std::uint64_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[index.at(source)] = 0;
  heap.emplace(0, index.at(source));
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != dist[u]) continue;
    for (std::size_t ei : incident[u]) {
      const auto& e = bg.edges[ei];
      const std::size_t v = index.at(nodes[u] == e.a ? e.b : e.a);
      if (d + e.weight < dist[v]) {
        dist[v] = d + e.weight;
        via[v] = ei;
        heap.emplace(dist[v], v);
      }
    }
  }
  BoundaryPath path;
  const std::size_t t = index.at(target);
  if (dist[t] == kInf) return path;
  path.length = Distance::of(dist[t]);
  for (std::size_t v = t; v != index.at(source);) {
    BoundaryEdge e = bg.edges[via[v]];
    if (e.b != nodes[v]) std::swap(e.a, e.b);
    path.edges.push_back(e);
    v = index.at(e.a);
  }
  std::reverse(path.edges.begin(), path.edges.end());
  return path;
}

Answer synthesize_exact(const Query& q, std::span<const SubAnswer> subanswers,
                        std::span<const Edge> inter_edges) {
  switch (q.task()) {
    case TaskKind::Connectivity: {
      const BoundaryGraph bg = build_boundary_graph(q, subanswers, inter_edges);
      std::map<NodeId, std::size_t> index;
      for (const auto& [v, _] : bg.owner) index.emplace(v, index.size());
      DisjointSets sets(index.size());
      for (const auto& e : bg.edges) sets.unite(index.at(e.a), index.at(e.b));
      return YesNo{sets.same(index.at(*q.source()), index.at(*q.target()))};
    }
    case TaskKind::ShortestPath: {
      const BoundaryGraph bg = build_boundary_graph(q, subanswers, inter_edges);
      return boundary_shortest_path(bg, *q.source(), *q.target()).length;
    }
    case TaskKind::Cycle: {
      const auto owner = terminal_owners(q, subanswers);
      check_inter_edges(owner, inter_edges);
      return synthesize_cycle(subanswers, inter_edges);
    }
    case TaskKind::TriangleCount: {
      const auto owner = terminal_owners(q, subanswers);
      check_inter_edges(owner, inter_edges);
      return synthesize_triangles(subanswers, inter_edges);
    }
  }
  throw SynthesisError("unknown task");
}

std::string render_master_prompt(const Query& q, std::span<const SubAnswer> subanswers,
                                 std::span<const Edge> inter_edges, bool weighted,
                                 const PromptTemplate& tmpl) {
  std::string results;
  for (const auto& sa : subanswers) {
    results += "subgraph " + std::to_string(sa.subgraph_id) + ": terminals=" +
               node_list(sa.terminals) + "; " + format_payload(sa.payload) + "\n";
  }
  std::string inter = "[";
  for (std::size_t i = 0; i < inter_edges.size(); ++i) {
    if (i) inter += ',';
    inter += format_edge(inter_edges[i], weighted);
  }
  inter += "]";
  const std::map<std::string, std::string> bindings{
      {"QUESTION", question_text(q)},
      {"LEGEND", legend(q.task())},
      {"SUB_ANSWERS", results},
      {"INTER_EDGES", inter},
      {"ANSWER_FORMAT", final_answer_format_instructions(q.task())},
  };
  return render_placeholders(tmpl.preamble, bindings) + "\n\n" +
         render_placeholders(tmpl.instruction, bindings) + "\n";
}

MasterReply synthesize_llm(ChatClient& client, const Query& q,
                           std::span<const SubAnswer> subanswers,
                           std::span<const Edge> inter_edges, bool weighted,
                           const PromptTemplate& tmpl) {
  for (const auto& sa : subanswers) {
    if (payload_task(sa.payload) != q.task()) {
      throw PayloadKindMismatch("sub-answer of subgraph " + std::to_string(sa.subgraph_id) +
                                " does not match the query task");
    }
  }
  MasterReply reply;
  reply.prompt = render_master_prompt(q, subanswers, inter_edges, weighted, tmpl);
  reply.raw = client.complete(reply.prompt);
  reply.answer = extract_final_answer(reply.raw, q.task());
  return reply;
}

}  // namespace graphdc
