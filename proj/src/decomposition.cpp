#include "graphdc/decomposition.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "graphdc/graph_text.hpp"

namespace graphdc {

bool Subgraph::contains(NodeId v) const {
  return std::binary_search(nodes.begin(), nodes.end(), v);
}

bool Subgraph::is_exit(NodeId v) const {
  return std::binary_search(exit_nodes.begin(), exit_nodes.end(), v);
}

LocalView local_view(const Subgraph& sub, bool weighted) {
  LocalView view;
  view.to_global = sub.nodes;
  for (NodeId i = 0; i < sub.nodes.size(); ++i) view.to_local.emplace(sub.nodes[i], i);
  std::vector<Edge> edges;
  edges.reserve(sub.internal_edges.size());
  for (const auto& e : sub.internal_edges) {
    edges.push_back({view.to_local.at(e.u), view.to_local.at(e.v), e.w});
  }
  view.graph = Graph(sub.nodes.size(), std::move(edges), weighted);
  return view;
}

Decomposition decompose_by_partition(const Graph& g, const std::vector<SubgraphId>& partition) {
  if (partition.size() != g.node_count()) {
    throw std::invalid_argument("partition size does not match node count");
  }
  const SubgraphId blocks =
      partition.empty() ? 0 : *std::max_element(partition.begin(), partition.end()) + 1;
  Decomposition d;
  d.node_count = g.node_count();
  d.weighted = g.weighted();
  d.partition = partition;
  d.subgraphs.resize(blocks);
  for (SubgraphId id = 0; id < blocks; ++id) d.subgraphs[id].id = id;
  for (NodeId v = 0; v < g.node_count(); ++v) d.subgraphs[partition[v]].nodes.push_back(v);
  for (const auto& sub : d.subgraphs) {
    if (sub.nodes.empty()) {
      throw std::invalid_argument("partition leaves block " + std::to_string(sub.id) + " empty");
    }
  }
  std::vector<std::set<NodeId>> exits(blocks);
  for (const auto& e : g.edges()) {
    const SubgraphId a = partition[e.u];
    const SubgraphId b = partition[e.v];
    if (a == b) {
      d.subgraphs[a].internal_edges.push_back(e);
    } else {
      d.inter_edges.push_back(e);
      exits[a].insert(e.u);
      exits[b].insert(e.v);
    }
  }
  for (SubgraphId id = 0; id < blocks; ++id) {
    d.subgraphs[id].exit_nodes.assign(exits[id].begin(), exits[id].end());
  }
  return d;
}

namespace {

using Block = std::vector<NodeId>;  // ascending original ids

Graph induced(const Graph& g, const Block& block) {
  std::unordered_map<NodeId, NodeId> local;
  for (NodeId i = 0; i < block.size(); ++i) local.emplace(block[i], i);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    auto a = local.find(e.u);
    auto b = local.find(e.v);
    if (a != local.end() && b != local.end()) edges.push_back({a->second, b->second, e.w});
  }
  return Graph(block.size(), std::move(edges), g.weighted());
}

std::vector<Block> blocks_of(const std::vector<SubgraphId>& partition, const Block& members) {
  const SubgraphId count =
      partition.empty() ? 0 : *std::max_element(partition.begin(), partition.end()) + 1;
  std::vector<Block> out(count);
  for (NodeId i = 0; i < partition.size(); ++i) out[partition[i]].push_back(members[i]);
  return out;
}

// Breadth-first order from the lowest node, restarting at the lowest unvisited
// node when the block is disconnected; the first half of that order is the
// first part.
std::pair<Block, Block> bisect(const Graph& h, const Block& members) {
  const Adjacency adj = h.adjacency();
  std::vector<bool> seen(h.node_count(), false);
  std::vector<NodeId> order;
  for (NodeId root = 0; root < h.node_count(); ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::deque<NodeId> frontier{root};
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop_front();
      order.push_back(u);
      for (const auto& nb : adj[u]) {
        if (!seen[nb.node]) {
          seen[nb.node] = true;
          frontier.push_back(nb.node);
        }
      }
    }
  }
  const std::size_t half = (order.size() + 1) / 2;
  Block first, second;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < half ? first : second).push_back(members[order[i]]);
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {first, second};
}

void refine(const Graph& g, const Block& block, std::size_t cap, std::vector<Block>& out) {
  if (block.size() <= cap) {
    out.push_back(block);
    return;
  }
  const Graph h = induced(g, block);
  auto parts = blocks_of(greedy_modularity_communities(h), block);
  if (parts.size() < 2) {
    auto [first, second] = bisect(h, block);
    parts = {std::move(first), std::move(second)};
  }
  for (const auto& part : parts) refine(g, part, cap, out);
}

}  // namespace

Decomposition split(const Graph& g, std::size_t max_subgraph_size) {
  if (max_subgraph_size < 2) throw std::invalid_argument("max_subgraph_size must be at least 2");
  const std::size_t n = g.node_count();
  // A graph that already fits is handed to a single agent whole.
  if (n <= max_subgraph_size) return decompose_by_partition(g, std::vector<SubgraphId>(n, 0));
  const auto degree = g.degrees();

  std::vector<Block> blocks;
  if (g.edge_count() > 0) {
    Block all(n);
    for (NodeId v = 0; v < n; ++v) all[v] = v;
    for (const auto& community : blocks_of(greedy_modularity_communities(g), all)) {
      if (community.size() == 1 && degree[community.front()] == 0) continue;  // packed below
      refine(g, community, max_subgraph_size, blocks);
    }
  }

  // Absorb non-isolated singletons into the adjacent block with the most
  // edges to them, lowest block (by lowest member) on ties, if it has room.
  std::vector<std::size_t> owner(n, SIZE_MAX);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (NodeId v : blocks[b]) owner[v] = b;
  }
  const Adjacency adj = g.adjacency();
  for (NodeId v = 0; v < n; ++v) {
    if (owner[v] == SIZE_MAX || blocks[owner[v]].size() != 1) continue;
    std::map<std::size_t, std::size_t> links;
    for (const auto& nb : adj[v]) ++links[owner[nb.node]];
    std::size_t target = SIZE_MAX, best_links = 0;
    for (const auto& [b, count] : links) {
      if (b == owner[v] || blocks[b].size() >= max_subgraph_size) continue;
      if (count > best_links || (count == best_links && blocks[b].front() < blocks[target].front())) {
        target = b;
        best_links = count;
      }
    }
    if (target == SIZE_MAX) continue;
    const std::size_t from = owner[v];
    blocks[from].clear();
    blocks[target].insert(std::upper_bound(blocks[target].begin(), blocks[target].end(), v), v);
    owner[v] = target;
  }
  std::erase_if(blocks, [](const Block& b) { return b.empty(); });

  // Isolated nodes: consecutive runs of at most the cap.
  Block run;
  for (NodeId v = 0; v < n; ++v) {
    if (degree[v] != 0) continue;
    run.push_back(v);
    if (run.size() == max_subgraph_size) {
      blocks.push_back(run);
      run.clear();
    }
  }
  if (!run.empty()) blocks.push_back(run);

  std::sort(blocks.begin(), blocks.end(),
            [](const Block& a, const Block& b) { return a.front() < b.front(); });
  std::vector<SubgraphId> partition(n);
  for (SubgraphId id = 0; id < blocks.size(); ++id) {
    for (NodeId v : blocks[id]) partition[v] = id;
  }
  return decompose_by_partition(g, partition);
}

Graph reconstruct(const Decomposition& d) {
  auto fail = [](const std::string& what) { throw DecompositionError(what); };

  std::vector<SubgraphId> seen_in(d.node_count, UINT32_MAX);
  for (std::size_t i = 0; i < d.subgraphs.size(); ++i) {
    const auto& sub = d.subgraphs[i];
    if (sub.id != i) fail("subgraph at position " + std::to_string(i) + " has id " + std::to_string(sub.id));
    for (NodeId v : sub.nodes) {
      if (v >= d.node_count) fail("node " + std::to_string(v) + " out of range");
      if (seen_in[v] != UINT32_MAX) fail("node " + std::to_string(v) + " is in two subgraphs");
      seen_in[v] = sub.id;
    }
  }
  for (NodeId v = 0; v < d.node_count; ++v) {
    if (seen_in[v] == UINT32_MAX) fail("node " + std::to_string(v) + " is in no subgraph");
    if (!d.partition.empty() && (d.partition.size() != d.node_count || d.partition[v] != seen_in[v])) {
      fail("partition map disagrees with subgraph node sets at node " + std::to_string(v));
    }
  }

  std::set<std::pair<NodeId, NodeId>> assigned;
  std::vector<Edge> all;
  auto claim = [&](const Edge& e) {
    if (!assigned.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      fail("edge multiply assigned: " + format_edge(e, d.weighted));
    }
    all.push_back(e);
  };
  for (const auto& sub : d.subgraphs) {
    for (const auto& e : sub.internal_edges) claim(e);
  }
  for (const auto& e : d.inter_edges) claim(e);

  std::vector<std::set<NodeId>> exits(d.subgraphs.size());
  for (const auto& sub : d.subgraphs) {
    for (const auto& e : sub.internal_edges) {
      if (!sub.contains(e.u) || !sub.contains(e.v)) {
        fail("internal edge " + format_edge(e, d.weighted) + " leaves subgraph " +
             std::to_string(sub.id));
      }
    }
  }
  for (const auto& e : d.inter_edges) {
    if (e.u >= d.node_count || e.v >= d.node_count) {
      fail("inter edge " + format_edge(e, d.weighted) + " has an endpoint out of range");
    }
    if (seen_in[e.u] == seen_in[e.v]) {
      fail("inter edge " + format_edge(e, d.weighted) + " lies inside subgraph " +
           std::to_string(seen_in[e.u]));
    }
    exits[seen_in[e.u]].insert(e.u);
    exits[seen_in[e.v]].insert(e.v);
  }
  for (const auto& sub : d.subgraphs) {
    if (!std::equal(sub.exit_nodes.begin(), sub.exit_nodes.end(), exits[sub.id].begin(),
                    exits[sub.id].end())) {
      fail("exit nodes of subgraph " + std::to_string(sub.id) +
           " differ from the endpoints of its inter edges");
    }
  }
  try {
    return Graph(d.node_count, std::move(all), d.weighted);
  } catch (const std::invalid_argument& e) {
    throw DecompositionError(e.what());
  }
}

namespace {

std::string id_list(const std::vector<NodeId>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out + "]";
}

[[noreturn]] void bad_record(std::size_t line, const std::string& what) {
  throw DecompositionError("decomposition record line " + std::to_string(line) + ": " + what);
}

std::uint64_t number_after(std::string_view line, std::string_view key, std::size_t line_no) {
  auto pos = line.find(key);
  if (pos == std::string_view::npos) bad_record(line_no, "missing " + std::string(key));
  auto digits = line.substr(pos + key.size());
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr == digits.data()) bad_record(line_no, "bad " + std::string(key));
  return value;
}

std::vector<NodeId> list_after(std::string_view line, std::string_view key, std::size_t line_no) {
  auto pos = line.find(key);
  if (pos == std::string_view::npos) bad_record(line_no, "missing " + std::string(key));
  auto rest = line.substr(pos + key.size());
  auto close = rest.find(']');
  if (rest.empty() || rest.front() != '[' || close == std::string_view::npos) {
    bad_record(line_no, "bad list after " + std::string(key));
  }
  std::vector<NodeId> out;
  auto body = rest.substr(1, close - 1);
  while (!body.empty()) {
    auto comma = body.find(',');
    auto item = body.substr(0, comma);
    NodeId v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) bad_record(line_no, "bad node id");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::string serialize_decomposition(const Decomposition& d) {
  std::ostringstream out;
  out << "decomposition nodes=" << d.node_count << " weighted=" << (d.weighted ? "yes" : "no")
      << " subgraphs=" << d.subgraphs.size() << " inter=" << d.inter_edges.size() << '\n';
  for (const auto& sub : d.subgraphs) {
    out << "subgraph " << sub.id << " nodes=" << id_list(sub.nodes)
        << " exits=" << id_list(sub.exit_nodes) << " edges=" << sub.internal_edges.size() << '\n';
    out << render_edge_lines(sub.internal_edges, d.weighted);
  }
  out << "inter\n" << render_edge_lines(d.inter_edges, d.weighted) << "end\n";
  return out.str();
}

Decomposition parse_decomposition(std::string_view text) {
  // Edge lines reuse the graph text grammar; wrap them in a graph header to parse.
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    if (nl == std::string_view::npos) bad_record(lines.size() + 1, "missing line feed");
    lines.push_back(text.substr(0, nl));
    text.remove_prefix(nl + 1);
  }
  if (lines.empty() || lines.front().rfind("decomposition ", 0) != 0) {
    bad_record(1, "missing decomposition header");
  }
  Decomposition d;
  d.node_count = number_after(lines[0], "nodes=", 1);
  d.weighted = lines[0].find("weighted=yes") != std::string_view::npos;
  const auto subgraph_count = number_after(lines[0], "subgraphs=", 1);
  const auto inter_count = number_after(lines[0], "inter=", 1);

  auto read_edges = [&](std::size_t& i, std::size_t count) {
    if (i + count > lines.size()) bad_record(i, "truncated edge list");
    // Edge lines are parsed against a throwaway header of the full node range.
    Graph scratch(d.node_count, {}, d.weighted);
    std::string block = render_graph_text(scratch);
    for (std::size_t k = 0; k < count; ++k) {
      block += lines[i + k];
      block += '\n';
    }
    std::vector<Edge> edges;
    try {
      const Graph parsed = parse_graph_text(block);
      edges.assign(parsed.edges().begin(), parsed.edges().end());
    } catch (const std::invalid_argument& e) {
      bad_record(i, e.what());
    }
    i += count;
    return edges;
  };

  std::size_t i = 1;
  for (std::uint64_t s = 0; s < subgraph_count; ++s) {
    if (i >= lines.size() || lines[i].rfind("subgraph ", 0) != 0) bad_record(i + 1, "expected subgraph");
    Subgraph sub;
    sub.id = static_cast<SubgraphId>(number_after(lines[i], "subgraph ", i + 1));
    sub.nodes = list_after(lines[i], "nodes=", i + 1);
    sub.exit_nodes = list_after(lines[i], "exits=", i + 1);
    const auto edge_count = number_after(lines[i], "edges=", i + 1);
    ++i;
    sub.internal_edges = read_edges(i, edge_count);
    d.subgraphs.push_back(std::move(sub));
  }
  if (i >= lines.size() || lines[i] != "inter") bad_record(i + 1, "expected inter");
  ++i;
  d.inter_edges = read_edges(i, inter_count);
  if (i >= lines.size() || lines[i] != "end" || i + 1 != lines.size()) bad_record(i + 1, "expected end");

  d.partition.assign(d.node_count, 0);
  for (const auto& sub : d.subgraphs) {
    for (NodeId v : sub.nodes) {
      if (v >= d.node_count) bad_record(1, "node id out of range");
      d.partition[v] = sub.id;
    }
  }
  return d;
}

}  // namespace graphdc
