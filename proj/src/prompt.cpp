#include "graphdc/prompt.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "builtin_templates.hpp"
#include "graphdc/answer_format.hpp"
#include "graphdc/graph_text.hpp"

namespace graphdc {

namespace {

bool is_placeholder_char(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }

// Calls f(name, begin, end) for each {NAME} token.
template <typename F>
void for_each_placeholder(std::string_view text, F&& f) {
  std::size_t pos = 0;
  while ((pos = text.find('{', pos)) != std::string_view::npos) {
    std::size_t end = pos + 1;
    while (end < text.size() && is_placeholder_char(text[end])) ++end;
    if (end < text.size() && text[end] == '}' && end > pos + 1) {
      f(text.substr(pos + 1, end - pos - 1), pos, end + 1);
      pos = end + 1;
    } else {
      ++pos;
    }
  }
}

std::string join_pairs(const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ", ";
    out += "(" + std::to_string(pairs[i].first) + "," + std::to_string(pairs[i].second) + ")";
  }
  return out;
}

std::string connectivity_details(const Subgraph& sub, const Query& q,
                                 const std::vector<NodeId>& terminals) {
  if (terminals.empty()) return "This subgraph has no terminal nodes; report connected_groups=[].";
  std::string out = "Group the terminal nodes " + node_list(terminals) +
                    " by connectivity: two terminals belong to the same group exactly when a path "
                    "inside this subgraph joins them.";
  const NodeId s = *q.source();
  const NodeId t = *q.target();
  if (sub.contains(s) && sub.contains(t)) {
    out += " Nodes " + std::to_string(s) + " and " + std::to_string(t) +
           " are the endpoints of the original question; in particular, determine whether node " +
           std::to_string(s) + " can reach node " + std::to_string(t) + " inside this subgraph.";
  }
  for (NodeId e : {s, t}) {
    if (!sub.contains(e)) continue;
    if (sub.exit_nodes.empty()) {
      out += " Node " + std::to_string(e) +
             " is an endpoint of the original question; this subgraph has no exit nodes.";
    } else {
      out += " Node " + std::to_string(e) +
             " is an endpoint of the original question; determine whether node " +
             std::to_string(e) + " can reach an exit node of subgraph " + std::to_string(sub.id) +
             ", and which ones.";
    }
  }
  return out;
}

std::string shortest_path_details(const Subgraph& sub, const Query& q,
                                  const std::vector<NodeId>& terminals) {
  const auto pairs = requested_pairs(terminals);
  std::string out;
  if (pairs.empty()) {
    out = "There are no terminal pairs to measure; report distances=[].";
  } else {
    out = "Compute the shortest distance inside this subgraph for each of the following " +
          std::to_string(pairs.size()) + " terminal pair(s): " + join_pairs(pairs) + ".";
  }
  for (NodeId e : {*q.source(), *q.target()}) {
    if (sub.contains(e)) {
      out += " Node " + std::to_string(e) + " is an endpoint of the original question.";
    }
  }
  return out;
}

std::string cycle_details(const Subgraph& sub) {
  std::string out = "Determine whether this subgraph contains a cycle.";
  if (sub.exit_nodes.empty()) {
    out += " It has no exit nodes, so report components=[].";
  } else {
    out += " Also group the exit nodes " + node_list(sub.exit_nodes) +
           " by connectivity: two exit nodes belong to the same group exactly when a path inside "
           "this subgraph joins them.";
  }
  return out;
}

std::string triangle_details(const Subgraph& sub) {
  std::string out = "Count the triangles whose three nodes all belong to this subgraph.";
  if (sub.exit_nodes.size() < 2) {
    out += " There are fewer than two exit nodes, so report exit_edges=[].";
  } else {
    out += " Also list every edge of this subgraph that joins two of the exit nodes " +
           node_list(sub.exit_nodes) + ".";
  }
  return out;
}

}  // namespace

PromptTemplate parse_template(std::string_view text) {
  PromptTemplate tmpl;
  std::string* section = nullptr;
  bool have_name = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "[preamble]") {
      section = &tmpl.preamble;
      continue;
    }
    if (line == "[instruction]") {
      section = &tmpl.instruction;
      continue;
    }
    if (section) {
      if (!section->empty() || !line.empty()) *section += line + "\n";
      continue;
    }
    if (line.rfind("# version:", 0) == 0) {
      tmpl.version = std::stoi(line.substr(10));
    } else if (line.rfind("task:", 0) == 0) {
      auto name = line.substr(5);
      name.erase(0, name.find_first_not_of(' '));
      tmpl.name = name;
      if (name != "master") tmpl.task = parse_task(name);
      have_name = true;
    } else if (!line.empty() && line.front() != '#') {
      throw std::invalid_argument("template: unexpected line '" + line + "'");
    }
  }
  if (!have_name) throw std::invalid_argument("template: missing task line");
  if (tmpl.instruction.empty()) throw std::invalid_argument("template: missing [instruction]");
  for (auto* s : {&tmpl.preamble, &tmpl.instruction}) {
    while (!s->empty() && s->back() == '\n') s->pop_back();
  }
  return tmpl;
}

PromptTemplate load_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open template " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_template(buf.str());
}

const PromptTemplate& builtin_template(TaskKind task) {
  static const std::map<TaskKind, PromptTemplate> templates = [] {
    std::map<TaskKind, PromptTemplate> out;
    for (auto t : kAllTasks) out.emplace(t, parse_template(builtin_template_source(to_string(t))));
    return out;
  }();
  return templates.at(task);
}

const PromptTemplate& builtin_master_template() {
  static const PromptTemplate master = parse_template(builtin_template_source("master"));
  return master;
}

std::string render_placeholders(std::string_view text,
                                const std::map<std::string, std::string>& bindings) {
  std::string out;
  std::size_t copied = 0;
  for_each_placeholder(text, [&](std::string_view name, std::size_t begin, std::size_t end) {
    auto it = bindings.find(std::string(name));
    if (it == bindings.end()) {
      throw std::invalid_argument("unbound placeholder {" + std::string(name) + "}");
    }
    out.append(text.substr(copied, begin - copied));
    out += it->second;
    copied = end;
  });
  out.append(text.substr(copied));
  return out;
}

std::vector<std::string> unexpanded_placeholders(std::string_view text) {
  std::vector<std::string> names;
  for_each_placeholder(text, [&](std::string_view name, std::size_t, std::size_t) {
    names.emplace_back(name);
  });
  return names;
}

std::string node_list(const std::vector<NodeId>& nodes) {
  std::string out = "[";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(nodes[i]);
  }
  return out + "]";
}

std::string render_subgraph_text(const Subgraph& sub, bool weighted) {
  std::string out = "In an undirected subgraph with nodes " + node_list(sub.nodes);
  out += weighted ? ", (i,j,w) means that node i and node j are connected with an undirected "
                    "edge of weight w."
                  : ", (i,j) means that node i and node j are connected with an undirected edge.";
  out += " The edges are:\n";
  return out + render_edge_lines(sub.internal_edges, weighted);
}

std::vector<std::pair<NodeId, NodeId>> requested_pairs(const std::vector<NodeId>& terminals) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    for (std::size_t j = i + 1; j < terminals.size(); ++j) {
      pairs.emplace_back(terminals[i], terminals[j]);
    }
  }
  return pairs;
}

SubQuery describe(const Subgraph& sub, const Query& q, const PromptTemplate& tmpl, bool weighted) {
  if (tmpl.task != q.task()) {
    throw std::invalid_argument("template '" + tmpl.name + "' does not match task " +
                                to_string(q.task()));
  }
  SubQuery sq;
  sq.subgraph_id = sub.id;
  sq.task = q.task();
  sq.terminals = sub.exit_nodes;
  for (auto endpoint : {q.source(), q.target()}) {
    if (endpoint && sub.contains(*endpoint)) sq.terminals.push_back(*endpoint);
  }
  std::sort(sq.terminals.begin(), sq.terminals.end());
  sq.terminals.erase(std::unique(sq.terminals.begin(), sq.terminals.end()), sq.terminals.end());

  std::string details;
  switch (q.task()) {
    case TaskKind::Connectivity:
      details = connectivity_details(sub, q, sq.terminals);
      break;
    case TaskKind::ShortestPath:
      details = shortest_path_details(sub, q, sq.terminals);
      break;
    case TaskKind::Cycle:
      details = cycle_details(sub);
      break;
    case TaskKind::TriangleCount:
      details = triangle_details(sub);
      break;
  }
  const std::map<std::string, std::string> bindings{
      {"SUBGRAPH_ID", std::to_string(sub.id)},
      {"GRAPH", render_subgraph_text(sub, weighted)},
      {"EXIT_NODES", node_list(sub.exit_nodes)},
      {"TERMINALS", node_list(sq.terminals)},
      {"TASK_DETAILS", details},
      {"ANSWER_FORMAT", answer_format_instructions(q.task())},
  };
  sq.text = render_placeholders(tmpl.preamble, bindings) + "\n\n" +
            render_placeholders(tmpl.instruction, bindings) + "\n";
  return sq;
}

std::string question_text(const Query& q) {
  switch (q.task()) {
    case TaskKind::Connectivity:
      return "Is there a path between node " + std::to_string(*q.source()) + " and node " +
             std::to_string(*q.target()) + "?";
    case TaskKind::ShortestPath:
      return "What is the length of the shortest path from node " + std::to_string(*q.source()) +
             " to node " + std::to_string(*q.target()) + "?";
    case TaskKind::Cycle:
      return "Is there a cycle in this graph?";
    case TaskKind::TriangleCount:
      return "How many triangles are in this graph?";
  }
  return {};
}

}  // namespace graphdc
