#include "graphdc/graph_text.hpp"

#include <charconv>
#include <stdexcept>
#include <vector>

namespace graphdc {

namespace {

std::string header(std::size_t n, bool weighted) {
  std::string out = "In an undirected graph with " + std::to_string(n) + " nodes";
  if (n > 0) out += " numbered from 0 to " + std::to_string(n - 1);
  if (weighted) {
    out += ", (i,j,w) means that node i and node j are connected with an undirected edge of "
           "weight w.";
  } else {
    out += ", (i,j) means that node i and node j are connected with an undirected edge.";
  }
  out += " The edges are:";
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    if (nl == std::string_view::npos) {
      throw std::invalid_argument("graph text must end with a line feed");
    }
    lines.push_back(text.substr(0, nl));
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::uint64_t parse_uint(std::string_view s, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() ||
      (s.size() > 1 && s.front() == '0')) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": bad number '" +
                                std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::string format_edge(const Edge& e, bool weighted) {
  std::string out = "(" + std::to_string(e.u) + "," + std::to_string(e.v);
  if (weighted) out += "," + std::to_string(e.w);
  out += ")";
  return out;
}

std::string render_edge_lines(std::span<const Edge> edges, bool weighted) {
  std::string out;
  for (const auto& e : edges) {
    out += format_edge(e, weighted);
    out += '\n';
  }
  return out;
}

std::string render_graph_text(const Graph& g) {
  return header(g.node_count(), g.weighted()) + "\n" + render_edge_lines(g.edges(), g.weighted());
}

Graph parse_graph_text(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw std::invalid_argument("graph text is empty");

  const std::string_view head = lines.front();
  constexpr std::string_view kPrefix = "In an undirected graph with ";
  if (head.substr(0, kPrefix.size()) != kPrefix) {
    throw std::invalid_argument("line 1: not a graph header");
  }
  auto rest = head.substr(kPrefix.size());
  const auto space = rest.find(' ');
  if (space == std::string_view::npos) throw std::invalid_argument("line 1: missing node count");
  const auto n = static_cast<std::size_t>(parse_uint(rest.substr(0, space), 1));
  const bool weighted = head.find("(i,j,w)") != std::string_view::npos;
  if (head != header(n, weighted)) throw std::invalid_argument("line 1: malformed header");

  std::vector<Edge> edges;
  edges.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    if (line.size() < 5 || line.front() != '(' || line.back() != ')') {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected an edge");
    }
    line = line.substr(1, line.size() - 2);
    std::vector<std::uint64_t> fields;
    while (true) {
      auto comma = line.find(',');
      fields.push_back(parse_uint(line.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (fields.size() != (weighted ? 3u : 2u)) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": wrong field count");
    }
    if (fields[0] >= fields[1]) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": endpoints must be ascending");
    }
    Edge e{static_cast<NodeId>(fields[0]), static_cast<NodeId>(fields[1]),
           weighted ? static_cast<Weight>(fields[2]) : Weight{1}};
    if (!edges.empty() && !endpoints_less(edges.back(), e)) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": edges out of order");
    }
    edges.push_back(e);
  }
  return Graph(n, std::move(edges), weighted);
}

}  // namespace graphdc
