#pragma once

#include <span>
#include <string>
#include <string_view>

#include "graphdc/graph.hpp"

namespace graphdc {

/// "(u,v)" or "(u,v,w)".
std::string format_edge(const Edge& e, bool weighted);

/// One formatted edge per line, LF-terminated, in the order given.
std::string render_edge_lines(std::span<const Edge> edges, bool weighted);

/// Line-oriented natural-language serialization: one header sentence giving
/// the node range and edge notation, then one edge per line in ascending
/// (u, v) order. ASCII, LF line endings. parse_graph_text inverts it exactly.
std::string render_graph_text(const Graph& g);

/// Strict inverse of render_graph_text. Throws std::invalid_argument naming
/// the offending line on any deviation from the rendered form.
Graph parse_graph_text(std::string_view text);

}  // namespace graphdc
