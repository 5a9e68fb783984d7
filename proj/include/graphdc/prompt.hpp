#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphdc/decomposition.hpp"
#include "graphdc/graph.hpp"

namespace graphdc {

/// A prompt template asset. Sub-query templates carry a task; the master
/// template has none. Placeholders are written {NAME} with NAME in [A-Z_].
struct PromptTemplate {
  std::string name;  // "connectivity", ..., or "master"
  std::optional<TaskKind> task;
  int version = 1;
  std::string preamble;
  std::string instruction;
};

/// Parses the asset format (see docs/FORMATS.md). Throws std::invalid_argument.
PromptTemplate parse_template(std::string_view text);
PromptTemplate load_template(const std::filesystem::path& path);

/// Templates compiled in from assets/templates.
const PromptTemplate& builtin_template(TaskKind task);
const PromptTemplate& builtin_master_template();

/// Replaces every {NAME} with its binding. Throws std::invalid_argument for a
/// placeholder without a binding.
std::string render_placeholders(std::string_view text,
                                const std::map<std::string, std::string>& bindings);

/// Names of {NAME} tokens still present in text.
std::vector<std::string> unexpanded_placeholders(std::string_view text);

/// Header sentence naming the subgraph's nodes, followed by its internal
/// edges formatted exactly as render_graph_text formats edge lines.
std::string render_subgraph_text(const Subgraph& sub, bool weighted);

/// "[1,4,9]"
std::string node_list(const std::vector<NodeId>& nodes);

/// Task-aware local reasoning instruction for one subgraph.
struct SubQuery {
  SubgraphId subgraph_id = 0;
  TaskKind task = TaskKind::Cycle;
  std::vector<NodeId> terminals;  // exit nodes plus query endpoints inside, ascending
  std::string text;

  bool operator==(const SubQuery&) const = default;
};

/// The question describer. Terminals are the subgraph's exit nodes together
/// with whichever query endpoints it contains. The instruction asks for the
/// local summary the master needs for the task:
///   connectivity    grouping of terminals into local components
///   shortest_path   distance for every terminal pair
///   cycle           local cycle verdict plus grouping of exit nodes
///   triangle_count  local triangle count plus edges between exit nodes
/// Throws std::invalid_argument if the template's task differs from q's.
SubQuery describe(const Subgraph& sub, const Query& q, const PromptTemplate& tmpl, bool weighted);

/// The terminal pairs a shortest-path sub-query asks about: all (a, b), a < b.
std::vector<std::pair<NodeId, NodeId>> requested_pairs(const std::vector<NodeId>& terminals);

/// Natural-language form of the global question.
std::string question_text(const Query& q);

}  // namespace graphdc
