#pragma once

// Structured sub-answers and the single-line ANSWER grammar shared by the
// sub-agent prompts, the extractor, and the master prompt.
//
//   line      := "ANSWER:" field (";" field)*
//   field     := key "=" value | bare-verdict
//   value     := integer | word | "[" [value ("," value)*] "]" | "(" value ("," value)* ")"
//
// Per task (sub-agents):
//   connectivity    ANSWER: connected_groups=[[0,3],[7]]
//   shortest_path   ANSWER: distances=[(0,3,5),(0,7,unreachable)]
//   cycle           ANSWER: cycle=no; components=[[2,4],[9]]
//   triangle_count  ANSWER: triangles=4; exit_edges=[(2,4)]
// Final answers (master):
//   ANSWER: yes | ANSWER: no | ANSWER: distance=7 | ANSWER: distance=unreachable
//   ANSWER: triangles=12

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "graphdc/graph.hpp"

namespace graphdc {

/// Partition of terminals into groups; canonical when each group is sorted
/// and groups are ordered by their first member.
struct ComponentGrouping {
  std::vector<std::vector<NodeId>> groups;

  void canonicalize();
  bool operator==(const ComponentGrouping&) const = default;
};

using NodePair = std::pair<NodeId, NodeId>;  // first < second

/// Terminal-pair distances inside one subgraph, keyed by ordered pair.
struct DistanceTable {
  std::map<NodePair, Distance> entries;

  /// Symmetric lookup; throws std::out_of_range for a missing pair.
  Distance at(NodeId a, NodeId b) const;
  bool operator==(const DistanceTable&) const = default;
};

struct CycleSummary {
  bool has_intra_cycle = false;
  ComponentGrouping exit_components;
  bool operator==(const CycleSummary&) const = default;
};

struct TriangleSummary {
  std::uint64_t intra_count = 0;
  std::vector<NodePair> exit_induced_edges;  // ascending
  bool operator==(const TriangleSummary&) const = default;
};

using SubPayload = std::variant<ComponentGrouping, DistanceTable, CycleSummary, TriangleSummary>;

struct SubAnswer {
  SubgraphId subgraph_id = 0;
  std::vector<NodeId> terminals;  // ascending
  SubPayload payload;
  bool operator==(const SubAnswer&) const = default;
};

TaskKind payload_task(const SubPayload& payload);

/// Raised when a raw response has no parsable ANSWER line or the parsed
/// payload breaks its invariants. Carries the offending raw text.
class ExtractionError : public std::runtime_error {
 public:
  ExtractionError(const std::string& what, std::string raw)
      : std::runtime_error(what), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

/// The payload part of an ANSWER line, e.g. "cycle=no; components=[[2,4]]".
std::string format_payload(const SubPayload& payload);
std::string format_answer_line(const SubPayload& payload);
std::string format_answer_line(const Answer& answer);

/// Checks the payload against the subgraph's terminals: groupings are
/// disjoint and cover exactly the terminals; distance tables hold every
/// terminal pair once with finite entries >= 1; exit edges join two distinct
/// terminals. Throws ExtractionError (with empty raw text) on violation.
void validate_payload(const SubPayload& payload, TaskKind task, std::span<const NodeId> terminals);

/// The extractor: takes the last line that parses under the task's ANSWER
/// grammar, then validates it against the terminals.
SubPayload extract(std::string_view raw, TaskKind task, std::span<const NodeId> terminals);

/// Extracts a final answer (master reply) for the task.
Answer extract_final_answer(std::string_view raw, TaskKind task);

/// Prompt text describing the required final line.
std::string answer_format_instructions(TaskKind task);
std::string final_answer_format_instructions(TaskKind task);

}  // namespace graphdc
