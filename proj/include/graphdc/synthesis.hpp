#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphdc/answer_format.hpp"
#include "graphdc/chat_client.hpp"
#include "graphdc/prompt.hpp"

namespace graphdc {

class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A subgraph's answer is absent, or a node the synthesis needs is not a
/// terminal of any sub-answer.
class MissingSubAnswer : public SynthesisError {
 public:
  using SynthesisError::SynthesisError;
};

class PayloadKindMismatch : public SynthesisError {
 public:
  using SynthesisError::SynthesisError;
};

struct BoundaryEdge {
  enum class Kind { Local, Inter };
  NodeId a = 0;
  NodeId b = 0;
  std::uint64_t weight = 0;
  Kind kind = Kind::Local;
  SubgraphId subgraph = 0;  // owner of a local edge
};

/// Condensed graph over all terminals. Local edges join terminals of one
/// subgraph (weight = local distance, or 0 between members of a component
/// group); inter edges are the original cross-subgraph edges.
struct BoundaryGraph {
  std::map<NodeId, SubgraphId> owner;  // terminal -> subgraph
  std::vector<BoundaryEdge> edges;
};

/// Checks that sub-answers are consistent with the query and with each
/// other, then builds the boundary graph. Component groupings become
/// zero-weight chains; distance tables become weighted local edges
/// (unreachable entries skipped). Cycle and triangle payloads contribute no
/// local edges.
/// Throws MissingSubAnswer, PayloadKindMismatch, or SynthesisError.
BoundaryGraph build_boundary_graph(const Query& q, std::span<const SubAnswer> subanswers,
                                   std::span<const Edge> inter_edges);

struct BoundaryPath {
  Distance length = Distance::unreachable();
  std::vector<BoundaryEdge> edges;  // in walk order from source; a/b oriented along the walk
};

BoundaryPath boundary_shortest_path(const BoundaryGraph& bg, NodeId source, NodeId target);

/// Exact composition of the sub-answers with the inter edges:
///   connectivity    union-find over terminals
///   shortest_path   Dijkstra on the boundary graph
///   cycle           any local cycle, else union-find cycle detection on the
///                   multigraph of (subgraph, exit component) supernodes
///   triangle_count  local counts + exit-edge triangles closed by a common
///                   inter neighbor + triangles of three inter edges
Answer synthesize_exact(const Query& q, std::span<const SubAnswer> subanswers,
                        std::span<const Edge> inter_edges);

/// Master prompt: the question, each sub-answer's payload line, and the raw
/// inter-edge list. Never includes the subgraphs' edges.
std::string render_master_prompt(const Query& q, std::span<const SubAnswer> subanswers,
                                 std::span<const Edge> inter_edges, bool weighted,
                                 const PromptTemplate& tmpl = builtin_master_template());

struct MasterReply {
  std::string prompt;
  std::string raw;
  Answer answer;
};

/// Master agent backed by a chat model. Throws TransportError,
/// MalformedResponse, or ExtractionError.
MasterReply synthesize_llm(ChatClient& client, const Query& q,
                           std::span<const SubAnswer> subanswers,
                           std::span<const Edge> inter_edges, bool weighted,
                           const PromptTemplate& tmpl = builtin_master_template());

}  // namespace graphdc
