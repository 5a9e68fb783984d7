#pragma once

#include <memory>
#include <string>

#include "graphdc/answer_format.hpp"
#include "graphdc/decomposition.hpp"
#include "graphdc/prompt.hpp"

namespace graphdc {

/// A sub-agent: turns one (subgraph, sub-query) pair into a raw text reply.
/// Implementations must be safe to call concurrently.
class Reasoner {
 public:
  virtual ~Reasoner() = default;
  virtual std::string name() const = 0;
  /// Throws std::invalid_argument if sq was not generated for sub.
  virtual std::string answer(const Subgraph& sub, const SubQuery& sq) = 0;
};

/// The payload a sub-query asks for, computed with classical algorithms on
/// the subgraph's internal edges: BFS components, per-terminal Dijkstra,
/// component edge/node counts, and triangle enumeration.
SubPayload solve_local(const Subgraph& sub, TaskKind task, const std::vector<NodeId>& terminals);

/// Backend that answers exactly, rendering the payload as an ANSWER line.
class ExactLocalReasoner final : public Reasoner {
 public:
  std::string name() const override { return "exact"; }
  std::string answer(const Subgraph& sub, const SubQuery& sq) override;
};

}  // namespace graphdc
