#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphdc/answer_format.hpp"
#include "graphdc/chat_client.hpp"
#include "graphdc/decomposition.hpp"
#include "graphdc/prompt.hpp"
#include "graphdc/reasoner.hpp"

namespace graphdc {

enum class SynthesisMode { Exact, Llm };

struct PipelineConfig {
  std::size_t max_subgraph_size = kDefaultMaxSubgraphSize;
  /// Replaces split(g, max_subgraph_size) when set.
  Splitter splitter;
  std::shared_ptr<Reasoner> sub_agent = std::make_shared<ExactLocalReasoner>();
  /// Sub-agent calls in flight for one instance.
  std::size_t sub_agent_concurrency = 1;
  SynthesisMode synthesis = SynthesisMode::Exact;
  /// Required for SynthesisMode::Llm.
  std::shared_ptr<ChatClient> master;
  /// Overrides for the compiled-in templates.
  std::map<TaskKind, PromptTemplate> sub_templates;
  std::optional<PromptTemplate> master_template;
};

/// Why an instance produced no answer. Transport covers network failures
/// and malformed chat replies; Extraction covers replies without a valid
/// ANSWER line; Internal is anything else and indicates a bug or bad input.
enum class FailureKind { None, Transport, Extraction, Internal };

std::string to_string(FailureKind kind);

struct SubAgentTrace {
  SubQuery query;
  std::string raw;
  std::optional<SubAnswer> extracted;
  FailureKind failure = FailureKind::None;
  std::string error;
  double millis = 0;
};

struct Timings {
  double split_ms = 0;
  double sub_agents_ms = 0;
  double synthesis_ms = 0;
  double total_ms = 0;
};

struct Trace {
  Query query = Query::cycle();
  std::string instance_id;
  Decomposition decomposition;
  std::vector<SubAgentTrace> sub_agents;
  std::string master_prompt;
  std::string master_raw;  // empty for exact synthesis
  std::optional<Answer> answer;
  FailureKind failure = FailureKind::None;
  std::string error;
  Timings timings;
};

struct PipelineResult {
  std::optional<Answer> answer;
  Trace trace;

  FailureKind failure() const { return trace.failure; }
};

/// split -> describe -> answer -> extract -> synthesize. Never throws:
/// every error becomes a failure in the returned trace. The master prompt is
/// rendered in both synthesis modes so traces can be audited uniformly.
PipelineResult run_pipeline(const Graph& g, const Query& q, const PipelineConfig& cfg);

/// Pretty-printed JSON document; see docs/FORMATS.md.
std::string trace_to_json(const Trace& trace);

}  // namespace graphdc
