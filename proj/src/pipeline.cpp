#include "graphdc/pipeline.hpp"

#include <chrono>

#include "graphdc/parallel.hpp"
#include "graphdc/synthesis.hpp"
#include "json.hpp"

namespace graphdc {

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Must be called from inside a catch block.
std::pair<FailureKind, std::string> classify_current_exception() {
  try {
    throw;
  } catch (const ExtractionError& e) {
    return {FailureKind::Extraction, e.what()};
  } catch (const TransportError& e) {
    return {FailureKind::Transport, e.what()};
  } catch (const MalformedResponse& e) {
    return {FailureKind::Transport, e.what()};
  } catch (const std::exception& e) {
    return {FailureKind::Internal, e.what()};
  } catch (...) {
    return {FailureKind::Internal, "unknown exception"};
  }
}

const PromptTemplate& sub_template(const PipelineConfig& cfg, TaskKind task) {
  auto it = cfg.sub_templates.find(task);
  return it != cfg.sub_templates.end() ? it->second : builtin_template(task);
}

void run_stages(const Graph& g, const Query& q, const PipelineConfig& cfg, Trace& t) {
  q.validate_for(g);
  if (!cfg.sub_agent) throw std::invalid_argument("pipeline has no sub-agent backend");
  if (cfg.synthesis == SynthesisMode::Llm && !cfg.master) {
    throw std::invalid_argument("LLM synthesis requires a master chat client");
  }

  auto start = Clock::now();
  t.decomposition = cfg.splitter ? cfg.splitter(g) : split(g, cfg.max_subgraph_size);
  t.timings.split_ms = millis_since(start);

  const auto& subs = t.decomposition.subgraphs;
  t.sub_agents.resize(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    t.sub_agents[i].query = describe(subs[i], q, sub_template(cfg, q.task()), g.weighted());
  }

  start = Clock::now();
  parallel_for(subs.size(), cfg.sub_agent_concurrency, [&](std::size_t i) {
    auto& st = t.sub_agents[i];
    const auto call_start = Clock::now();
    try {
      st.raw = cfg.sub_agent->answer(subs[i], st.query);
      st.extracted = SubAnswer{subs[i].id, st.query.terminals,
                               extract(st.raw, q.task(), st.query.terminals)};
    } catch (...) {
      std::tie(st.failure, st.error) = classify_current_exception();
    }
    st.millis = millis_since(call_start);
  });
  t.timings.sub_agents_ms = millis_since(start);

  for (const auto& st : t.sub_agents) {
    if (st.failure != FailureKind::None) {
      t.failure = st.failure;
      t.error = "subgraph " + std::to_string(st.query.subgraph_id) + ": " + st.error;
      return;
    }
  }

  std::vector<SubAnswer> answers;
  answers.reserve(t.sub_agents.size());
  for (const auto& st : t.sub_agents) answers.push_back(*st.extracted);

  start = Clock::now();
  const PromptTemplate& master =
      cfg.master_template ? *cfg.master_template : builtin_master_template();
  const auto& inter = t.decomposition.inter_edges;
  t.master_prompt = render_master_prompt(q, answers, inter, g.weighted(), master);
  if (cfg.synthesis == SynthesisMode::Exact) {
    t.answer = synthesize_exact(q, answers, inter);
  } else {
    t.master_raw = cfg.master->complete(t.master_prompt);
    t.answer = extract_final_answer(t.master_raw, q.task());
  }
  t.timings.synthesis_ms = millis_since(start);
}

nlohmann::json query_json(const Query& q) {
  nlohmann::json j{{"task", to_string(q.task())}};
  if (q.source()) j["source"] = *q.source();
  if (q.target()) j["target"] = *q.target();
  return j;
}

}  // namespace

std::string to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::None: return "none";
    case FailureKind::Transport: return "transport";
    case FailureKind::Extraction: return "extraction";
    case FailureKind::Internal: return "internal";
  }
  return "internal";
}

PipelineResult run_pipeline(const Graph& g, const Query& q, const PipelineConfig& cfg) {
  PipelineResult result;
  Trace& t = result.trace;
  t.query = q;
  const auto start = Clock::now();
  try {
    run_stages(g, q, cfg, t);
  } catch (...) {
    std::tie(t.failure, t.error) = classify_current_exception();
    t.answer.reset();
  }
  if (t.failure != FailureKind::None) t.answer.reset();
  t.timings.total_ms = millis_since(start);
  result.answer = t.answer;
  return result;
}

std::string trace_to_json(const Trace& t) {
  using nlohmann::json;
  json subs = json::array();
  for (const auto& st : t.sub_agents) {
    json s{
        {"subgraph", st.query.subgraph_id},
        {"terminals", st.query.terminals},
        {"sub_query", st.query.text},
        {"raw_response", st.raw},
        {"extracted", st.extracted ? json(format_payload(st.extracted->payload)) : json(nullptr)},
        {"failure", to_string(st.failure)},
        {"millis", st.millis},
    };
    if (!st.error.empty()) s["error"] = st.error;
    subs.push_back(std::move(s));
  }
  json j{
      {"instance_id", t.instance_id},
      {"query", query_json(t.query)},
      {"decomposition", serialize_decomposition(t.decomposition)},
      {"sub_agents", std::move(subs)},
      {"master_prompt", t.master_prompt},
      {"master_response", t.master_raw},
      {"answer", t.answer ? json(to_string(*t.answer)) : json(nullptr)},
      {"failure", to_string(t.failure)},
      {"error", t.error},
      {"timings_ms",
       {{"split", t.timings.split_ms},
        {"sub_agents", t.timings.sub_agents_ms},
        {"synthesis", t.timings.synthesis_ms},
        {"total", t.timings.total_ms}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace graphdc
