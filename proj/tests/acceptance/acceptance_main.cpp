// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "graphdc/bench.hpp"
#include "graphdc/decomposition.hpp"
#include "graphdc/graph_text.hpp"
#include "graphdc/oracle.hpp"
#include "graphdc/pipeline.hpp"
#include "graphdc/reasoner.hpp"
#include "httplib.h"
#include "support/fixtures.hpp"
#include "support/reference_oracles.hpp"

using namespace graphdc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Exact backend plus exact synthesis reproduce the oracle on 1000
//    generated instances per task, in under two minutes.
Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::string detail;
  std::size_t mismatches = 0, total = 0;
  for (TaskKind task : kAllTasks) {
    const auto records = generate_dataset(task, 200, 2024);
    const auto result = run_eval(records, EvalOptions{});
    const BandTally all = result.report.overall();
    mismatches += all.total - all.correct;
    total += all.total;
    detail += fmt("%s %zu/%zu; ", to_string(task).c_str(), all.correct, all.total);
  }
  const double secs = seconds_since(start);
  detail += fmt("%.1f s", secs);
  return {total == 4000 && mismatches == 0 && secs < 120.0, detail};
}

// 2. reconstruct(split(g, k)) == g for 10,000 graphs, each at every k.
Outcome reconstruction_identity() {
  const auto start = Clock::now();
  constexpr double kDensities[] = {0.5, 1.0, 1.5, 2.5, 4.0};
  std::size_t failures = 0, checks = 0;
  for (std::size_t i = 0; i < 10000; ++i) {
    const Graph g = gen_random_graph(kBands[i % kBandCount], kDensities[(i / kBandCount) % 5],
                                     i % 3 == 0, mix_seed(31337, i));
    for (std::size_t k : {5u, 10u, 25u, 50u}) {
      ++checks;
      try {
        if (!(reconstruct(split(g, k)) == g)) ++failures;
      } catch (const std::exception&) {
        ++failures;
      }
    }
  }
  const double secs = seconds_since(start);
  return {failures == 0 && secs < 60.0,
          fmt("%zu failures in %zu splits, %.1f s", failures, checks, secs)};
}

// 3. Modularity agrees with a double-loop evaluation to 1e-12; two disjoint
//    triangles score exactly 0.5.
Outcome modularity_correctness() {
  Rng rng(99);
  double worst = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::size_t n = rng.between(2, 100);
    const std::size_t m = std::max<std::size_t>(1, rng.between(1, 3 * n));
    const Graph g = testing::random_graph(rng, n, m, false);
    std::vector<SubgraphId> part(n);
    if (i % 4 == 0) {
      part = greedy_modularity_communities(g);
    } else {
      const std::size_t k = rng.between(1, n);
      for (auto& p : part) p = static_cast<SubgraphId>(rng.below(k));
    }
    worst = std::max(worst, std::abs(modularity(g, part) - ref::modularity_double_loop(g, part)));
  }
  const Graph k3k3(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  const double q = modularity(k3k3, {0, 0, 0, 1, 1, 1});
  return {worst <= 1e-12 && q == 0.5, fmt("max |diff| = %.3g, Q(K3+K3) = %.17g", worst, q)};
}

// 4. Equal band counts, balanced cycle labels, reachable shortest-path pairs,
//    and mean edge counts within 10% of the reference.
Outcome dataset_protocol() {
  bool ok = true;
  std::string detail;
  const std::pair<TaskKind, std::optional<double>> tasks[] = {
      {TaskKind::Connectivity, kTargetMeanEdgesConnectivity},
      {TaskKind::Cycle, kTargetMeanEdgesCycle},
      {TaskKind::ShortestPath, kTargetMeanEdgesShortestPath},
      {TaskKind::TriangleCount, std::nullopt},
  };
  for (const auto& [task, target] : tasks) {
    const auto records = generate_dataset(task, 200, 4242);
    std::array<std::size_t, kBandCount> counts{};
    std::array<long, kBandCount> balance{};
    double edges = 0;
    for (const auto& r : records) {
      ++counts[r.spec.band];
      ok &= band_of(r.graph.node_count()) == r.spec.band;
      edges += static_cast<double>(r.graph.edge_count());
      if (task == TaskKind::Cycle) balance[r.spec.band] += std::get<YesNo>(r.ground_truth).value ? 1 : -1;
      if (task == TaskKind::ShortestPath) ok &= std::get<Distance>(r.ground_truth).reachable();
    }
    for (auto c : counts) ok &= c == 200;
    for (auto b : balance) ok &= std::abs(b) <= 1;
    const double mean = edges / static_cast<double>(records.size());
    if (target) {
      const double rel = std::abs(mean - *target) / *target;
      ok &= rel <= 0.10;
      detail += fmt("%s mean %.2f vs %.2f (%+.1f%%); ", to_string(task).c_str(), mean, *target,
                    100.0 * (mean - *target) / *target);
    } else {
      detail += fmt("%s mean %.2f; ", to_string(task).c_str(), mean);
    }
  }
  detail += "bands 200 each, cycle labels balanced, all pairs reachable";
  return {ok, detail};
}

// 5. An always-yes master over a balanced cycle dataset scores 50% +/- 2%
//    in every band.
Outcome always_yes_baseline() {
  const auto records = generate_dataset(TaskKind::Cycle, 500, 555);
  auto [client, transport] = testing::scripted_client([](const std::string&, int) {
    return HttpResponse{200, testing::chat_reply_body("ANSWER: yes")};
  });
  EvalOptions opts;
  opts.pipeline.synthesis = SynthesisMode::Llm;
  opts.pipeline.master = client;
  opts.workers = 2;
  const auto result = run_eval(records, opts);
  bool ok = true;
  std::string detail;
  for (std::size_t b = 0; b < kBandCount; ++b) {
    const auto& t = result.report.bands[b];
    ok &= t.total >= 500 && std::abs(t.accuracy() - 0.5) <= 0.02;
    ok &= t.transport_failures + t.extraction_failures + t.internal_failures == 0;
    detail += fmt("%s %.1f%%; ", band_label(b).c_str(), 100.0 * t.accuracy());
  }
  detail += fmt("%zu master calls", static_cast<std::size_t>(transport->calls()));
  return {ok, detail};
}

// 6. The planted two-cluster graph splits along its clusters and
//    Connectivity(27, 97) is answered through the exits alone.
Outcome case_study() {
  const auto f = testing::two_cluster_fixture();
  const Decomposition d = split(f.graph, 60);
  const bool clusters = d.partition == f.planted && d.subgraphs.size() == 2;
  PipelineConfig cfg;
  cfg.max_subgraph_size = 60;
  const auto r = run_pipeline(f.graph, Query::connectivity(27, 97), cfg);
  const bool yes = r.failure() == FailureKind::None && r.answer == Answer{YesNo{true}};
  std::size_t leaked = 0, intra = 0;
  for (const auto& e : f.graph.edges()) {
    if (f.planted[e.u] != f.planted[e.v]) continue;
    ++intra;
    if (r.trace.master_prompt.find(format_edge(e, false)) != std::string::npos) ++leaked;
  }
  return {clusters && yes && leaked == 0,
          fmt("planted split %s, answer %s, %zu/%zu intra-cluster edges in master prompt",
              clusters ? "recovered" : "MISSED",
              r.answer ? to_string(*r.answer).c_str() : "none", leaked, intra)};
}

// 7. Forests per subgraph joined by random inter edges: the contraction
//    verdict matches the oracle on 10,000 instances.
Outcome cycle_contraction_fuzz() {
  std::size_t wrong = 0, failed = 0, yes = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto inst = testing::forest_instance(mix_seed(7007, i));
    PipelineConfig cfg;
    cfg.splitter = [&](const Graph& g) { return decompose_by_partition(g, inst.partition); };
    const auto r = run_pipeline(inst.graph, Query::cycle(), cfg);
    const Answer truth{YesNo{ref::has_cycle_dfs(inst.graph)}};
    if (r.failure() != FailureKind::None) ++failed;
    else if (r.answer != truth) ++wrong;
    yes += std::get<YesNo>(truth).value ? 1 : 0;
  }
  return {wrong == 0 && failed == 0,
          fmt("%zu wrong, %zu failures, %zu/10000 cyclic", wrong, failed, yes)};
}

// 8. A local chat-completions stub drives the LLM path end to end; one
//    malformed reply is scored incorrect without stopping the run.
Outcome llm_integration() {
  const auto records = generate_dataset(TaskKind::Connectivity, 4, 808);

  // Exact pre-pass: the correct reply to every prompt the run will send.
  std::map<std::string, std::string> replies;
  std::string poisoned;
  ExactLocalReasoner exact;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto run = run_pipeline(r.graph, r.query, PipelineConfig{});
    if (!run.answer) return {false, "exact pre-pass failed on " + r.id};
    const auto& subs = run.trace.decomposition.subgraphs;
    for (std::size_t s = 0; s < subs.size(); ++s) {
      replies[run.trace.sub_agents[s].query.text] =
          "Reasoning omitted.\n" + exact.answer(subs[s], run.trace.sub_agents[s].query);
    }
    replies[run.trace.master_prompt] = "ANSWER: " + to_string(*run.answer);
    if (i == 7) poisoned = run.trace.master_prompt;
  }

  httplib::Server server;
  std::mutex mutex;
  std::size_t served = 0, unknown = 0, bad_auth = 0;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    const std::string msg = testing::user_message_of(req.body);
    std::lock_guard lock(mutex);
    ++served;
    if (req.get_header_value("Authorization") != "Bearer acceptance-key") ++bad_auth;
    if (msg == poisoned) {
      res.set_content("{\"choices\": [{\"message\": ", "application/json");
      return;
    }
    auto it = replies.find(msg);
    if (it == replies.end()) ++unknown;
    res.set_content(testing::chat_reply_body(it == replies.end() ? "ANSWER: ?" : it->second),
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  LlmConfig config;
  config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  config.api_key_env = "GRAPHDC_ACCEPTANCE_KEY";
  config.backoff_initial = std::chrono::milliseconds(1);
  config.max_retries = 1;
  ::setenv("GRAPHDC_ACCEPTANCE_KEY", "acceptance-key", 1);
  auto client = ChatClient::from_config(config);

  const auto out_dir = std::filesystem::temp_directory_path() / "graphdc_acceptance_llm";
  std::filesystem::remove_all(out_dir);
  EvalOptions opts;
  opts.pipeline.sub_agent = std::make_shared<LlmChatReasoner>(client);
  opts.pipeline.synthesis = SynthesisMode::Llm;
  opts.pipeline.master = client;
  opts.pipeline.sub_agent_concurrency = 2;
  opts.workers = 2;
  opts.backend_name = "llm";
  opts.synthesis_name = "llm";
  opts.out_dir = out_dir;
  const auto result = run_eval(records, opts);
  server.stop();
  worker.join();

  const BandTally all = result.report.overall();
  const auto& bad = result.outcomes[7];
  bool per_band = true;
  for (const auto& b : result.report.bands) per_band &= b.total == 4;
  const bool files = std::filesystem::exists(out_dir / "report.txt") &&
                     std::filesystem::exists(out_dir / "results.jsonl") &&
                     std::filesystem::exists(out_dir / "traces" / (bad.id + ".json"));
  const bool ok = per_band && files && unknown == 0 && bad_auth == 0 && !bad.correct &&
                  bad.failure == FailureKind::Transport && all.correct == records.size() - 1 &&
                  all.transport_failures == 1 && all.extraction_failures == 0 &&
                  all.internal_failures == 0;
  std::filesystem::remove_all(out_dir);
  return {ok, fmt("%zu/%zu correct, malformed reply on %s scored as %s failure, %zu requests "
                  "served, %zu unknown prompts",
                  all.correct, all.total, bad.id.c_str(), to_string(bad.failure).c_str(), served,
                  unknown)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"AC1 oracle equivalence", oracle_equivalence},
      {"AC2 reconstruction identity", reconstruction_identity},
      {"AC3 modularity correctness", modularity_correctness},
      {"AC4 dataset protocol", dataset_protocol},
      {"AC5 always-yes baseline", always_yes_baseline},
      {"AC6 two-cluster case study", case_study},
      {"AC7 cycle contraction fuzz", cycle_contraction_fuzz},
      {"AC8 LLM path integration", llm_integration},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
