#pragma once

// Shared test fixtures: the planted two-cluster graph, random corpora,
// forest-plus-inter-edge instances, and scripted chat transports.

#include <functional>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "graphdc/chat_client.hpp"
#include "graphdc/decomposition.hpp"
#include "graphdc/generate.hpp"
#include "graphdc/graph.hpp"
#include "json.hpp"

namespace graphdc::testing {

// Two dense 50-node clusters (0..49 and 50..99) joined by a few planted
// cross edges; neither 27 nor 97 touches a cross edge, so Connectivity(27, 97)
// can only be answered by composing the two clusters through their exits.
struct TwoClusterFixture {
  Graph graph;
  std::vector<Edge> cross_edges;
  std::vector<SubgraphId> planted;  // node -> cluster
};

inline TwoClusterFixture two_cluster_fixture() {
  constexpr std::size_t kClusterSize = 50;
  constexpr double kIntraProbability = 0.3;
  TwoClusterFixture f;
  f.cross_edges = {{5, 62, 1}, {18, 80, 1}, {33, 91, 1}, {44, 57, 1}};
  Rng rng(20240427);
  std::vector<Edge> edges = f.cross_edges;
  for (NodeId base : {NodeId{0}, NodeId{kClusterSize}}) {
    for (NodeId i = 0; i < kClusterSize; ++i)
      for (NodeId j = i + 1; j < kClusterSize; ++j)
        if (rng.unit() < kIntraProbability) edges.push_back({base + i, base + j, 1});
  }
  f.graph = Graph(2 * kClusterSize, std::move(edges));
  f.planted.assign(2 * kClusterSize, 0);
  for (std::size_t v = kClusterSize; v < 2 * kClusterSize; ++v) f.planted[v] = 1;
  return f;
}

inline Graph random_graph(Rng& rng, std::size_t n, std::size_t m, bool weighted) {
  m = std::min(m, n * (n - 1) / 2);
  std::set<std::pair<NodeId, NodeId>> chosen;
  std::vector<Edge> edges;
  while (edges.size() < m) {
    auto a = static_cast<NodeId>(rng.below(n));
    auto b = static_cast<NodeId>(rng.below(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!chosen.emplace(a, b).second) continue;
    edges.push_back({a, b, weighted ? static_cast<Weight>(rng.between(1, 10)) : Weight{1}});
  }
  return Graph(n, std::move(edges), weighted);
}

struct Instance {
  Graph graph;
  Query query = Query::cycle();
};

// Mixed-density corpus, 2..max_nodes nodes, random endpoints.
inline std::vector<Instance> random_corpus(TaskKind task, std::size_t count, std::uint64_t seed,
                                           std::size_t max_nodes = 100) {
  static constexpr double kDensities[] = {0.3, 0.6, 1.0, 1.5, 2.0, 3.0, 5.0};
  Rng rng(seed);
  std::vector<Instance> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = rng.between(2, max_nodes);
    const double d = kDensities[rng.below(std::size(kDensities))];
    Instance inst;
    inst.graph = random_graph(rng, n, static_cast<std::size_t>(d * static_cast<double>(n)),
                              task == TaskKind::ShortestPath);
    if (task_has_endpoints(task)) {
      const auto s = static_cast<NodeId>(rng.below(n));
      auto t = static_cast<NodeId>(rng.below(n - 1));
      if (t >= s) ++t;
      inst.query = Query::make(task, s, t);
    } else {
      inst.query = Query::make(task);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

// Blocks of consecutive nodes, each holding a random forest, wired by random
// inter-block edges. The planted partition keeps every subgraph acyclic.
struct ForestInstance {
  Graph graph;
  std::vector<SubgraphId> partition;
};

inline ForestInstance forest_instance(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t blocks = rng.between(2, 6);
  std::vector<std::size_t> start{0};
  for (std::size_t b = 0; b < blocks; ++b) start.push_back(start.back() + rng.between(1, 12));
  const std::size_t n = start.back();
  ForestInstance inst;
  inst.partition.resize(n);
  std::vector<Edge> edges;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t v = start[b]; v < start[b + 1]; ++v) {
      inst.partition[v] = static_cast<SubgraphId>(b);
      // Attach to an earlier node of the block with probability 0.7: a forest.
      if (v > start[b] && rng.unit() < 0.7) {
        const auto parent = static_cast<NodeId>(rng.between(start[b], v - 1));
        edges.push_back({parent, static_cast<NodeId>(v), 1});
      }
    }
  }
  const std::size_t inter = rng.below(blocks + 3);
  std::set<std::pair<NodeId, NodeId>> chosen;
  for (std::size_t tries = 0; chosen.size() < inter && tries < 100; ++tries) {
    auto a = static_cast<NodeId>(rng.below(n));
    auto b = static_cast<NodeId>(rng.below(n));
    if (inst.partition[a] == inst.partition[b]) continue;
    if (a > b) std::swap(a, b);
    if (chosen.emplace(a, b).second) edges.push_back({a, b, 1});
  }
  inst.graph = Graph(n, std::move(edges));
  return inst;
}

inline std::string chat_reply_body(const std::string& content, std::uint64_t prompt_tokens = 10,
                                   std::uint64_t completion_tokens = 5) {
  nlohmann::json j{
      {"id", "chatcmpl-test"},
      {"object", "chat.completion"},
      {"choices",
       {{{"index", 0},
         {"message", {{"role", "assistant"}, {"content", content}}},
         {"finish_reason", "stop"}}}},
      {"usage", {{"prompt_tokens", prompt_tokens}, {"completion_tokens", completion_tokens}}},
  };
  return j.dump();
}

inline std::string user_message_of(const std::string& request_body) {
  const auto j = nlohmann::json::parse(request_body);
  return j.at("messages").back().at("content").get<std::string>();
}

// Transport answering every request through a callback.
class ScriptedTransport final : public ChatTransport {
 public:
  using Handler = std::function<HttpResponse(const std::string& body, int call)>;
  explicit ScriptedTransport(Handler handler) : handler_(std::move(handler)) {}

  HttpResponse post(const std::string& body, const std::string& token,
                    std::chrono::duration<double>) override {
    int call;
    {
      std::lock_guard lock(mutex_);
      call = calls_++;
      bodies_.push_back(body);
      tokens_.push_back(token);
    }
    return handler_(body, call);
  }

  int calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
  }
  std::vector<std::string> bodies() const {
    std::lock_guard lock(mutex_);
    return bodies_;
  }
  std::vector<std::string> tokens() const {
    std::lock_guard lock(mutex_);
    return tokens_;
  }

 private:
  Handler handler_;
  mutable std::mutex mutex_;
  int calls_ = 0;
  std::vector<std::string> bodies_;
  std::vector<std::string> tokens_;
};

inline LlmConfig fast_config() {
  LlmConfig c;
  c.endpoint = "http://127.0.0.1:1/v1/chat/completions";
  c.backoff_initial = std::chrono::milliseconds(1);
  return c;
}

// Chat client whose transport is scripted; also returns the transport.
inline std::pair<std::shared_ptr<ChatClient>, ScriptedTransport*> scripted_client(
    ScriptedTransport::Handler handler, LlmConfig config = fast_config()) {
  auto transport = std::make_unique<ScriptedTransport>(std::move(handler));
  auto* raw = transport.get();
  return {std::make_shared<ChatClient>(config, std::move(transport), "test-key"), raw};
}

}  // namespace graphdc::testing
