// graphdc command line: dataset generation, evaluation runs, report printing.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "graphdc/bench.hpp"
#include "graphdc/chat_client.hpp"
#include "graphdc/pipeline.hpp"

namespace fs = std::filesystem;
using namespace graphdc;

namespace {

struct GenArgs {
  std::string task;
  std::size_t per_band = 0;
  std::uint64_t seed = 0;
  fs::path out;
};

struct RunArgs {
  fs::path dataset;
  std::string backend = "exact";
  std::string synthesis = "exact";
  fs::path config;
  std::size_t max_subgraph_size = kDefaultMaxSubgraphSize;
  std::size_t workers = 1;
  std::size_t sub_agent_concurrency = 1;
  fs::path out_dir;
};

int cmd_gen(const GenArgs& a) {
  const TaskKind task = parse_task(a.task);
  const auto records = generate_dataset(task, a.per_band, a.seed);
  if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
  write_dataset(a.out, records);
  double edges = 0;
  for (const auto& r : records) edges += static_cast<double>(r.graph.edge_count());
  std::printf("wrote %zu %s records to %s (mean edges %.2f)\n", records.size(),
              to_string(task).c_str(), a.out.string().c_str(),
              edges / static_cast<double>(records.size()));
  return 0;
}

int cmd_run(const RunArgs& a) {
  EvalOptions opt;
  opt.workers = a.workers;
  opt.backend_name = a.backend;
  opt.synthesis_name = a.synthesis;
  opt.out_dir = a.out_dir;
  opt.pipeline.max_subgraph_size = a.max_subgraph_size;
  opt.pipeline.sub_agent_concurrency = a.sub_agent_concurrency;

  std::shared_ptr<ChatClient> client;
  if (a.backend == "llm" || a.synthesis == "llm") {
    const LlmConfig cfg = a.config.empty() ? LlmConfig{} : load_llm_config(a.config);
    if (!std::getenv(cfg.api_key_env.c_str())) {
      std::fprintf(stderr, "warning: %s is not set; requests are sent without a key\n",
                   cfg.api_key_env.c_str());
    }
    client = ChatClient::from_config(cfg);
  }
  if (a.backend == "llm") opt.pipeline.sub_agent = std::make_shared<LlmChatReasoner>(client);
  if (a.synthesis == "llm") {
    opt.pipeline.synthesis = SynthesisMode::Llm;
    opt.pipeline.master = client;
  }

  const auto records = read_dataset(a.dataset);
  fs::create_directories(a.out_dir);
  const EvalResult result = run_eval(records, opt);
  std::cout << render_report_table(result.report);
  const std::size_t internal = result.report.overall().internal_failures;
  if (internal > 0) {
    std::fprintf(stderr, "%zu internal error(s); see %s\n", internal,
                 (a.out_dir / "results.jsonl").string().c_str());
    return 1;
  }
  return 0;
}

int cmd_report(const fs::path& run_dir) {
  std::ifstream in(run_dir / "report.json");
  if (!in) throw std::invalid_argument("no report.json in " + run_dir.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const RunReport report = report_from_json(buf.str());
  std::cout << render_report_table(report);
  return report.overall().internal_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphdc: divide-and-conquer graph reasoning benchmark"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a benchmark dataset (JSON lines)");
  gen_cmd->add_option("--task", gen.task, "connectivity | cycle | shortest_path | triangle_count")
      ->required()
      ->check(CLI::IsMember({"connectivity", "cycle", "shortest_path", "triangle_count"}));
  gen_cmd->add_option("--per-band", gen.per_band, "instances per size band")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "generator seed")->required();
  gen_cmd->add_option("--out", gen.out, "output dataset file")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "evaluate the pipeline on a dataset");
  run_cmd->add_option("--dataset", run.dataset, "dataset file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--backend", run.backend, "sub-agent backend")
      ->check(CLI::IsMember({"exact", "llm"}))
      ->capture_default_str();
  run_cmd->add_option("--synthesis", run.synthesis, "master synthesis")
      ->check(CLI::IsMember({"exact", "llm"}))
      ->capture_default_str();
  run_cmd->add_option("--config", run.config, "LLM config JSON (endpoint, model, timeouts)")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--max-subgraph-size", run.max_subgraph_size, "splitter size cap")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
      ->capture_default_str();
  run_cmd->add_option("--workers", run.workers, "instances evaluated concurrently")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--sub-agent-concurrency", run.sub_agent_concurrency,
                      "sub-agent calls in flight per instance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--out-dir", run.out_dir, "run directory")->required();

  fs::path report_dir;
  auto* report_cmd = app.add_subcommand("report", "print the accuracy table of a run");
  report_cmd->add_option("--run-dir", report_dir, "run directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*run_cmd) return cmd_run(run);
    if (*report_cmd) return cmd_report(report_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
