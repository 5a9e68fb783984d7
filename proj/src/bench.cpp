#include "graphdc/bench.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "graphdc/graph_text.hpp"
#include "graphdc/oracle.hpp"
#include "graphdc/parallel.hpp"
#include "json.hpp"

namespace graphdc {

using nlohmann::json;

namespace {

constexpr std::uint64_t kPairSeedSalt = 0x9a1f;

std::string slot_id(TaskKind task, std::size_t band, std::size_t slot) {
  char digits[24];
  std::snprintf(digits, sizeof digits, "%04zu", slot);
  return to_string(task) + "-" + band_label(band) + "-" + digits;
}

double density_for(TaskKind task, bool cycle_yes, const DensityProfile& d) {
  switch (task) {
    case TaskKind::Connectivity: return d.connectivity;
    case TaskKind::ShortestPath: return d.shortest_path;
    case TaskKind::Cycle: return cycle_yes ? d.cycle_yes : d.cycle_no;
    case TaskKind::TriangleCount: return d.triangle_count;
  }
  return 1.0;
}

json tally_json(const BandTally& t) {
  return {{"total", t.total},
          {"correct", t.correct},
          {"accuracy", t.accuracy()},
          {"transport_failures", t.transport_failures},
          {"extraction_failures", t.extraction_failures},
          {"internal_failures", t.internal_failures}};
}

BandTally tally_from_json(const json& j) {
  BandTally t;
  t.total = j.at("total").get<std::size_t>();
  t.correct = j.at("correct").get<std::size_t>();
  t.transport_failures = j.at("transport_failures").get<std::size_t>();
  t.extraction_failures = j.at("extraction_failures").get<std::size_t>();
  t.internal_failures = j.at("internal_failures").get<std::size_t>();
  return t;
}

// Distinct chat clients reachable from a pipeline config, for usage totals.
std::vector<std::shared_ptr<ChatClient>> chat_clients(const PipelineConfig& cfg) {
  std::vector<std::shared_ptr<ChatClient>> clients;
  if (auto llm = std::dynamic_pointer_cast<LlmChatReasoner>(cfg.sub_agent)) {
    clients.push_back(llm->client());
  }
  if (cfg.master && (clients.empty() || clients.front() != cfg.master)) {
    clients.push_back(cfg.master);
  }
  return clients;
}

ChatUsage total_usage(const std::vector<std::shared_ptr<ChatClient>>& clients) {
  ChatUsage sum;
  for (const auto& c : clients) {
    const ChatUsage u = c->usage();
    sum.requests += u.requests;
    sum.retries += u.retries;
    sum.prompt_tokens += u.prompt_tokens;
    sum.completion_tokens += u.completion_tokens;
  }
  return sum;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string band_label(std::size_t band) {
  if (band >= kBandCount) throw std::out_of_range("band index " + std::to_string(band));
  return std::to_string(band * 20) + "-" + std::to_string(band * 20 + 20);
}

std::size_t parse_band_label(std::string_view label) {
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (band_label(b) == label) return b;
  }
  throw std::invalid_argument("unknown size band '" + std::string(label) + "'");
}

std::optional<std::size_t> band_of(std::size_t node_count) {
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (node_count >= kBands[b].lo && node_count <= kBands[b].hi) return b;
  }
  return std::nullopt;
}

EvalRecord make_instance(const InstanceSpec& spec, std::string id) {
  if (spec.band >= kBandCount) throw std::invalid_argument("band index out of range");
  EvalRecord r;
  r.id = std::move(id);
  r.spec = spec;
  r.graph = gen_random_graph(kBands[spec.band], spec.density, spec.weighted, spec.seed);
  if (task_has_endpoints(spec.task)) {
    const auto [s, t] = pick_far_pair(r.graph, mix_seed(spec.seed, kPairSeedSalt));
    r.query = Query::make(spec.task, s, t);
  } else {
    r.query = Query::make(spec.task);
  }
  r.ground_truth = oracle_solve(r.graph, r.query);
  return r;
}

std::vector<EvalRecord> generate_dataset(TaskKind task, std::size_t per_band, std::uint64_t seed,
                                         const DensityProfile& densities) {
  if (per_band == 0) throw std::invalid_argument("per_band must be at least 1");
  const bool weighted = task == TaskKind::ShortestPath;
  const std::uint64_t task_seed = mix_seed(seed, static_cast<std::uint64_t>(task) + 1);
  std::vector<EvalRecord> records;
  records.reserve(per_band * kBandCount);
  for (std::size_t band = 0; band < kBandCount; ++band) {
    const std::uint64_t band_seed = mix_seed(task_seed, band);
    for (std::size_t slot = 0; slot < per_band; ++slot) {
      const bool want_yes = slot % 2 == 0;
      const std::uint64_t slot_seed = mix_seed(band_seed, slot);
      std::optional<EvalRecord> accepted;
      for (std::size_t attempt = 0; attempt < kRejectionBudget && !accepted; ++attempt) {
        InstanceSpec spec{task, band, mix_seed(slot_seed, attempt),
                          density_for(task, want_yes, densities), weighted};
        EvalRecord r = make_instance(spec, slot_id(task, band, slot));
        bool ok = true;
        if (task == TaskKind::Cycle) ok = std::get<YesNo>(r.ground_truth).value == want_yes;
        if (task == TaskKind::ShortestPath) ok = std::get<Distance>(r.ground_truth).reachable();
        if (ok) accepted = std::move(r);
      }
      if (!accepted) {
        std::string what = "rejection budget exhausted for " + to_string(task) + " band " +
                           band_label(band);
        if (task == TaskKind::Cycle) what += want_yes ? " label yes" : " label no";
        if (task == TaskKind::ShortestPath) what += " (no reachable pair)";
        throw DatasetGenerationError(what);
      }
      records.push_back(std::move(*accepted));
    }
  }
  return records;
}

std::string record_to_json_line(const EvalRecord& r) {
  json j{
      {"id", r.id},
      {"task", to_string(r.spec.task)},
      {"band", band_label(r.spec.band)},
      {"seed", r.spec.seed},
      {"density", r.spec.density},
      {"weighted", r.spec.weighted},
      {"nodes", r.graph.node_count()},
      {"edges", r.graph.edge_count()},
  };
  if (r.query.source()) j["source"] = *r.query.source();
  if (r.query.target()) j["target"] = *r.query.target();
  j["answer"] = to_string(r.ground_truth);
  j["graph"] = render_graph_text(r.graph);
  return j.dump();
}

EvalRecord record_from_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    EvalRecord r;
    r.id = j.at("id").get<std::string>();
    r.spec.task = parse_task(j.at("task").get<std::string>());
    r.spec.band = parse_band_label(j.at("band").get<std::string>());
    r.spec.seed = j.at("seed").get<std::uint64_t>();
    r.spec.density = j.at("density").get<double>();
    r.spec.weighted = j.at("weighted").get<bool>();
    r.graph = parse_graph_text(j.at("graph").get<std::string>());
    if (r.graph.weighted() != r.spec.weighted) {
      throw std::invalid_argument("weighted flag disagrees with graph text");
    }
    if (band_of(r.graph.node_count()) != r.spec.band) {
      throw std::invalid_argument("graph has " + std::to_string(r.graph.node_count()) +
                                  " nodes, outside band " + band_label(r.spec.band));
    }
    std::optional<NodeId> s, t;
    if (j.contains("source")) s = j["source"].get<NodeId>();
    if (j.contains("target")) t = j["target"].get<NodeId>();
    if (task_has_endpoints(r.spec.task) && (!s || !t)) {
      throw std::invalid_argument("missing source/target");
    }
    r.query = Query::make(r.spec.task, s, t);
    r.query.validate_for(r.graph);
    r.ground_truth =
        extract_final_answer("ANSWER: " + j.at("answer").get<std::string>(), r.spec.task);
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad dataset record: ") + e.what());
  } catch (const ExtractionError& e) {
    throw std::invalid_argument(std::string("bad dataset answer: ") + e.what());
  }
}

void write_dataset(const std::filesystem::path& path, std::span<const EvalRecord> records) {
  std::string text;
  for (const auto& r : records) text += record_to_json_line(r) + "\n";
  write_text(path, text);
}

std::vector<EvalRecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open dataset " + path.string());
  std::vector<EvalRecord> records;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json_line(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return records;
}

double BandTally::accuracy() const {
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

BandTally& BandTally::operator+=(const BandTally& o) {
  total += o.total;
  correct += o.correct;
  transport_failures += o.transport_failures;
  extraction_failures += o.extraction_failures;
  internal_failures += o.internal_failures;
  return *this;
}

BandTally RunReport::overall() const {
  BandTally sum;
  for (const auto& b : bands) sum += b;
  return sum;
}

RunReport aggregate(std::span<const RecordOutcome> outcomes) {
  RunReport report;
  std::set<TaskKind> tasks;
  for (const auto& o : outcomes) {
    BandTally& t = report.bands.at(o.band);
    ++t.total;
    if (o.correct) ++t.correct;
    switch (o.failure) {
      case FailureKind::None: break;
      case FailureKind::Transport: ++t.transport_failures; break;
      case FailureKind::Extraction: ++t.extraction_failures; break;
      case FailureKind::Internal: ++t.internal_failures; break;
    }
    tasks.insert(o.task);
  }
  if (tasks.size() == 1) report.task = to_string(*tasks.begin());
  return report;
}

EvalResult run_eval(std::span<const EvalRecord> records, const EvalOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto clients = chat_clients(options.pipeline);
  const ChatUsage before = total_usage(clients);

  std::optional<std::filesystem::path> trace_dir;
  if (options.out_dir) {
    trace_dir = *options.out_dir / "traces";
    std::filesystem::create_directories(*trace_dir);
  }

  EvalResult result;
  result.outcomes.resize(records.size());
  parallel_for(records.size(), options.workers, [&](std::size_t i) {
    const EvalRecord& r = records[i];
    RecordOutcome& o = result.outcomes[i];
    o.id = r.id;
    o.band = r.spec.band;
    o.task = r.spec.task;
    o.expected = r.ground_truth;
    PipelineResult run = run_pipeline(r.graph, r.query, options.pipeline);
    run.trace.instance_id = r.id;
    o.answer = run.answer;
    o.failure = run.failure();
    o.error = run.trace.error;
    o.correct = o.answer && *o.answer == r.ground_truth;
    if (trace_dir) write_text(*trace_dir / (r.id + ".json"), trace_to_json(run.trace));
  });

  result.report = aggregate(result.outcomes);
  result.report.backend = options.backend_name;
  result.report.synthesis = options.synthesis_name;
  const ChatUsage after = total_usage(clients);
  result.report.usage = {after.requests - before.requests, after.retries - before.retries,
                         after.prompt_tokens - before.prompt_tokens,
                         after.completion_tokens - before.completion_tokens};
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (options.out_dir) {
    std::string lines;
    for (const auto& o : result.outcomes) {
      json j{{"id", o.id},
             {"task", to_string(o.task)},
             {"band", band_label(o.band)},
             {"expected", to_string(o.expected)},
             {"answer", o.answer ? json(to_string(*o.answer)) : json(nullptr)},
             {"correct", o.correct},
             {"failure", to_string(o.failure)}};
      if (!o.error.empty()) j["error"] = o.error;
      lines += j.dump() + "\n";
    }
    write_text(*options.out_dir / "results.jsonl", lines);
    write_text(*options.out_dir / "report.json", report_to_json(result.report));
    write_text(*options.out_dir / "report.txt", render_report_table(result.report));
  }
  return result;
}

std::string render_report_table(const RunReport& report) {
  const BandTally all = report.overall();
  std::ostringstream out;
  out << "task: " << (report.task.empty() ? "mixed" : report.task)
      << "  backend: " << report.backend << "  synthesis: " << report.synthesis
      << "  instances: " << all.total << "\n";

  std::vector<BandTally> columns(report.bands.begin(), report.bands.end());
  columns.push_back(all);
  std::vector<std::string> headers;
  for (std::size_t b = 0; b < kBandCount; ++b) headers.push_back(band_label(b));
  headers.push_back("all");

  auto row = [&](const std::string& name, auto cell) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "| %-10s ", name.c_str());
    out << buf;
    for (const auto& c : columns) {
      std::snprintf(buf, sizeof buf, "| %9s ", cell(c).c_str());
      out << buf;
    }
    out << "|\n";
  };
  std::size_t h = 0;
  row("band", [&](const BandTally&) { return headers[h++]; });
  out << "|" << std::string(12, '-');
  for (std::size_t i = 0; i < columns.size(); ++i) out << "|" << std::string(11, '-');
  out << "|\n";
  row("accuracy", [](const BandTally& t) {
    if (t.total == 0) return std::string("-");
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * t.accuracy());
    return std::string(buf);
  });
  row("correct", [](const BandTally& t) {
    return std::to_string(t.correct) + "/" + std::to_string(t.total);
  });
  row("transport", [](const BandTally& t) { return std::to_string(t.transport_failures); });
  row("extraction", [](const BandTally& t) { return std::to_string(t.extraction_failures); });
  row("internal", [](const BandTally& t) { return std::to_string(t.internal_failures); });

  char tail[160];
  std::snprintf(tail, sizeof tail,
                "wall time: %.2f s  requests: %llu  retries: %llu  tokens: %llu prompt / %llu "
                "completion\n",
                report.wall_seconds, static_cast<unsigned long long>(report.usage.requests),
                static_cast<unsigned long long>(report.usage.retries),
                static_cast<unsigned long long>(report.usage.prompt_tokens),
                static_cast<unsigned long long>(report.usage.completion_tokens));
  out << tail;
  return out.str();
}

std::string report_to_json(const RunReport& report) {
  json bands = json::array();
  for (std::size_t b = 0; b < kBandCount; ++b) {
    json t = tally_json(report.bands[b]);
    t["band"] = band_label(b);
    bands.push_back(std::move(t));
  }
  json j{
      {"task", report.task},
      {"backend", report.backend},
      {"synthesis", report.synthesis},
      {"bands", std::move(bands)},
      {"overall", tally_json(report.overall())},
      {"usage",
       {{"requests", report.usage.requests},
        {"retries", report.usage.retries},
        {"prompt_tokens", report.usage.prompt_tokens},
        {"completion_tokens", report.usage.completion_tokens}}},
      {"wall_seconds", report.wall_seconds},
  };
  return j.dump(2) + "\n";
}

RunReport report_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    r.task = j.at("task").get<std::string>();
    r.backend = j.at("backend").get<std::string>();
    r.synthesis = j.at("synthesis").get<std::string>();
    const auto& bands = j.at("bands");
    if (!bands.is_array() || bands.size() != kBandCount) {
      throw std::invalid_argument("report must list " + std::to_string(kBandCount) + " bands");
    }
    for (const auto& b : bands) {
      r.bands.at(parse_band_label(b.at("band").get<std::string>())) = tally_from_json(b);
    }
    const auto& u = j.at("usage");
    r.usage = {u.at("requests").get<std::uint64_t>(), u.at("retries").get<std::uint64_t>(),
               u.at("prompt_tokens").get<std::uint64_t>(),
               u.at("completion_tokens").get<std::uint64_t>()};
    r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad report: ") + e.what());
  }
}

}  // namespace graphdc
