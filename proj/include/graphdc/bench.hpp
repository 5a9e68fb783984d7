#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "graphdc/chat_client.hpp"
#include "graphdc/generate.hpp"
#include "graphdc/graph.hpp"
#include "graphdc/pipeline.hpp"

namespace graphdc {

// Size bands by node count, inclusive: 2-19, 20-39, 40-59, 60-79, 80-100.
inline constexpr std::size_t kBandCount = 5;
inline constexpr std::array<SizeBand, kBandCount> kBands{
    {{2, 19}, {20, 39}, {40, 59}, {60, 79}, {80, 100}}};

/// "0-20", "20-40", ...
std::string band_label(std::size_t band);
std::size_t parse_band_label(std::string_view label);
/// Band holding a node count; nullopt outside [2, 100].
std::optional<std::size_t> band_of(std::size_t node_count);

/// Edges per node used for each task's instances. Cycle draws "no" instances
/// sparse enough to be forests often and "yes" instances dense enough that
/// the label mix averages to the target edge count.
struct DensityProfile {
  double connectivity = 73.67 / 50.33;
  double shortest_path = 131.33 / 50.66;
  double cycle_no = 0.4;
  double cycle_yes = 3.2;
  double triangle_count = 2.0;
};

inline constexpr DensityProfile kDefaultDensities{};

/// Reference mean edge counts the densities are calibrated against.
inline constexpr double kTargetMeanEdgesConnectivity = 73.67;
inline constexpr double kTargetMeanEdgesCycle = 90.33;
inline constexpr double kTargetMeanEdgesShortestPath = 131.33;

/// Everything needed to regenerate one instance.
struct InstanceSpec {
  TaskKind task = TaskKind::Cycle;
  std::size_t band = 0;
  std::uint64_t seed = 0;
  double density = 1.0;
  bool weighted = false;

  bool operator==(const InstanceSpec&) const = default;
};

struct EvalRecord {
  std::string id;
  InstanceSpec spec;
  Graph graph;
  Query query = Query::cycle();
  Answer ground_truth;

  bool operator==(const EvalRecord&) const = default;
};

/// Graph from (band, density, weighted, seed); endpoints for connectivity and
/// shortest_path from pick_far_pair on a derived seed; label from oracle_solve.
EvalRecord make_instance(const InstanceSpec& spec, std::string id = {});

class DatasetGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Attempts allowed per dataset slot before giving up.
inline constexpr std::size_t kRejectionBudget = 10000;

/// per_band records in each of the five bands, ordered by band then slot.
/// Cycle slots alternate yes/no targets (even slots yes), shortest_path
/// re-draws until the pair is reachable. Deterministic per seed.
/// Throws std::invalid_argument if per_band == 0 and DatasetGenerationError
/// naming the band and label when the rejection budget runs out.
std::vector<EvalRecord> generate_dataset(TaskKind task, std::size_t per_band, std::uint64_t seed,
                                         const DensityProfile& densities = kDefaultDensities);

/// JSON-lines codec; see docs/FORMATS.md. Parsing throws std::invalid_argument.
std::string record_to_json_line(const EvalRecord& r);
EvalRecord record_from_json_line(std::string_view line);
void write_dataset(const std::filesystem::path& path, std::span<const EvalRecord> records);
std::vector<EvalRecord> read_dataset(const std::filesystem::path& path);

struct BandTally {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t transport_failures = 0;
  std::size_t extraction_failures = 0;
  std::size_t internal_failures = 0;

  /// correct / total, or 0 for an empty band.
  double accuracy() const;
  BandTally& operator+=(const BandTally& other);
  bool operator==(const BandTally&) const = default;
};

struct RunReport {
  std::string task;  // empty if the dataset mixes tasks or is empty
  std::string backend;
  std::string synthesis;
  std::array<BandTally, kBandCount> bands{};
  ChatUsage usage;
  double wall_seconds = 0;

  BandTally overall() const;
  bool operator==(const RunReport&) const = default;
};

/// The per-instance result that feeds the report.
struct RecordOutcome {
  std::string id;
  std::size_t band = 0;
  TaskKind task = TaskKind::Cycle;
  Answer expected;
  std::optional<Answer> answer;
  bool correct = false;
  FailureKind failure = FailureKind::None;
  std::string error;
};

/// Single-threaded reduction; independent of outcome order.
RunReport aggregate(std::span<const RecordOutcome> outcomes);

struct EvalOptions {
  PipelineConfig pipeline;
  std::size_t workers = 1;
  std::string backend_name = "exact";
  std::string synthesis_name = "exact";
  /// When set: results.jsonl, report.json, report.txt and traces/<id>.json.
  std::optional<std::filesystem::path> out_dir;
};

struct EvalResult {
  RunReport report;
  std::vector<RecordOutcome> outcomes;  // dataset order
};

/// Runs the pipeline on every record across a bounded worker pool and scores
/// exact matches against the ground truth. Per-record failures count as
/// incorrect; nothing here throws for them.
EvalResult run_eval(std::span<const EvalRecord> records, const EvalOptions& options);

/// Accuracy table with bands as columns.
std::string render_report_table(const RunReport& report);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(std::string_view text);

}  // namespace graphdc
