#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hrvlab/generators.hpp"
#include "hrvlab/report.hpp"

namespace hrvlab {

enum class Command { Generate, Detect, Experiment };

const char* to_string(Command c);

/// Everything one CLI invocation needs. Only the fields relevant to
/// `command` may be set; see validate().
struct RunConfig {
  Command command = Command::Generate;
  std::optional<GeneratorSpec> generator;
  std::optional<std::string> experiment;
  std::optional<std::filesystem::path> input_csv;
  std::optional<std::filesystem::path> output;
  std::uint64_t seed = 0;
  std::size_t n = 10000;
  std::size_t partitions = 1;
  std::size_t replications = 20;
  std::size_t threads = 1;
  DetectConfig detect;
};

/// Checks the per-command field requirements; throws UsageError.
void validate(const RunConfig& c);

/// Parses a RunConfig document. Keys that do not belong to the command are
/// rejected with UsageError; malformed values raise ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);

DetectConfig detect_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DetectConfig& c);

/// A canned simulation setup.
struct Experiment {
  std::string name;
  std::string description;
  GeneratorSpec spec;
  /// Threshold (number of top points by min) for the ratio-tail estimate.
  std::size_t reference_threshold;
};

const std::vector<Experiment>& experiments();
/// Throws UsageError listing the valid names.
const Experiment& find_experiment(const std::string& name);

/// Reference k values used by the experiment summaries.
struct ReferenceK {
  std::size_t marginal;   // marginal and min Hill
  std::size_t cev;        // Hillish / Pickandsish, capped at branch size
  std::size_t qhat;
  std::size_t threshold;  // top points by min
  std::size_t ratio;      // Hill k on the thresholded theta_max sample

  static ReferenceK for_sample(std::size_t n, std::size_t threshold);
};

/// Point estimates from one sample. Missing values (empty or degenerate
/// branches) are NaN and serialize as null.
using Estimates = std::map<std::string, double>;

Estimates point_estimates(std::span<const Point> pairs, const ReferenceK& ref,
                          double pickands_q = 0.8);

struct ExperimentSummary {
  std::string name;
  GeneratorSpec spec;
  std::size_t n = 0;
  std::uint64_t base_seed = 0;
  ReferenceK reference{};
  std::vector<std::uint64_t> seeds;
  std::vector<Estimates> replications;
  Estimates medians;
};

nlohmann::json to_json(const ExperimentSummary& s);

/// Median of the non-NaN values; NaN if there are none.
double median(std::vector<double> values);

/// Generates the configured batch, writes `<output>` as CSV and
/// `<output>.meta.json` alongside it.
SampleBatch run_generate(const RunConfig& config);

/// Reads `input_csv`, runs detect_report and writes the report directory.
DetectionReport run_detect(const RunConfig& config);

/// Replication i uses seed base_seed + i. Replications run on up to
/// `threads` workers; the result does not depend on the thread count.
ExperimentSummary run_experiment(const std::string& name, std::size_t replications,
                                 std::uint64_t base_seed, std::size_t n = 10000,
                                 std::size_t threads = 1);

/// run_experiment driven by a RunConfig; writes the summary JSON to `output`
/// when set.
ExperimentSummary run_experiment(const RunConfig& config);

}  // namespace hrvlab
