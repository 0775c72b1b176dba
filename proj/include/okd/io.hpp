// JSON serialization for instances, run results, offline solutions,
// validation reports, bench reports, tuning results and experiment files.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "okd/bench.hpp"
#include "okd/core.hpp"
#include "okd/engine.hpp"
#include "okd/instances.hpp"
#include "okd/oracle.hpp"
#include "okd/threshold.hpp"

namespace okd {

using Json = nlohmann::json;

/// Malformed JSON document: wrong types, missing or unknown fields.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"horizon", "knapsacks": [{"capacity", "theta", "duration_lo",
/// "duration_hi", "size_cap"}], "items": [{"id", "arrival", "options":
/// [{"eligible", "size", "value", "start", "duration"}]}]}. Every field is
/// required and unknown fields are rejected.
Instance instance_from_json(const Json& j);
Json to_json(const Instance& inst);

/// Accepts a single instance, an array of instances, or {"instances": [...]}.
/// Ids are the zero-padded position in the suite.
std::vector<BenchInput> suite_from_json(const Json& j);
std::string suite_id(std::size_t index);

/// {"kind": "exponential", "gamma": <number> | "auto"}
ThresholdConfig threshold_config_from_json(const Json& j);
Json to_json(const ThresholdConfig& config);

Json to_json(const RunResult& result);
Json to_json(const OfflineSolution& solution);
Json to_json(const ValidationReport& report);
Json to_json(const BenchReport& report);
Json to_json(const TuneResult& result);
std::string tune_curve_csv(const TuneResult& result);

GenParams gen_params_from_json(const Json& j);

/// Experiment file:
/// {"instances": [<path> | {"generate": {...GenParams}, "count": n}],
///  "thresholds": {...}, "oracle": {"exact_cutoff", "bruteforce_cutoff",
///  "cross_check", "node_budget"}, "tuner": {"delta", "grid_points"}}
/// Relative paths resolve against `base_dir`. A generate entry with count c
/// yields c instances with seeds seed, seed + 1, ...
struct ExperimentConfig {
  std::vector<BenchInput> instances;
  BenchConfig bench;
  double tuner_delta = 0.5;
  std::size_t tuner_grid_points = 11;
};
ExperimentConfig experiment_from_json(const Json& j, const std::filesystem::path& base_dir);

/// Reads a JSON document from a file, or from standard input when `path`
/// is "-". Throws std::runtime_error naming the path when unreadable.
Json read_json(const std::string& path);

/// Writes `text` to `path`, or to standard output when `path` is empty or "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace okd
