// Instance generators and CSV trace ingestion.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "okd/core.hpp"

namespace okd {

enum class Family { kUniform, kStaircase, kBurst };

struct GenSpec {
  Family family = Family::kUniform;
  std::size_t n = 0;
  Slot horizon = 1;
  std::vector<KnapsackSpec> knapsacks;  // K = knapsacks.size()
  std::uint64_t seed = 0;
  double eligibility = 1.0;  // probability that an option is eligible
  std::size_t levels = 2;    // staircase only
};

class GenSpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arrivals uniform on [1, T - max_k D_hi_k] (at least slot 1), sorted;
/// each option starts at the arrival. Duration uniform on
/// [D_lo, D_hi], size on (0, eps], density on [1, theta), value =
/// density * size * duration. Every item keeps at least one eligible option.
Instance gen_uniform(const GenSpec& spec);

/// Lower-bound probe, K = 1. Batch l = 0..L-1 has value density
/// theta^(l / (L-1)) and total size C, every item requesting slots
/// [1, D_lo] and arriving at slot 1. Returns the L prefix instances; prefix
/// l holds batches 0..l.
std::vector<Instance> gen_staircase(const GenSpec& spec, std::size_t levels);

/// Uniform arrivals compressed into bursts: items arrive in n / 8 (at least
/// one) groups sharing an arrival slot, stressing same-slot contention.
Instance gen_burst(const GenSpec& spec);

/// Dispatches on spec.family; staircase returns the full (last) prefix.
Instance generate(const GenSpec& spec);

/// Flat generator parameters as accepted on the command line and in
/// experiment files. Every knapsack gets the same spec.
struct GenParams {
  Family family = Family::kUniform;
  std::size_t n = 20;
  std::size_t k = 1;
  Slot horizon = 48;
  double capacity = 10.0;
  double theta = 4.0;
  double alpha = 2.0;
  Slot duration_lo = 2;
  std::optional<double> eps;  // default min(C, C ln2 / default_gamma(theta, alpha))
  std::uint64_t seed = 0;
  double eligibility = 1.0;
  std::size_t levels = 6;
};

/// duration_hi = round(duration_lo * alpha).
GenSpec make_gen_spec(const GenParams& params);

Family parse_family(const std::string& name);
const char* family_name(Family family);

// --- trace ingestion ---------------------------------------------------------

enum class KnapsackPolicy { kReplicate, kPartition };
enum class ViolationPolicy { kClamp, kDrop };

struct TraceMapping {
  std::string arrival_column = "arrival";
  std::string size_column = "size";
  std::string duration_column = "duration";
  std::optional<std::string> value_column;
  std::optional<std::string> start_column;  // defaults to arrival
  std::vector<KnapsackSpec> knapsacks;
  KnapsackPolicy knapsack_policy = KnapsackPolicy::kReplicate;
  ViolationPolicy violation_policy = ViolationPolicy::kClamp;
  double error_tolerance = 0.01;  // fraction of unparseable rows accepted
  /// Density used to synthesize values when there is no value column;
  /// defaults to the midpoint of [1, theta_k].
  std::optional<double> density_default;
  std::optional<Slot> horizon;  // defaults to the last requested slot
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_clamped = 0;
  std::size_t rows_dropped = 0;
  std::vector<std::size_t> unparseable_lines;  // 1-based file line numbers
};

struct TraceIngest {
  Instance instance;
  IngestReport report;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TraceIngest ingest_trace(const std::filesystem::path& path, const TraceMapping& mapping);
TraceIngest ingest_trace_text(const std::string& csv, const TraceMapping& mapping);

}  // namespace okd
