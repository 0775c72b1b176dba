// Empirical competitive-ratio harness and band-constrained gamma tuning.
//
// Instances in a suite are independent, so evaluation is parallelized over
// instances with OpenMP. The `_serial` variants run the same per-instance
// kernel in a plain loop and are kept as the reference the parallel path is
// tested against.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "okd/core.hpp"
#include "okd/oracle.hpp"
#include "okd/threshold.hpp"

namespace okd {

struct OracleConfig {
  std::size_t exact_cutoff = 18;       // solve_exact when N <= cutoff
  std::size_t bruteforce_cutoff = 10;  // cross-check with brute force when N <= cutoff
  bool cross_check = true;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

struct BenchConfig {
  ThresholdConfig thresholds;
  OracleConfig oracle;
};

struct BenchInput {
  std::string id;
  Instance instance;
};

enum class OptKind { kExact, kUpperBound, kError };

struct BenchRow {
  std::string id;
  std::size_t n = 0;
  std::size_t k = 0;
  double alg = 0.0;
  double opt = 0.0;  // exact optimum or upper bound, see `kind`
  OptKind kind = OptKind::kError;
  double ratio = 1.0;  // opt / alg; +inf when alg = 0 < opt
  bool bruteforce_checked = false;
  std::vector<double> gammas;
  std::string error;

  bool infinite() const { return ratio == std::numeric_limits<double>::infinity(); }
};

struct BenchReport {
  std::vector<BenchRow> rows;  // ratio descending, ties by id
  std::optional<double> suite_cr;  // max ratio over exact rows; may be +inf
  std::optional<double> mean_ratio;  // over finite exact rows
  std::size_t exact_rows = 0;
  std::size_t bound_rows = 0;
  std::size_t error_rows = 0;
  BenchConfig config;
};

/// OPT / ALG with 0/0 = 1 and x/0 = +inf.
double competitive_ratio(double opt, double alg);

BenchRow evaluate_instance(const BenchInput& input, const BenchConfig& config);

std::vector<BenchRow> evaluate_rows(std::span<const BenchInput> suite,
                                    const BenchConfig& config);
std::vector<BenchRow> evaluate_rows_serial(std::span<const BenchInput> suite,
                                           const BenchConfig& config);

BenchReport assemble_report(std::vector<BenchRow> rows, const BenchConfig& config);

BenchReport bench_suite(std::span<const BenchInput> suite, const BenchConfig& config);
BenchReport bench_suite_serial(std::span<const BenchInput> suite, const BenchConfig& config);

/// One row per instance:
/// instance,n,k,alg,opt,opt_kind,ratio,bruteforce_checked,gammas,error
std::string report_csv(const BenchReport& report);

// --- gamma tuning ------------------------------------------------------------

struct TuneSpec {
  std::vector<Instance> training;
  double delta = 0.5;
  /// Candidate multipliers of the default gamma. Empty means `grid_points`
  /// evenly spaced multipliers over [1 - delta, 1 + delta].
  std::vector<double> grid;
  std::size_t grid_points = 11;
};

struct TunePoint {
  double multiplier = 1.0;
  std::vector<double> gammas;
  double mean_profit = 0.0;
};

struct TuneResult {
  static constexpr const char* kMethod = "band-constrained grid search (stand-in tuner)";

  double multiplier = 1.0;
  std::vector<double> gammas;
  std::vector<double> gamma_default;
  std::vector<double> gamma_lo;
  std::vector<double> gamma_hi;
  std::vector<TunePoint> curve;  // in grid order
};

/// Picks the grid multiplier with the largest mean online profit over the
/// training set; ties go to the multiplier closest to 1, then the smaller
/// one. All training instances must share K and each knapsack's declared
/// theta and alpha. Throws std::invalid_argument on an empty training set,
/// empty grid, delta outside [0, 1), or grid points outside the band.
TuneResult tune_gamma(const TuneSpec& spec);

/// Evenly spaced multipliers over [1 - delta, 1 + delta].
std::vector<double> band_grid(double delta, std::size_t points);

/// Mean online profit over `training` with the given per-knapsack gammas.
double mean_profit(std::span<const Instance> training, const std::vector<double>& gammas);

}  // namespace okd
