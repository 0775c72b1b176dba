// Online admission control. `ota_admit` decides whether a single knapsack
// would accept an item; `oa_okd_step` queries every eligible knapsack and
// assigns the item to the admissible one with the largest value; `run`
// replays a whole instance from empty knapsacks.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "okd/core.hpp"
#include "okd/threshold.hpp"

namespace okd {

struct AdmissionQuery {
  double value = 0.0;
  double size = 0.0;
  SlotInterval interval;
  const ThresholdFn* threshold = nullptr;
  std::span<const double> utilization;  // z_t for each t in interval, in order
  double capacity = 0.0;
};

struct AdmissionResult {
  bool admissible = false;
  double threshold_value = 0.0;  // Phi = sum_t w * phi(z_t)
};

/// Throws std::invalid_argument if the snapshot does not cover the interval
/// or no threshold is supplied, std::domain_error if some z_t is outside
/// [0, C].
AdmissionResult ota_admit(const AdmissionQuery& q);

/// Audit record for one item: Phi and the admission bit for every knapsack
/// that was queried (ineligible knapsacks hold nullopt).
struct ItemTrace {
  std::int64_t item_id = 0;
  std::vector<std::optional<double>> phi;
  std::vector<std::optional<bool>> admissible;
  std::optional<std::size_t> knapsack;
};

struct StepOutcome {
  Decision decision;
  ItemTrace trace;
};

/// Processes one item against `state` and commits the assignment, if any.
/// Ties on value go to the lowest knapsack index.
StepOutcome oa_okd_step(const Item& item, UtilizationState& state,
                        std::span<const ThresholdFn> thresholds,
                        std::span<const KnapsackSpec> specs);

struct RunResult {
  std::vector<Decision> decisions;
  double profit = 0.0;
  UtilizationState final_state;
  std::vector<ItemTrace> trace;
};

/// Runs the online algorithm over `inst` in item order from all-zero
/// utilization. Throws InstanceError on structural problems.
RunResult run(const Instance& inst, std::span<const ThresholdFn> thresholds);

}  // namespace okd
