// Domain types for the online multiple-knapsack problem with departures.
//
// Time is slotted: slots are integers 1..T. An item occupies capacity in a
// knapsack only during the consecutive slots it requests, so capacity
// constraints are enforced per slot.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace okd {

using Slot = std::int64_t;

/// Relative slack used when checking declared bounds against values that
/// were produced by floating-point arithmetic (densities, sizes).
inline constexpr double kBoundTolerance = 1e-9;

/// Thrown for structurally malformed input: inconsistent lengths, intervals
/// outside the horizon, nonpositive sizes. Always fatal.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SlotInterval {
  Slot start = 1;
  Slot duration = 1;

  Slot last() const { return start + duration - 1; }
  bool contains(Slot t) const { return t >= start && t <= last(); }

  friend bool operator==(const SlotInterval&, const SlotInterval&) = default;
};

/// What item n looks like from the point of view of knapsack k.
struct ItemOption {
  double size = 0.0;
  double value = 0.0;
  SlotInterval interval;
  bool eligible = false;

  double density() const {
    return value / (size * static_cast<double>(interval.duration));
  }

  friend bool operator==(const ItemOption&, const ItemOption&) = default;
};

struct Item {
  std::int64_t id = 0;
  Slot arrival = 1;
  std::vector<ItemOption> options;  // one per knapsack

  bool has_eligible_option() const;

  friend bool operator==(const Item&, const Item&) = default;
};

struct KnapsackSpec {
  double capacity = 1.0;
  double density_ratio = 1.0;  // theta
  Slot duration_lo = 1;
  Slot duration_hi = 1;
  double size_cap = 1.0;       // epsilon

  double duration_ratio() const {
    return static_cast<double>(duration_hi) / static_cast<double>(duration_lo);
  }

  friend bool operator==(const KnapsackSpec&, const KnapsackSpec&) = default;
};

struct Instance {
  Slot horizon = 0;
  std::vector<KnapsackSpec> knapsacks;
  std::vector<Item> items;

  std::size_t num_knapsacks() const { return knapsacks.size(); }
  std::size_t num_items() const { return items.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Per-knapsack, per-slot committed size z_{kt}. Dense storage is used when
/// the horizon is small enough; otherwise slots are kept in an ordered map
/// and absent slots read as zero.
class UtilizationState {
 public:
  static constexpr Slot kDenseHorizonLimit = 1'000'000;

  UtilizationState() = default;
  UtilizationState(std::size_t num_knapsacks, Slot horizon);

  std::size_t num_knapsacks() const { return num_knapsacks_; }
  Slot horizon() const { return horizon_; }
  bool dense() const { return dense_; }

  double at(std::size_t k, Slot t) const;

  /// Utilization of knapsack k over each slot of `interval`, in slot order.
  std::vector<double> snapshot(std::size_t k, const SlotInterval& interval) const;

  /// z_{kt} += size for every t in `interval`.
  void add(std::size_t k, const SlotInterval& interval, double size);

  /// Overwrites the slots of `interval` with previously saved values.
  void restore(std::size_t k, const SlotInterval& interval,
               std::span<const double> saved);

  /// Largest z_{kt} over all slots of knapsack k.
  double peak(std::size_t k) const;

  /// True when every slot satisfies 0 <= z_{kt} <= C_k.
  bool within_capacity(std::span<const KnapsackSpec> specs) const;

  /// Slots with nonzero utilization, ascending.
  std::vector<std::pair<Slot, double>> occupied(std::size_t k) const;

 private:
  void check_slot(std::size_t k, Slot t) const;

  std::size_t num_knapsacks_ = 0;
  Slot horizon_ = 0;
  bool dense_ = true;
  std::vector<std::vector<double>> dense_slots_;
  std::vector<std::map<Slot, double>> sparse_slots_;
};

/// x_n: the knapsack item n was assigned to, or nothing if declined.
struct Decision {
  std::int64_t item_id = 0;
  std::optional<std::size_t> knapsack;

  bool admitted() const { return knapsack.has_value(); }

  friend bool operator==(const Decision&, const Decision&) = default;
};

enum class Severity { kWarning, kError };

struct ValidationIssue {
  Severity severity = Severity::kWarning;
  std::optional<std::size_t> knapsack;
  std::optional<std::int64_t> item;
  std::string message;
};

/// Observed value against declared bound, per knapsack.
struct KnapsackObservation {
  std::size_t eligible_options = 0;
  double density_min = 0.0;
  double density_max = 0.0;
  Slot duration_min = 0;
  Slot duration_max = 0;
  double size_max = 0.0;
  double density_ratio = 1.0;  // declared theta
  Slot duration_lo = 1;
  Slot duration_hi = 1;
  double size_cap = 0.0;
  std::optional<double> gamma;
  std::optional<double> size_precondition;  // C ln2 / gamma
};

struct ValidationReport {
  bool strict = false;
  std::vector<KnapsackObservation> knapsacks;
  std::vector<ValidationIssue> issues;

  /// No assumption violations (warnings about s < a and vacuous items are
  /// informational and do not count).
  bool assumptions_hold() const { return violations == 0; }
  std::size_t violations = 0;
};

/// Thrown by validate_instance(strict=true) when an assumption is violated.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, ValidationReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Throws InstanceError on structural problems (lengths, horizon, sign,
/// ordering). Assumption checks are left to validate_instance.
void check_structure(const Instance& inst);

/// Checks the density, duration and size assumptions per knapsack, and the
/// size precondition eps_k <= C_k ln2 / gamma_k when `gammas` is nonempty.
/// Structural problems always throw InstanceError; assumption violations
/// throw ValidationError under `strict`, otherwise they are reported as
/// warnings.
ValidationReport validate_instance(const Instance& inst, bool strict,
                                   std::span<const double> gammas = {});

struct ObservedParameters {
  double density_ratio = 1.0;   // max density
  double duration_ratio = 1.0;  // max d / min d
  double size_max = 0.0;

  friend bool operator==(const ObservedParameters&,
                         const ObservedParameters&) = default;
};

/// Tightest parameters consistent with the instance, per knapsack.
/// Knapsacks without eligible options report (1, 1, 0).
std::vector<ObservedParameters> observed_parameters(const Instance& inst);

}  // namespace okd
