#include "okd/engine.hpp"

#include <stdexcept>
#include <string>

namespace okd {

AdmissionResult ota_admit(const AdmissionQuery& q) {
  if (q.threshold == nullptr) throw std::invalid_argument("admission query without threshold");
  if (q.interval.duration < 1) throw std::invalid_argument("empty interval");
  if (q.utilization.size() != static_cast<std::size_t>(q.interval.duration)) {
    throw std::invalid_argument("utilization snapshot covers " +
                                std::to_string(q.utilization.size()) + " slots, interval has " +
                                std::to_string(q.interval.duration));
  }

  const ThresholdFn& phi = *q.threshold;
  AdmissionResult out;
  bool fits = true;
  for (double z : q.utilization) {
    out.threshold_value += q.size * phi(z);
    if (!(z + q.size <= q.capacity)) fits = false;
  }
  out.admissible = q.value >= out.threshold_value && fits;
  return out;
}

StepOutcome oa_okd_step(const Item& item, UtilizationState& state,
                        std::span<const ThresholdFn> thresholds,
                        std::span<const KnapsackSpec> specs) {
  const std::size_t K = specs.size();
  StepOutcome out;
  out.decision.item_id = item.id;
  out.trace.item_id = item.id;
  out.trace.phi.assign(K, std::nullopt);
  out.trace.admissible.assign(K, std::nullopt);

  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < K; ++k) {
    const ItemOption& opt = item.options[k];
    if (!opt.eligible) continue;
    const auto snapshot = state.snapshot(k, opt.interval);
    const AdmissionQuery q{opt.value, opt.size, opt.interval, &thresholds[k], snapshot,
                           specs[k].capacity};
    const AdmissionResult r = ota_admit(q);
    out.trace.phi[k] = r.threshold_value;
    out.trace.admissible[k] = r.admissible;
    if (r.admissible && (!best || opt.value > item.options[*best].value)) best = k;
  }

  if (best) {
    const ItemOption& chosen = item.options[*best];
    state.add(*best, chosen.interval, chosen.size);
  }
  out.decision.knapsack = best;
  out.trace.knapsack = best;
  return out;
}

RunResult run(const Instance& inst, std::span<const ThresholdFn> thresholds) {
  check_structure(inst);
  if (thresholds.size() != inst.knapsacks.size()) {
    throw std::invalid_argument("expected one threshold function per knapsack");
  }

  RunResult result;
  result.final_state = UtilizationState(inst.knapsacks.size(), inst.horizon);
  result.decisions.reserve(inst.items.size());
  result.trace.reserve(inst.items.size());
  for (const Item& item : inst.items) {
    StepOutcome step = oa_okd_step(item, result.final_state, thresholds, inst.knapsacks);
    if (step.decision.knapsack) result.profit += item.options[*step.decision.knapsack].value;
    result.decisions.push_back(step.decision);
    result.trace.push_back(std::move(step.trace));
  }
  return result;
}

}  // namespace okd
