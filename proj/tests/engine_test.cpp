#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "okd/engine.hpp"
#include "okd/oracle.hpp"
#include "test_support.hpp"

namespace okd {
namespace {

using testing::item;
using testing::knapsack;
using testing::option;

const double kLn9 = std::log(9.0);

TEST(OtaAdmit, EmptyKnapsackAdmits) {
  const auto fn = ThresholdFn::exponential(kLn9, 10.0);
  const std::vector<double> z(3, 0.0);
  const auto r = ota_admit({5, 1, {1, 3}, &fn, z, 10});
  EXPECT_TRUE(r.admissible);
  EXPECT_EQ(r.threshold_value, 0.0);
}

TEST(OtaAdmit, HalfFullRejectsBelowThreshold) {
  const auto fn = ThresholdFn::exponential(kLn9, 10.0);
  const std::vector<double> z(3, 5.0);
  const auto r = ota_admit({5, 1, {1, 3}, &fn, z, 10});
  EXPECT_FALSE(r.admissible);
  EXPECT_NEAR(r.threshold_value, 6.0, 1e-12);
}

TEST(OtaAdmit, CapacityClauseDominatesValue) {
  const auto fn = ThresholdFn::exponential(kLn9, 10.0);
  const std::vector<double> z{9.0};
  EXPECT_FALSE(ota_admit({100, 2, {4, 1}, &fn, z, 10}).admissible);
}

TEST(OtaAdmit, TieAdmits) {
  const auto fn = ThresholdFn::table(10.0, {{0, 0}, {10, 10}});
  const std::vector<double> z{2.0, 3.0};
  // Phi = 1 * (2 + 3) = 5
  const auto r = ota_admit({5, 1, {1, 2}, &fn, z, 10});
  EXPECT_EQ(r.threshold_value, 5.0);
  EXPECT_TRUE(r.admissible);
}

TEST(OtaAdmit, ContractErrors) {
  const auto fn = ThresholdFn::exponential(1.0, 10.0);
  const std::vector<double> two(2, 0.0);
  EXPECT_THROW(ota_admit({1, 1, {1, 3}, &fn, two, 10}), std::invalid_argument);
  EXPECT_THROW(ota_admit({1, 1, {1, 2}, nullptr, two, 10}), std::invalid_argument);
  const std::vector<double> over{11.0};
  EXPECT_THROW(ota_admit({1, 1, {1, 1}, &fn, over, 10}), std::domain_error);
}

Instance two_knapsacks(double v1, double v2) {
  Instance inst;
  inst.horizon = 4;
  inst.knapsacks = {knapsack(10), knapsack(10)};
  inst.items = {item(0, 1, {option(1, v1, 1, 2), option(1, v2, 1, 2)})};
  return inst;
}

TEST(OaOkdStep, AssignsToLargestValue) {
  const Instance inst = two_knapsacks(3, 5);
  const auto fns = make_thresholds(inst, {1.0, {}});
  UtilizationState state(2, inst.horizon);
  const auto out = oa_okd_step(inst.items[0], state, fns, inst.knapsacks);
  EXPECT_EQ(out.decision.knapsack, 1u);
  EXPECT_EQ(state.at(1, 2), 1.0);
  EXPECT_EQ(state.at(0, 2), 0.0);
}

TEST(OaOkdStep, TiesGoToLowestIndex) {
  const Instance inst = two_knapsacks(4, 4);
  const auto fns = make_thresholds(inst, {1.0, {}});
  UtilizationState state(2, inst.horizon);
  EXPECT_EQ(oa_okd_step(inst.items[0], state, fns, inst.knapsacks).decision.knapsack, 0u);
}

TEST(OaOkdStep, DeclineLeavesStateUnchanged) {
  Instance inst = two_knapsacks(4, 4);
  inst.knapsacks[0].capacity = inst.knapsacks[1].capacity = 0.5;
  const auto fns = make_thresholds(inst, {1.0, {}});
  UtilizationState state(2, inst.horizon);
  const auto out = oa_okd_step(inst.items[0], state, fns, inst.knapsacks);
  EXPECT_FALSE(out.decision.admitted());
  EXPECT_TRUE(state.occupied(0).empty());
  EXPECT_TRUE(state.occupied(1).empty());
}

TEST(OaOkdStep, IneligibleKnapsackNeverQueried) {
  Instance inst = two_knapsacks(4, 100);
  inst.items[0].options[1] = testing::ineligible();
  const auto fns = make_thresholds(inst, {1.0, {}});
  UtilizationState state(2, inst.horizon);
  const auto out = oa_okd_step(inst.items[0], state, fns, inst.knapsacks);
  EXPECT_EQ(out.decision.knapsack, 0u);
  EXPECT_FALSE(out.trace.phi[1].has_value());
}

TEST(Run, EmptyAndSingle) {
  Instance empty;
  empty.horizon = 3;
  empty.knapsacks = {knapsack(1)};
  const auto fns = make_thresholds(empty, {});
  const auto r0 = run(empty, fns);
  EXPECT_EQ(r0.profit, 0.0);
  EXPECT_TRUE(r0.decisions.empty());

  Instance one = empty;
  one.items = {item(0, 1, {option(1, 7, 1, 1)})};
  EXPECT_EQ(run(one, fns).profit, 7.0);
}

TEST(Run, ThresholdCountMismatchThrows) {
  const Instance inst = two_knapsacks(1, 1);
  const auto fns = make_thresholds(inst, {});
  EXPECT_THROW(run(inst, std::span(fns).first(1)), std::invalid_argument);
}

// Step-by-step replay through ota_admit only, with its own utilization table.
double replay_profit(const Instance& inst, const std::vector<ThresholdFn>& fns,
                     std::vector<std::optional<std::size_t>>* choices) {
  std::vector<std::map<Slot, double>> z(inst.knapsacks.size());
  double profit = 0.0;
  for (const Item& it : inst.items) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < inst.knapsacks.size(); ++k) {
      const auto& opt = it.options[k];
      if (!opt.eligible) continue;
      std::vector<double> snap;
      for (Slot t = opt.interval.start; t <= opt.interval.last(); ++t) snap.push_back(z[k][t]);
      const auto r =
          ota_admit({opt.value, opt.size, opt.interval, &fns[k], snap, inst.knapsacks[k].capacity});
      if (r.admissible && (!best || opt.value > it.options[*best].value)) best = k;
    }
    choices->push_back(best);
    if (best) {
      const auto& opt = it.options[*best];
      for (Slot t = opt.interval.start; t <= opt.interval.last(); ++t) z[*best][t] += opt.size;
      profit += opt.value;
    }
  }
  return profit;
}

// Fully independent re-derivation of the exponential-threshold algorithm.
std::vector<std::optional<std::size_t>> reference_decisions(const Instance& inst,
                                                            const std::vector<double>& gammas) {
  std::vector<std::vector<double>> z(inst.knapsacks.size(),
                                     std::vector<double>(inst.horizon + 1, 0.0));
  std::vector<std::optional<std::size_t>> out;
  for (const Item& it : inst.items) {
    std::optional<std::size_t> best;
    double best_value = -1;
    for (std::size_t k = 0; k < inst.knapsacks.size(); ++k) {
      const auto& o = it.options[k];
      if (!o.eligible) continue;
      const double cap = inst.knapsacks[k].capacity;
      double phi = 0.0;
      bool fits = true;
      for (Slot t = o.interval.start; t <= o.interval.last(); ++t) {
        phi += o.size * (std::exp(z[k][t] * gammas[k] / cap) - 1.0);
        fits = fits && z[k][t] + o.size <= cap;
      }
      if (fits && o.value >= phi && o.value > best_value) {
        best = k;
        best_value = o.value;
      }
    }
    if (best) {
      const auto& o = it.options[*best];
      for (Slot t = o.interval.start; t <= o.interval.last(); ++t) z[*best][t] += o.size;
    }
    out.push_back(best);
  }
  return out;
}

TEST(Run, MatchesReplayOracleSeed42) {
  const Instance inst = testing::random_instance(42, 20, 2, 12);
  const auto fns = make_thresholds(inst, {});
  const RunResult r = run(inst, fns);
  std::vector<std::optional<std::size_t>> choices;
  const double replayed = replay_profit(inst, fns, &choices);
  EXPECT_EQ(r.profit, replayed);
  for (std::size_t i = 0; i < choices.size(); ++i) EXPECT_EQ(r.decisions[i].knapsack, choices[i]);
  EXPECT_GT(r.profit, 0.0);
}

TEST(Run, AgreesWithIndependentReference) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = testing::random_instance(seed, 30, 1 + seed % 4, 15, 0.7);
    const auto gammas = resolve_gammas(inst, {});
    const RunResult r = run(inst, make_thresholds(inst, {}));
    const auto ref = reference_decisions(inst, gammas);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      ASSERT_EQ(r.decisions[i].knapsack, ref[i]) << "seed " << seed << " item " << i;
    }
  }
}

TEST(RunProperties, FeasibleSingleAssignmentAuditedAndBelowOpt) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance inst = testing::random_instance(seed, 1 + seed % 12, 1 + seed % 3, 10, 0.8);
    const auto fns = make_thresholds(inst, {});
    const RunResult r = run(inst, fns);
    ASSERT_EQ(r.decisions.size(), inst.items.size());
    EXPECT_TRUE(r.final_state.within_capacity(inst.knapsacks));

    // constraint (1b) recomputed from the decisions
    std::vector<std::vector<double>> load(inst.knapsacks.size(),
                                          std::vector<double>(inst.horizon + 1, 0.0));
    double profit = 0.0;
    UtilizationState before(inst.knapsacks.size(), inst.horizon);
    for (std::size_t n = 0; n < inst.items.size(); ++n) {
      const auto& d = r.decisions[n];
      EXPECT_EQ(d.item_id, inst.items[n].id);
      const auto& tr = r.trace[n];
      for (std::size_t k = 0; k < inst.knapsacks.size(); ++k) {
        const auto& o = inst.items[n].options[k];
        if (!o.eligible) continue;
        bool fits = true;
        for (double z : before.snapshot(k, o.interval)) {
          fits = fits && z + o.size <= inst.knapsacks[k].capacity;
        }
        // threshold audit: admissible iff Phi <= v, among capacity-feasible knapsacks
        if (fits) EXPECT_EQ(*tr.admissible[k], *tr.phi[k] <= o.value);
        if (!fits) EXPECT_FALSE(*tr.admissible[k]);
      }
      if (d.knapsack) {
        const auto& o = inst.items[n].options[*d.knapsack];
        ASSERT_TRUE(o.eligible);
        for (Slot t = o.interval.start; t <= o.interval.last(); ++t) load[*d.knapsack][t] += o.size;
        profit += o.value;
        EXPECT_LE(*tr.phi[*d.knapsack], o.value);
        before.add(*d.knapsack, o.interval, o.size);
      }
    }
    for (std::size_t k = 0; k < load.size(); ++k) {
      for (double z : load[k]) EXPECT_LE(z, inst.knapsacks[k].capacity);
    }
    EXPECT_EQ(profit, r.profit);
    const OfflineSolution opt = solve_exact(inst);
    ASSERT_TRUE(opt.exact());
    EXPECT_LE(r.profit, opt.objective + 1e-9);
  }
}

TEST(RunProperties, UtilizationIsMonotoneOverTheSequence) {
  const Instance inst = testing::random_instance(9, 40, 2, 20);
  const auto fns = make_thresholds(inst, {});
  UtilizationState state(inst.knapsacks.size(), inst.horizon);
  for (const Item& it : inst.items) {
    const UtilizationState before = state;
    oa_okd_step(it, state, fns, inst.knapsacks);
    for (std::size_t k = 0; k < inst.knapsacks.size(); ++k) {
      for (Slot t = 1; t <= inst.horizon; ++t) EXPECT_GE(state.at(k, t), before.at(k, t));
    }
  }
}

TEST(RunProperties, RaisingDeclinedValueToPhiAdmits) {
  int flipped = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = testing::random_instance(seed, 25, 1, 10);
    const auto fns = make_thresholds(inst, {});
    const RunResult r = run(inst, fns);
    for (std::size_t n = 0; n < inst.items.size(); ++n) {
      if (r.decisions[n].admitted()) continue;
      const auto& o = inst.items[n].options[0];
      UtilizationState replay(1, inst.horizon);
      for (std::size_t m = 0; m < n; ++m) oa_okd_step(inst.items[m], replay, fns, inst.knapsacks);
      bool fits = true;
      for (double z : replay.snapshot(0, o.interval)) fits = fits && z + o.size <= 10.0;
      if (!fits) continue;
      Instance raised = inst;
      raised.items[n].options[0].value = *r.trace[n].phi[0];
      EXPECT_TRUE(run(raised, fns).decisions[n].admitted());
      ++flipped;
      break;
    }
  }
  EXPECT_GT(flipped, 0);
}

TEST(RunProperties, Deterministic) {
  const Instance inst = testing::random_instance(3, 30, 3, 12);
  const auto fns = make_thresholds(inst, {});
  const RunResult a = run(inst, fns);
  const RunResult b = run(inst, fns);
  EXPECT_EQ(a.decisions, b.decisions);
  EXPECT_EQ(a.profit, b.profit);
}

}  // namespace
}  // namespace okd
