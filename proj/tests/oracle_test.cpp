#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "okd/oracle.hpp"
#include "test_support.hpp"

namespace okd {
namespace {

using testing::item;
using testing::knapsack;
using testing::option;

TEST(SolveExact, MutuallyExclusivePair) {
  Instance inst;
  inst.horizon = 3;
  inst.knapsacks = {knapsack(1)};
  inst.items = {item(0, 1, {option(1, 2, 1, 2)}), item(1, 1, {option(1, 3, 2, 2)})};
  const auto sol = solve_exact(inst);
  EXPECT_TRUE(sol.exact());
  EXPECT_EQ(sol.objective, 3.0);
  EXPECT_EQ(sol.assignment, (std::vector<std::optional<std::size_t>>{std::nullopt, 0}));
}

TEST(SolveExact, DisjointIntervalsTakeBoth) {
  Instance inst;
  inst.horizon = 4;
  inst.knapsacks = {knapsack(1)};
  inst.items = {item(0, 1, {option(1, 2, 1, 2)}), item(1, 1, {option(1, 3, 3, 2)})};
  EXPECT_EQ(solve_exact(inst).objective, 5.0);
}

TEST(SolveExact, MatchesBruteforceSeed7) {
  const Instance inst = testing::random_instance(7, 10, 2, 10);
  const auto exact = solve_exact(inst);
  const auto brute = solve_bruteforce(inst);
  ASSERT_TRUE(exact.exact());
  EXPECT_EQ(exact.objective, brute.objective);
  EXPECT_GE(upper_bound(inst), brute.objective);
}

TEST(SolveExact, BudgetExhaustionIsTagged) {
  const Instance inst = testing::random_instance(1, 18, 3, 10);
  const auto sol = solve_exact(inst, 5);
  EXPECT_EQ(sol.proof, ProofKind::kUpperBoundOnly);
  EXPECT_GE(sol.bound, sol.objective);
  const auto full = solve_exact(inst);
  ASSERT_TRUE(full.exact());
  EXPECT_GE(sol.bound, full.objective);
  EXPECT_LE(sol.objective, full.objective);
  EXPECT_TRUE(evaluate_assignment(inst, sol.assignment).has_value());
}

TEST(SolveBruteforce, Trivial) {
  Instance empty;
  empty.horizon = 1;
  empty.knapsacks = {knapsack(1)};
  EXPECT_EQ(solve_bruteforce(empty).objective, 0.0);
  EXPECT_EQ(solve_exact(empty).objective, 0.0);

  Instance one = empty;
  one.items = {item(0, 1, {option(0.5, 4, 1, 1)})};
  EXPECT_EQ(solve_bruteforce(one).objective, 4.0);
}

TEST(SolveBruteforce, ConflictTriangle) {
  // One shared slot, capacity 2 admits any two unit items; knapsack 1 is
  // too small for any of them.
  Instance inst;
  inst.horizon = 1;
  inst.knapsacks = {knapsack(2), knapsack(0.5)};
  inst.items = {item(0, 1, {option(1, 2, 1, 1), option(1, 2, 1, 1)}),
                item(1, 1, {option(1, 3, 1, 1), option(1, 3, 1, 1)}),
                item(2, 1, {option(1, 5, 1, 1), option(1, 5, 1, 1)})};
  const auto brute = solve_bruteforce(inst);
  EXPECT_EQ(brute.nodes, 27u);
  EXPECT_EQ(brute.objective, 8.0);
  EXPECT_EQ(solve_exact(inst).objective, 8.0);
}

TEST(SolveBruteforce, RefusesLargeInstances) {
  const Instance inst = testing::random_instance(1, 30, 1, 10);
  EXPECT_THROW(solve_bruteforce(inst), OracleSizeError);
}

TEST(UpperBound, Examples) {
  Instance one;
  one.horizon = 2;
  one.knapsacks = {knapsack(10)};
  one.items = {item(0, 1, {option(1, 7, 1, 1)})};
  EXPECT_EQ(upper_bound(one), 7.0);

  Instance all_fit = one;
  all_fit.items.push_back(item(1, 1, {option(2, 3, 1, 2)}));
  EXPECT_GE(upper_bound(all_fit), solve_exact(all_fit).objective);
  EXPECT_EQ(solve_exact(all_fit).objective, 10.0);
}

TEST(OracleProperties, ExactEqualsBruteforceAndIsFeasible) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const std::size_t n = 1 + seed % 9;
    const std::size_t k = 1 + seed % 3;
    const Instance inst = testing::random_instance(1000 + seed, n, k, 8, 0.7);
    const auto exact = solve_exact(inst);
    const auto brute = solve_bruteforce(inst);
    ASSERT_TRUE(exact.exact());
    ASSERT_EQ(exact.objective, brute.objective) << "seed " << seed;
    EXPECT_EQ(evaluate_assignment(inst, exact.assignment), exact.objective);
    EXPECT_EQ(evaluate_assignment(inst, brute.assignment), brute.objective);
    EXPECT_GE(upper_bound(inst), exact.objective);
  }
}

TEST(OracleProperties, PermutationStableObjective) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Instance inst = testing::random_instance(seed, 12, 2, 10);
    for (auto& it : inst.items) it.arrival = 1;
    const double base = solve_exact(inst).objective;
    std::shuffle(inst.items.begin(), inst.items.end(), rng);
    const auto shuffled = solve_exact(inst);
    EXPECT_NEAR(shuffled.objective, base, 1e-9);
    EXPECT_TRUE(evaluate_assignment(inst, shuffled.assignment).has_value());
  }
}

TEST(EvaluateAssignment, RejectsInfeasible) {
  Instance inst;
  inst.horizon = 2;
  inst.knapsacks = {knapsack(1)};
  inst.items = {item(0, 1, {option(1, 2, 1, 2)}), item(1, 1, {option(1, 3, 2, 1)})};
  EXPECT_FALSE(evaluate_assignment(inst, {0, 0}).has_value());
  EXPECT_FALSE(evaluate_assignment(inst, {1, std::nullopt}).has_value());
  EXPECT_EQ(evaluate_assignment(inst, {std::nullopt, 0}), 3.0);
}

}  // namespace
}  // namespace okd
