// Offline optimum of the knapsack-with-departures integer program:
//
//   max  sum_{n,k} v_nk x_nk
//   s.t. sum_{n : t in T_nk} w_nk x_nk <= C_k   for all k, t
//        sum_k x_nk <= 1                         for all n
//        x_nk in {0, 1}
//
// solve_exact is a depth-first branch and bound; solve_bruteforce enumerates
// every assignment vector and exists only to cross-check it.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "okd/core.hpp"

namespace okd {

enum class ProofKind { kExact, kUpperBoundOnly };

struct OfflineSolution {
  std::vector<std::optional<std::size_t>> assignment;  // per item, input order
  double objective = 0.0;  // value of `assignment`
  double bound = 0.0;      // == objective when exact, otherwise >= OPT
  ProofKind proof = ProofKind::kExact;
  std::uint64_t nodes = 0;

  bool exact() const { return proof == ProofKind::kExact; }
};

class OracleSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;
inline constexpr std::uint64_t kBruteforceLimit = 100'000'000;

OfflineSolution solve_exact(const Instance& inst,
                            std::uint64_t node_budget = kDefaultNodeBudget);

/// Throws OracleSizeError when (K+1)^N exceeds kBruteforceLimit.
OfflineSolution solve_bruteforce(const Instance& inst);

/// min(sum_n max_k v_nk, sum_k rho_k * C_k * |slots requested in k|), where
/// rho_k is the largest observed value density in knapsack k.
double upper_bound(const Instance& inst);

/// Objective of an assignment if it satisfies every capacity constraint,
/// nullopt otherwise. Items are added in input order.
std::optional<double> evaluate_assignment(
    const Instance& inst, const std::vector<std::optional<std::size_t>>& assignment);

}  // namespace okd
