#include "okd/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace okd {

namespace {

// Relative slack on pruning bounds so that floating-point rounding in the
// bound never discards a subtree that holds the optimum.
constexpr double kPruneSlack = 1e-12;

struct Child {
  std::size_t knapsack;
  double value;
};

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, std::uint64_t budget)
      : inst_(inst),
        budget_(budget),
        K_(inst.knapsacks.size()),
        N_(inst.items.size()),
        state_(K_, inst.horizon),
        current_(N_) {
    children_.resize(N_);
    suffix_value_.assign(N_ + 1, 0.0);
    suffix_density_.assign(N_ + 1, std::vector<double>(K_, 0.0));
    suffix_slots_.assign(N_ + 1, std::vector<std::vector<Slot>>(K_));

    for (std::size_t i = 0; i < N_; ++i) {
      const Item& item = inst.items[i];
      for (std::size_t k = 0; k < K_; ++k) {
        if (item.options[k].eligible) children_[i].push_back({k, item.options[k].value});
      }
      // Highest value first, ties to the lowest index; decline comes last.
      std::stable_sort(children_[i].begin(), children_[i].end(),
                       [](const Child& a, const Child& b) { return a.value > b.value; });
    }

    std::vector<std::set<Slot>> slots(K_);
    for (std::size_t i = N_; i-- > 0;) {
      const Item& item = inst.items[i];
      double best = 0.0;
      suffix_density_[i] = suffix_density_[i + 1];
      for (std::size_t k = 0; k < K_; ++k) {
        const ItemOption& opt = item.options[k];
        if (!opt.eligible) continue;
        best = std::max(best, opt.value);
        suffix_density_[i][k] = std::max(suffix_density_[i][k], opt.density());
        for (Slot t = opt.interval.start; t <= opt.interval.last(); ++t) slots[k].insert(t);
      }
      suffix_value_[i] = suffix_value_[i + 1] + best;
      for (std::size_t k = 0; k < K_; ++k) {
        suffix_slots_[i][k].assign(slots[k].begin(), slots[k].end());
      }
    }
  }

  OfflineSolution solve() {
    seed_incumbent();
    search(0, 0.0);

    OfflineSolution out;
    out.assignment = best_assignment_;
    out.objective = best_;
    out.nodes = nodes_;
    if (exhausted_) {
      out.proof = ProofKind::kUpperBoundOnly;
      out.bound = std::max(best_, std::min(root_bound_, upper_bound(inst_)));
    } else {
      out.proof = ProofKind::kExact;
      out.bound = best_;
    }
    return out;
  }

 private:
  double bound_at(std::size_t i, double cur) const {
    double area_bound = 0.0;
    for (std::size_t k = 0; k < K_; ++k) {
      const double rho = suffix_density_[i][k];
      if (rho == 0.0) continue;
      const double cap = inst_.knapsacks[k].capacity;
      double free_area = 0.0;
      for (Slot t : suffix_slots_[i][k]) free_area += std::max(0.0, cap - state_.at(k, t));
      area_bound += rho * free_area;
    }
    return cur + std::min(suffix_value_[i], area_bound);
  }

  bool fits(std::size_t k, const ItemOption& opt) const {
    const double cap = inst_.knapsacks[k].capacity;
    for (Slot t = opt.interval.start; t <= opt.interval.last(); ++t) {
      if (!(state_.at(k, t) + opt.size <= cap)) return false;
    }
    return true;
  }

  // Density-greedy incumbent, kept only if it survives an in-order replay so
  // that its objective is computed exactly like every other leaf.
  void seed_incumbent() {
    std::vector<std::size_t> order(N_);
    std::iota(order.begin(), order.end(), 0);
    auto item_density = [&](std::size_t i) {
      double d = 0.0;
      for (const auto& opt : inst_.items[i].options) {
        if (opt.eligible) d = std::max(d, opt.density());
      }
      return d;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return item_density(a) > item_density(b);
    });

    std::vector<std::optional<std::size_t>> assignment(N_);
    for (std::size_t i : order) {
      for (const Child& c : children_[i]) {
        const ItemOption& opt = inst_.items[i].options[c.knapsack];
        if (fits(c.knapsack, opt)) {
          state_.add(c.knapsack, opt.interval, opt.size);
          assignment[i] = c.knapsack;
          break;
        }
      }
    }
    state_ = UtilizationState(K_, inst_.horizon);
    if (auto value = evaluate_assignment(inst_, assignment)) {
      best_ = *value;
      best_assignment_ = assignment;
    } else {
      best_assignment_.assign(N_, std::nullopt);
    }
    root_bound_ = bound_at(0, 0.0);
  }

  void search(std::size_t i, double cur) {
    if (exhausted_) return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    if (i == N_) {
      if (cur > best_) {
        best_ = cur;
        best_assignment_ = current_;
      }
      return;
    }
    const double bound = bound_at(i, cur);
    if (bound * (1.0 + kPruneSlack) + kPruneSlack <= best_) return;

    const Item& item = inst_.items[i];
    for (const Child& c : children_[i]) {
      const ItemOption& opt = item.options[c.knapsack];
      if (!fits(c.knapsack, opt)) continue;
      const auto saved = state_.snapshot(c.knapsack, opt.interval);
      state_.add(c.knapsack, opt.interval, opt.size);
      current_[i] = c.knapsack;
      search(i + 1, cur + opt.value);
      current_[i].reset();
      state_.restore(c.knapsack, opt.interval, saved);
      if (exhausted_) return;
    }
    search(i + 1, cur);
  }

  const Instance& inst_;
  std::uint64_t budget_;
  std::size_t K_;
  std::size_t N_;
  UtilizationState state_;
  std::vector<std::optional<std::size_t>> current_;
  std::vector<std::vector<Child>> children_;
  std::vector<double> suffix_value_;
  std::vector<std::vector<double>> suffix_density_;
  std::vector<std::vector<std::vector<Slot>>> suffix_slots_;

  double best_ = 0.0;
  std::vector<std::optional<std::size_t>> best_assignment_;
  double root_bound_ = 0.0;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace

OfflineSolution solve_exact(const Instance& inst, std::uint64_t node_budget) {
  check_structure(inst);
  return BranchAndBound(inst, node_budget).solve();
}

OfflineSolution solve_bruteforce(const Instance& inst) {
  check_structure(inst);
  const std::size_t K = inst.knapsacks.size();
  const std::size_t N = inst.items.size();

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < N; ++i) {
    if (total > kBruteforceLimit / (K + 1)) {
      throw OracleSizeError("brute force refused: (K+1)^N = " + std::to_string(K + 1) + "^" +
                            std::to_string(N) + " exceeds " +
                            std::to_string(kBruteforceLimit));
    }
    total *= K + 1;
  }

  // Compress each knapsack's requested slots to 0..m-1.
  std::vector<std::map<Slot, std::size_t>> slot_index(K);
  for (const Item& item : inst.items) {
    for (std::size_t k = 0; k < K; ++k) {
      const auto& opt = item.options[k];
      if (!opt.eligible) continue;
      for (Slot t = opt.interval.start; t <= opt.interval.last(); ++t) {
        slot_index[k].emplace(t, 0);
      }
    }
  }
  for (auto& m : slot_index) {
    std::size_t next = 0;
    for (auto& [t, idx] : m) idx = next++;
  }
  std::vector<std::vector<std::vector<std::size_t>>> cells(
      N, std::vector<std::vector<std::size_t>>(K));
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t k = 0; k < K; ++k) {
      const auto& opt = inst.items[n].options[k];
      if (!opt.eligible) continue;
      for (Slot t = opt.interval.start; t <= opt.interval.last(); ++t) {
        cells[n][k].push_back(slot_index[k].at(t));
      }
    }
  }

  std::vector<std::vector<double>> load(K);
  for (std::size_t k = 0; k < K; ++k) load[k].resize(slot_index[k].size());

  OfflineSolution out;
  out.assignment.assign(N, std::nullopt);
  std::vector<std::size_t> digit(N, 0);  // 0 = decline, k + 1 = knapsack k
  for (std::uint64_t code = 0; code < total; ++code) {
    if (code > 0) {
      for (std::size_t n = 0; n < N; ++n) {
        if (++digit[n] <= K) break;
        digit[n] = 0;
      }
    }
    ++out.nodes;

    bool ok = true;
    for (std::size_t n = 0; n < N && ok; ++n) {
      if (digit[n] != 0 && !inst.items[n].options[digit[n] - 1].eligible) ok = false;
    }
    if (!ok) continue;

    for (auto& l : load) std::fill(l.begin(), l.end(), 0.0);
    double value = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      if (digit[n] == 0) continue;
      const std::size_t k = digit[n] - 1;
      const auto& opt = inst.items[n].options[k];
      for (std::size_t c : cells[n][k]) load[k][c] += opt.size;
      value += opt.value;
    }
    for (std::size_t k = 0; k < K && ok; ++k) {
      for (double z : load[k]) {
        if (z > inst.knapsacks[k].capacity) {
          ok = false;
          break;
        }
      }
    }
    if (ok && value > out.objective) {
      out.objective = value;
      for (std::size_t n = 0; n < N; ++n) {
        out.assignment[n] = digit[n] == 0 ? std::nullopt
                                          : std::optional<std::size_t>(digit[n] - 1);
      }
    }
  }
  out.bound = out.objective;
  return out;
}

double upper_bound(const Instance& inst) {
  const std::size_t K = inst.knapsacks.size();
  double by_value = 0.0;
  std::vector<std::set<Slot>> used(K);
  std::vector<double> rho(K, 0.0);
  for (const Item& item : inst.items) {
    double best = 0.0;
    for (std::size_t k = 0; k < K && k < item.options.size(); ++k) {
      const auto& opt = item.options[k];
      if (!opt.eligible) continue;
      best = std::max(best, opt.value);
      rho[k] = std::max(rho[k], opt.density());
      for (Slot t = opt.interval.start; t <= opt.interval.last(); ++t) used[k].insert(t);
    }
    by_value += best;
  }
  double by_area = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    by_area += rho[k] * inst.knapsacks[k].capacity * static_cast<double>(used[k].size());
  }
  return std::min(by_value, by_area);
}

std::optional<double> evaluate_assignment(
    const Instance& inst, const std::vector<std::optional<std::size_t>>& assignment) {
  if (assignment.size() != inst.items.size()) {
    throw std::invalid_argument("assignment length does not match item count");
  }
  UtilizationState state(inst.knapsacks.size(), inst.horizon);
  double value = 0.0;
  for (std::size_t n = 0; n < assignment.size(); ++n) {
    if (!assignment[n]) continue;
    const std::size_t k = *assignment[n];
    if (k >= inst.knapsacks.size()) return std::nullopt;
    const auto& opt = inst.items[n].options[k];
    if (!opt.eligible) return std::nullopt;
    for (Slot t = opt.interval.start; t <= opt.interval.last(); ++t) {
      if (!(state.at(k, t) + opt.size <= inst.knapsacks[k].capacity)) return std::nullopt;
    }
    state.add(k, opt.interval, opt.size);
    value += opt.value;
  }
  return value;
}

}  // namespace okd
