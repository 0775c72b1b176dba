#include "okd/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "okd/threshold.hpp"

namespace okd {

bool Item::has_eligible_option() const {
  return std::any_of(options.begin(), options.end(),
                     [](const ItemOption& o) { return o.eligible; });
}

UtilizationState::UtilizationState(std::size_t num_knapsacks, Slot horizon)
    : num_knapsacks_(num_knapsacks),
      horizon_(horizon),
      dense_(horizon <= kDenseHorizonLimit) {
  if (horizon < 0) throw std::invalid_argument("negative horizon");
  if (dense_) {
    dense_slots_.assign(num_knapsacks, std::vector<double>(
                                           static_cast<std::size_t>(horizon), 0.0));
  } else {
    sparse_slots_.resize(num_knapsacks);
  }
}

void UtilizationState::check_slot(std::size_t k, Slot t) const {
  if (k >= num_knapsacks_) throw std::out_of_range("knapsack index out of range");
  if (t < 1 || t > horizon_) throw std::out_of_range("slot outside horizon");
}

double UtilizationState::at(std::size_t k, Slot t) const {
  check_slot(k, t);
  if (dense_) return dense_slots_[k][static_cast<std::size_t>(t - 1)];
  const auto& m = sparse_slots_[k];
  auto it = m.find(t);
  return it == m.end() ? 0.0 : it->second;
}

std::vector<double> UtilizationState::snapshot(std::size_t k,
                                               const SlotInterval& interval) const {
  check_slot(k, interval.start);
  check_slot(k, interval.last());
  std::vector<double> out(static_cast<std::size_t>(interval.duration));
  if (dense_) {
    const auto first = dense_slots_[k].begin() + (interval.start - 1);
    std::copy(first, first + interval.duration, out.begin());
  } else {
    for (Slot t = interval.start; t <= interval.last(); ++t) {
      out[static_cast<std::size_t>(t - interval.start)] = at(k, t);
    }
  }
  return out;
}

void UtilizationState::add(std::size_t k, const SlotInterval& interval,
                           double size) {
  check_slot(k, interval.start);
  check_slot(k, interval.last());
  if (dense_) {
    auto& slots = dense_slots_[k];
    for (Slot t = interval.start; t <= interval.last(); ++t) {
      slots[static_cast<std::size_t>(t - 1)] += size;
    }
  } else {
    auto& m = sparse_slots_[k];
    for (Slot t = interval.start; t <= interval.last(); ++t) m[t] += size;
  }
}

void UtilizationState::restore(std::size_t k, const SlotInterval& interval,
                               std::span<const double> saved) {
  if (saved.size() != static_cast<std::size_t>(interval.duration)) {
    throw std::invalid_argument("saved snapshot does not match interval");
  }
  check_slot(k, interval.start);
  check_slot(k, interval.last());
  for (Slot t = interval.start; t <= interval.last(); ++t) {
    const double v = saved[static_cast<std::size_t>(t - interval.start)];
    if (dense_) {
      dense_slots_[k][static_cast<std::size_t>(t - 1)] = v;
    } else if (v == 0.0) {
      sparse_slots_[k].erase(t);
    } else {
      sparse_slots_[k][t] = v;
    }
  }
}

double UtilizationState::peak(std::size_t k) const {
  if (k >= num_knapsacks_) throw std::out_of_range("knapsack index out of range");
  double best = 0.0;
  if (dense_) {
    for (double z : dense_slots_[k]) best = std::max(best, z);
  } else {
    for (const auto& [t, z] : sparse_slots_[k]) best = std::max(best, z);
  }
  return best;
}

bool UtilizationState::within_capacity(std::span<const KnapsackSpec> specs) const {
  if (specs.size() != num_knapsacks_) return false;
  for (std::size_t k = 0; k < num_knapsacks_; ++k) {
    for (const auto& [t, z] : occupied(k)) {
      if (z < 0.0 || z > specs[k].capacity) return false;
    }
  }
  return true;
}

std::vector<std::pair<Slot, double>> UtilizationState::occupied(std::size_t k) const {
  if (k >= num_knapsacks_) throw std::out_of_range("knapsack index out of range");
  std::vector<std::pair<Slot, double>> out;
  if (dense_) {
    const auto& slots = dense_slots_[k];
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i] != 0.0) out.emplace_back(static_cast<Slot>(i + 1), slots[i]);
    }
  } else {
    for (const auto& [t, z] : sparse_slots_[k]) {
      if (z != 0.0) out.emplace_back(t, z);
    }
  }
  return out;
}

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

[[noreturn]] void structural(const std::string& msg) { throw InstanceError(msg); }

std::string where(std::size_t k, std::int64_t item) {
  std::ostringstream os;
  os << "knapsack " << k << ", item " << item << ": ";
  return os.str();
}

}  // namespace

void check_structure(const Instance& inst) {
  if (inst.horizon < 0) structural("horizon must be nonnegative");
  if (inst.knapsacks.empty()) structural("instance needs at least one knapsack");

  for (std::size_t k = 0; k < inst.knapsacks.size(); ++k) {
    const auto& spec = inst.knapsacks[k];
    const std::string prefix = "knapsack " + std::to_string(k) + ": ";
    if (!finite_positive(spec.capacity)) structural(prefix + "capacity must be > 0");
    if (!std::isfinite(spec.density_ratio) || spec.density_ratio < 1.0) {
      structural(prefix + "theta must be >= 1");
    }
    if (spec.duration_lo < 1) structural(prefix + "duration_lo must be >= 1");
    if (spec.duration_hi < spec.duration_lo) {
      structural(prefix + "duration_hi must be >= duration_lo");
    }
    if (!finite_positive(spec.size_cap)) structural(prefix + "size_cap must be > 0");
  }

  Slot prev_arrival = std::numeric_limits<Slot>::min();
  for (const auto& item : inst.items) {
    const std::string prefix = "item " + std::to_string(item.id) + ": ";
    if (item.options.size() != inst.knapsacks.size()) {
      structural(prefix + "expected " + std::to_string(inst.knapsacks.size()) +
                 " options, got " + std::to_string(item.options.size()));
    }
    if (item.arrival < 1 || item.arrival > inst.horizon) {
      structural(prefix + "arrival outside [1, horizon]");
    }
    if (item.arrival < prev_arrival) structural(prefix + "items not sorted by arrival");
    prev_arrival = item.arrival;

    for (std::size_t k = 0; k < item.options.size(); ++k) {
      const auto& opt = item.options[k];
      if (!opt.eligible) continue;
      if (!finite_positive(opt.size)) structural(where(k, item.id) + "size must be > 0");
      if (!finite_positive(opt.value)) structural(where(k, item.id) + "value must be > 0");
      if (opt.interval.start < 1 || opt.interval.duration < 1) {
        structural(where(k, item.id) + "interval must have start >= 1 and duration >= 1");
      }
      if (opt.interval.last() > inst.horizon) {
        structural(where(k, item.id) + "interval exceeds horizon " +
                   std::to_string(inst.horizon));
      }
    }
  }
}

ValidationReport validate_instance(const Instance& inst, bool strict,
                                   std::span<const double> gammas) {
  check_structure(inst);
  const std::size_t K = inst.knapsacks.size();
  if (!gammas.empty() && gammas.size() != K) {
    throw std::invalid_argument("expected one gamma per knapsack");
  }

  ValidationReport report;
  report.strict = strict;
  report.knapsacks.resize(K);

  auto violation = [&](std::optional<std::size_t> k, std::optional<std::int64_t> item,
                       std::string msg) {
    report.issues.push_back({strict ? Severity::kError : Severity::kWarning, k, item,
                             std::move(msg)});
    ++report.violations;
  };
  auto warning = [&](std::optional<std::size_t> k, std::optional<std::int64_t> item,
                     std::string msg) {
    report.issues.push_back({Severity::kWarning, k, item, std::move(msg)});
  };

  for (std::size_t k = 0; k < K; ++k) {
    const auto& spec = inst.knapsacks[k];
    auto& obs = report.knapsacks[k];
    obs.density_ratio = spec.density_ratio;
    obs.duration_lo = spec.duration_lo;
    obs.duration_hi = spec.duration_hi;
    obs.size_cap = spec.size_cap;

    if (spec.size_cap > spec.capacity) {
      violation(k, std::nullopt, "knapsack " + std::to_string(k) + ": size cap " +
                                     std::to_string(spec.size_cap) +
                                     " exceeds capacity " + std::to_string(spec.capacity));
    }
    if (!gammas.empty()) {
      const double bound = size_precondition(spec.capacity, gammas[k]);
      obs.gamma = gammas[k];
      obs.size_precondition = bound;
      if (spec.size_cap > bound * (1.0 + kBoundTolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "knapsack " << k << ": eps " << spec.size_cap << " > C*ln2/gamma = " << bound;
        violation(k, std::nullopt, os.str());
      }
    }
  }

  for (const auto& item : inst.items) {
    if (!item.has_eligible_option()) {
      warning(std::nullopt, item.id,
              "item " + std::to_string(item.id) + ": no eligible knapsack (vacuous item)");
    }
    for (std::size_t k = 0; k < K; ++k) {
      const auto& opt = item.options[k];
      if (!opt.eligible) continue;
      const auto& spec = inst.knapsacks[k];
      auto& obs = report.knapsacks[k];
      const double density = opt.density();
      const Slot d = opt.interval.duration;
      if (obs.eligible_options == 0) {
        obs.density_min = obs.density_max = density;
        obs.duration_min = obs.duration_max = d;
        obs.size_max = opt.size;
      } else {
        obs.density_min = std::min(obs.density_min, density);
        obs.density_max = std::max(obs.density_max, density);
        obs.duration_min = std::min(obs.duration_min, d);
        obs.duration_max = std::max(obs.duration_max, d);
        obs.size_max = std::max(obs.size_max, opt.size);
      }
      ++obs.eligible_options;

      const std::string at = where(k, item.id);
      if (density < 1.0 - kBoundTolerance) {
        violation(k, item.id, at + "density " + std::to_string(density) + " below 1");
      }
      if (density > spec.density_ratio * (1.0 + kBoundTolerance)) {
        violation(k, item.id, at + "density " + std::to_string(density) +
                                  " above theta " + std::to_string(spec.density_ratio));
      }
      if (d < spec.duration_lo || d > spec.duration_hi) {
        violation(k, item.id, at + "duration " + std::to_string(d) + " outside [" +
                                  std::to_string(spec.duration_lo) + ", " +
                                  std::to_string(spec.duration_hi) + "]");
      }
      if (opt.size > spec.size_cap * (1.0 + kBoundTolerance)) {
        violation(k, item.id, at + "size " + std::to_string(opt.size) +
                                  " exceeds size cap " + std::to_string(spec.size_cap));
      }
      if (opt.interval.start < item.arrival) {
        warning(k, item.id, at + "requested start precedes arrival");
      }
    }
  }

  if (strict && report.violations > 0) {
    std::string first;
    for (const auto& issue : report.issues) {
      if (issue.severity == Severity::kError) {
        first = issue.message;
        break;
      }
    }
    throw ValidationError(std::to_string(report.violations) +
                              " assumption violation(s); first: " + first,
                          std::move(report));
  }
  return report;
}

std::vector<ObservedParameters> observed_parameters(const Instance& inst) {
  const std::size_t K = inst.knapsacks.size();
  std::vector<ObservedParameters> out(K);
  std::vector<Slot> dmin(K, 0), dmax(K, 0);
  std::vector<bool> seen(K, false);
  for (const auto& item : inst.items) {
    for (std::size_t k = 0; k < K && k < item.options.size(); ++k) {
      const auto& opt = item.options[k];
      if (!opt.eligible) continue;
      const double density = opt.density();
      const Slot d = opt.interval.duration;
      if (!seen[k]) {
        seen[k] = true;
        out[k].density_ratio = density;
        out[k].size_max = opt.size;
        dmin[k] = dmax[k] = d;
      } else {
        out[k].density_ratio = std::max(out[k].density_ratio, density);
        out[k].size_max = std::max(out[k].size_max, opt.size);
        dmin[k] = std::min(dmin[k], d);
        dmax[k] = std::max(dmax[k], d);
      }
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (seen[k]) {
      out[k].duration_ratio = static_cast<double>(dmax[k]) / static_cast<double>(dmin[k]);
    }
  }
  return out;
}

}  // namespace okd
