#include "okd/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace okd {

ThresholdFn ThresholdFn::exponential(double gamma, double capacity) {
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw std::domain_error("gamma must be a positive finite number");
  }
  if (!std::isfinite(capacity) || capacity <= 0.0) {
    throw std::domain_error("capacity must be a positive finite number");
  }
  ThresholdFn fn;
  fn.kind_ = ThresholdKind::kExponential;
  fn.gamma_ = gamma;
  fn.capacity_ = capacity;
  return fn;
}

ThresholdFn ThresholdFn::table(double capacity,
                               std::vector<std::pair<double, double>> points) {
  if (!std::isfinite(capacity) || capacity <= 0.0) {
    throw std::domain_error("capacity must be a positive finite number");
  }
  if (points.size() < 2) throw std::invalid_argument("table needs at least two points");
  if (points.front().first != 0.0 || points.front().second != 0.0) {
    throw std::invalid_argument("table must start at (0, 0)");
  }
  if (points.back().first != capacity) {
    throw std::invalid_argument("table must end at z = capacity");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!std::isfinite(points[i].second)) {
      throw std::invalid_argument("table values must be finite");
    }
    if (!(points[i].first > points[i - 1].first)) {
      throw std::invalid_argument("table z values must be strictly increasing");
    }
    if (points[i].second < points[i - 1].second) {
      throw std::invalid_argument("table values must be nondecreasing");
    }
  }
  ThresholdFn fn;
  fn.kind_ = ThresholdKind::kTable;
  fn.capacity_ = capacity;
  fn.points_ = std::move(points);
  return fn;
}

std::optional<double> ThresholdFn::gamma() const {
  if (kind_ == ThresholdKind::kExponential) return gamma_;
  return std::nullopt;
}

double ThresholdFn::operator()(double z) const {
  if (!(z >= 0.0 && z <= capacity_)) {
    throw std::domain_error("utilization " + std::to_string(z) + " outside [0, " +
                            std::to_string(capacity_) + "]");
  }
  if (kind_ == ThresholdKind::kExponential) {
    return std::expm1((z / capacity_) * gamma_);
  }
  auto hi = std::lower_bound(points_.begin(), points_.end(), z,
                             [](const auto& p, double x) { return p.first < x; });
  if (hi->first == z) return hi->second;
  auto lo = hi - 1;
  const double frac = (z - lo->first) / (hi->first - lo->first);
  // Clamp guards against rounding pushing the interpolant outside the segment.
  return std::clamp(lo->second + frac * (hi->second - lo->second), lo->second,
                    hi->second);
}

double default_gamma(double theta, double alpha) {
  if (!(theta >= 1.0) || !(alpha >= 1.0)) {
    throw std::domain_error("default_gamma requires theta >= 1 and alpha >= 1");
  }
  return std::log1p(alpha * theta);
}

double size_precondition(double capacity, double gamma) {
  if (!(capacity > 0.0) || !(gamma > 0.0)) {
    throw std::domain_error("size_precondition requires C > 0 and gamma > 0");
  }
  return capacity * std::numbers::ln2 / gamma;
}

std::vector<double> resolve_gammas(const Instance& inst, const ThresholdConfig& config) {
  const std::size_t K = inst.knapsacks.size();
  if (!config.per_knapsack.empty()) {
    if (config.per_knapsack.size() != K) {
      throw std::invalid_argument("per-knapsack gamma list has " +
                                  std::to_string(config.per_knapsack.size()) +
                                  " entries, instance has " + std::to_string(K) +
                                  " knapsacks");
    }
    return config.per_knapsack;
  }
  std::vector<double> out;
  out.reserve(K);
  for (const auto& spec : inst.knapsacks) {
    out.push_back(config.gamma ? *config.gamma
                               : default_gamma(spec.density_ratio, spec.duration_ratio()));
  }
  return out;
}

std::vector<ThresholdFn> make_thresholds(const Instance& inst,
                                         const ThresholdConfig& config) {
  const auto gammas = resolve_gammas(inst, config);
  std::vector<ThresholdFn> out;
  out.reserve(gammas.size());
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    out.push_back(ThresholdFn::exponential(gammas[k], inst.knapsacks[k].capacity));
  }
  return out;
}

}  // namespace okd
