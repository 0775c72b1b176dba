// Threshold functions phi(z): marginal cost per unit size per slot as a
// function of the current utilization z of a knapsack.

#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "okd/core.hpp"

namespace okd {

enum class ThresholdKind { kExponential, kTable };

/// Immutable threshold function over [0, C]. Either the exponential family
/// phi(z) = exp(z gamma / C) - 1, or a piecewise-linear table through
/// supplied (z, phi) points. Both satisfy phi(0) = 0 and are nondecreasing.
class ThresholdFn {
 public:
  static ThresholdFn exponential(double gamma, double capacity);

  /// `points` must start at (0, 0), end at z = capacity, have strictly
  /// increasing z and nondecreasing phi.
  static ThresholdFn table(double capacity,
                           std::vector<std::pair<double, double>> points);

  ThresholdKind kind() const { return kind_; }
  double capacity() const { return capacity_; }
  /// Present for the exponential kind only.
  std::optional<double> gamma() const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }

  /// Throws std::domain_error when z is outside [0, C].
  double operator()(double z) const;

 private:
  ThresholdFn() = default;

  ThresholdKind kind_ = ThresholdKind::kExponential;
  double capacity_ = 1.0;
  double gamma_ = 0.0;
  std::vector<std::pair<double, double>> points_;
};

inline double eval(const ThresholdFn& fn, double z) { return fn(z); }

/// gamma = ln(1 + alpha * theta), which makes phi(C) = alpha * theta.
double default_gamma(double theta, double alpha);

/// Largest item size C ln2 / gamma under which the competitive guarantee
/// of the exponential threshold applies.
double size_precondition(double capacity, double gamma);

/// Threshold configuration as it appears in experiment files:
/// {"kind": "exponential", "gamma": <float> | "auto"}.
/// An empty `gamma` means auto. `per_knapsack` overrides both.
struct ThresholdConfig {
  std::optional<double> gamma;
  std::vector<double> per_knapsack;
};

/// Resolved gamma per knapsack (auto uses the declared theta_k, alpha_k).
std::vector<double> resolve_gammas(const Instance& inst, const ThresholdConfig& config);

std::vector<ThresholdFn> make_thresholds(const Instance& inst,
                                         const ThresholdConfig& config);

}  // namespace okd
