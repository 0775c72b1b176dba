// Reproducible random stream used by every generator ("okd-rng-v1").
//
//   engine:   std::mt19937_64, seeded with the 64-bit seed as-is
//   uniform:  (next() >> 11) * 2^-53, a double in [0, 1)
//   integer:  uniform on [lo, hi] by rejection sampling on next(), drawing
//             r = next() until r < 2^64 - (2^64 mod span), result lo + r % span
//
// std::mt19937_64's output sequence is fixed by the C++ standard; the
// library's distribution classes are not, so they are deliberately avoided.

#pragma once

#include <cstdint>
#include <random>

namespace okd {

class Rng {
 public:
  static constexpr const char* kName = "okd-rng-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// [0, 1)
  double uniform();
  /// [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// (0, hi]
  double uniform_open_closed(double hi) { return hi * (1.0 - uniform()); }
  /// [lo, hi], inclusive
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace okd
