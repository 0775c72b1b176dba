#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "okd/threshold.hpp"
#include "test_support.hpp"

namespace okd {
namespace {

const double kLn9 = std::log(9.0);

TEST(Threshold, EvalExamples) {
  const auto fn = ThresholdFn::exponential(kLn9, 10.0);
  EXPECT_EQ(fn(0.0), 0.0);
  EXPECT_NEAR(fn(10.0), 8.0, 1e-12);
  EXPECT_NEAR(fn(5.0), 2.0, 1e-12);
  EXPECT_EQ(ThresholdFn::exponential(3.7, 0.25)(0.0), 0.0);
}

TEST(Threshold, DomainErrors) {
  const auto fn = ThresholdFn::exponential(kLn9, 10.0);
  EXPECT_THROW(fn(-1e-12), std::domain_error);
  EXPECT_THROW(fn(10.0 + 1e-9), std::domain_error);
  EXPECT_THROW(fn(std::nan("")), std::domain_error);
  EXPECT_THROW(ThresholdFn::exponential(0.0, 1.0), std::domain_error);
  EXPECT_THROW(ThresholdFn::exponential(1.0, -1.0), std::domain_error);
}

TEST(Threshold, DefaultGamma) {
  // ln(1 + alpha theta), independently evaluated
  EXPECT_NEAR(default_gamma(1, 1), 0.6931471805599453, 1e-15);
  EXPECT_NEAR(default_gamma(4, 2), 2.1972245773362196, 1e-15);
  EXPECT_NEAR(default_gamma(8, 8), 4.174387269895637, 1e-15);
  EXPECT_THROW(default_gamma(0.5, 1), std::domain_error);
  EXPECT_THROW(default_gamma(1, 0.9), std::domain_error);
}

TEST(Threshold, SizePrecondition) {
  EXPECT_NEAR(size_precondition(10, std::log(2.0)), 10.0, 1e-12);
  EXPECT_NEAR(size_precondition(10, kLn9), 3.154648767857287, 1e-12);
  EXPECT_NEAR(size_precondition(1, 2 * std::log(2.0)), 0.5, 1e-15);
  EXPECT_THROW(size_precondition(0, 1), std::domain_error);
}

TEST(Threshold, BoundaryIdentityAtDefaultGamma) {
  for (double theta : {1.0, 2.0, 4.0, 8.0, 64.0}) {
    for (double alpha : {1.0, 2.0, 4.0, 8.0, 64.0}) {
      const auto fn = ThresholdFn::exponential(default_gamma(theta, alpha), 7.5);
      EXPECT_EQ(fn(0.0), 0.0);
      EXPECT_LE(std::abs(fn(7.5) - alpha * theta) / (alpha * theta), 1e-12);
    }
  }
}

TEST(Threshold, MonotoneAndScaleCovariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double gamma = 0.01 + 10.0 * unit(rng);
    const double cap = 0.1 + 100.0 * unit(rng);
    const auto fn = ThresholdFn::exponential(gamma, cap);
    double z1 = cap * unit(rng), z2 = cap * unit(rng);
    if (z1 > z2) std::swap(z1, z2);
    EXPECT_LE(fn(z1), fn(z2));

    const double s = 0.01 + 50.0 * unit(rng);
    const auto scaled = ThresholdFn::exponential(gamma, s * cap);
    const double z = std::min(cap * unit(rng), cap);
    const double sz = std::min(s * z, s * cap);
    EXPECT_NEAR(scaled(sz), fn(z), 1e-12 * std::max(1.0, fn(z)));
  }
}

TEST(Threshold, TableInterpolatesAndValidates) {
  const auto fn = ThresholdFn::table(4.0, {{0, 0}, {2, 1}, {4, 5}});
  EXPECT_EQ(fn.kind(), ThresholdKind::kTable);
  EXPECT_FALSE(fn.gamma().has_value());
  EXPECT_EQ(fn(0), 0.0);
  EXPECT_DOUBLE_EQ(fn(1), 0.5);
  EXPECT_DOUBLE_EQ(fn(2), 1.0);
  EXPECT_DOUBLE_EQ(fn(3), 3.0);
  EXPECT_DOUBLE_EQ(fn(4), 5.0);
  EXPECT_THROW(fn(4.5), std::domain_error);

  EXPECT_THROW(ThresholdFn::table(4, {{0, 1}, {4, 2}}), std::invalid_argument);
  EXPECT_THROW(ThresholdFn::table(4, {{0, 0}, {2, 3}, {4, 2}}), std::invalid_argument);
  EXPECT_THROW(ThresholdFn::table(4, {{0, 0}, {2, 1}, {2, 2}, {4, 3}}), std::invalid_argument);
  EXPECT_THROW(ThresholdFn::table(4, {{0, 0}, {3, 1}}), std::invalid_argument);
}

TEST(Threshold, ResolveGammas) {
  Instance inst;
  inst.horizon = 4;
  inst.knapsacks = {KnapsackSpec{10, 4, 1, 2, 1}, KnapsackSpec{5, 8, 2, 16, 1}};
  const auto autog = resolve_gammas(inst, {});
  EXPECT_DOUBLE_EQ(autog[0], std::log1p(8.0));
  EXPECT_DOUBLE_EQ(autog[1], std::log1p(64.0));
  EXPECT_EQ(resolve_gammas(inst, {1.5, {}}), (std::vector<double>{1.5, 1.5}));
  EXPECT_EQ(resolve_gammas(inst, {std::nullopt, {1.0, 2.0}}), (std::vector<double>{1.0, 2.0}));
  EXPECT_THROW(resolve_gammas(inst, {std::nullopt, {1.0}}), std::invalid_argument);
  const auto fns = make_thresholds(inst, {});
  EXPECT_EQ(fns[1].capacity(), 5.0);
}

}  // namespace
}  // namespace okd
