#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "halanay/series.hpp"
#include "helpers.hpp"

namespace halanay {
namespace {

using test::pw;

SampledSeries sample(double h, std::ptrdiff_t origin, std::size_t count, double (*f)(double)) {
  SampledSeries s{TimeGrid{h, origin}, std::vector<double>(count)};
  for (std::size_t k = 0; k < count; ++k) s.values[k] = f(s.time(k));
  return s;
}

TEST(MaximalFunction, ConstantSeries) {
  const auto mag = sample(0.01, -100, 600, [](double) { return 2.5; });
  const auto m0 = maximal_function(mag, 1.0);
  ASSERT_EQ(m0.size(), 500u);
  EXPECT_DOUBLE_EQ(m0.time(0), 0.0);
  for (double v : m0.values) EXPECT_EQ(v, 2.5);
}

TEST(MaximalFunction, DecreasingSeriesLagsByDelay) {
  const auto mag = sample(0.01, -100, 600, [](double t) { return std::exp(-t); });
  const auto m0 = maximal_function(mag, 1.0);
  for (std::size_t k = 0; k < m0.size(); k += 37) EXPECT_NEAR(m0.values[k], std::exp(-(m0.time(k) - 1.0)), 1e-12);
}

TEST(MaximalFunction, SineWindow) {
  const double tau = std::numbers::pi / 2.0;
  const double h = tau / 1000.0;
  const auto mag = sample(h, -1000, 4001, [](double t) { return std::abs(std::sin(t)); });
  const auto m0 = maximal_function(mag, tau);
  EXPECT_NEAR(m0.at(std::numbers::pi), 1.0, 1e-12);
  // The window [5pi/4, 7pi/4] contains 3pi/2.
  EXPECT_NEAR(m0.at(1.75 * std::numbers::pi), 1.0, 1e-12);
  // At t = pi + pi/4 the window [3pi/4, 5pi/4] peaks at its ends.
  EXPECT_NEAR(m0.at(1.25 * std::numbers::pi), std::sin(0.75 * std::numbers::pi), 1e-6);
}

TEST(MaximalFunction, BruteForceAgreement) {
  const auto mag = sample(0.01, -50, 800, [](double t) { return std::abs(std::sin(3.0 * t) * std::exp(-0.2 * t)); });
  const auto m0 = maximal_function(mag, 0.5);
  for (std::size_t k = 0; k < m0.size(); ++k) {
    double best = 0.0;
    for (std::size_t j = k; j <= k + 50; ++j) best = std::max(best, mag.values[j]);
    ASSERT_EQ(m0.values[k], best);
  }
}

TEST(SyncError, IdenticalRunsGiveZero) {
  const SystemSpec sys{test::switching_system()};
  const auto a = integrate(sys, constant_history({0.7}), 5.0, 1e-3);
  const auto b = integrate(sys, constant_history({0.7}), 5.0, 1e-3);
  for (double v : sync_error(a, b).values) ASSERT_EQ(v, 0.0);
}

TEST(SyncError, GridMismatchThrows) {
  const SystemSpec sys{test::switching_system()};
  const auto a = integrate(sys, constant_history({0.7}), 5.0, 1e-3);
  const auto b = integrate(sys, constant_history({0.7}), 5.0, 2e-3);
  const auto c = integrate(sys, constant_history({0.7}), 4.0, 1e-3);
  EXPECT_THROW((void)sync_error(a, b), ConfigError);
  EXPECT_THROW((void)sync_error(a, c), ConfigError);
}

TEST(PeriodicResidual, VanishesOnPeriodicSolution) {
  NetworkSpec net = test::constant_system(1.0, 0.0).as_network();
  net.input = {pw("cos(t)+sin(t)")};
  const auto traj = integrate(net, HistorySegment{{pw("sin(t)")}}, 20.0, 1e-3);
  const auto v = periodic_residual(traj, 2.0 * std::numbers::pi);
  EXPECT_NEAR(v.time(0), 2.0 * std::numbers::pi, 1e-3);
  for (double x : v.values) ASSERT_LT(x, 1e-8);
}

TEST(PeriodicResidual, DetectsNonPeriodicSolution) {
  const auto traj = integrate(SystemSpec{test::constant_system(1.0, 0.0)}, constant_history({1.0}), 5.0, 1e-3);
  const auto v = periodic_residual(traj, 1.0);
  // |e^{-t} - e^{-(t-1)}| = e^{-t} (e - 1).
  EXPECT_NEAR(v.at(2.0), std::exp(-2.0) * (std::exp(1.0) - 1.0), 1e-6);
  EXPECT_THROW((void)periodic_residual(traj, 6.0), ConfigError);
}

TEST(FitDecayRate, PureExponential) {
  // Stays well above the 1e-15 clipping floor on [0, 10].
  const auto s = sample(0.01, 0, 1001, [](double t) { return 3.0 * std::exp(-2.0 * t); });
  EXPECT_NEAR(fit_decay_rate(s, 0.0), 2.0, 1e-3);
}

TEST(FitDecayRate, ModulatedExponential) {
  const auto s = sample(0.01, 0, 3001, [](double t) { return (1.0 + 0.1 * std::sin(t)) * std::exp(-t); });
  EXPECT_NEAR(fit_decay_rate(s, 0.0), 1.0, 0.05);
}

TEST(FitDecayRate, NeedsTenSamples) {
  const auto s = sample(0.1, 0, 12, [](double t) { return std::exp(-t); });
  EXPECT_THROW((void)fit_decay_rate(s, 0.5), Error);
  EXPECT_NO_THROW((void)fit_decay_rate(s, 0.0));
}

}  // namespace
}  // namespace halanay
