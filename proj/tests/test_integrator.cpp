#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "halanay/integrator.hpp"
#include "helpers.hpp"

namespace halanay {
namespace {

using test::pw;

ScalarDde scalar(double a, double b, PiecewiseFunction tau, double tau_max, DelayMode mode = DelayMode::strict) {
  auto d = test::constant_system(a, b);
  d.tau = std::move(tau);
  d.tau_max = tau_max;
  d.delay_mode = mode;
  return d;
}

double final_value(const Trajectory& t) { return t.value(t.node_count() - 1, 0); }

TEST(Integrator, PureDecay) {
  const auto traj = integrate(SystemSpec{scalar(1.0, 0.0, pw(1.0), 1.0)}, constant_history({1.0}), 1.0, 1e-3);
  EXPECT_NEAR(final_value(traj), std::exp(-1.0), 1e-6);
  EXPECT_DOUBLE_EQ(traj.end_time(), 1.0);
  EXPECT_EQ(traj.history_steps(), 1000u);
}

TEST(Integrator, FirstDelayIntervalByMethodOfSteps) {
  // On [0, 1] the delayed term is the history 1, so x = 0.5 + 0.5 e^{-t}.
  const auto traj = integrate(SystemSpec{scalar(1.0, 0.5, pw(1.0), 1.0)}, constant_history({1.0}), 1.0, 1e-3);
  EXPECT_NEAR(final_value(traj), 0.5 + 0.5 * std::exp(-1.0), 1e-5);
  EXPECT_NEAR(traj.interpolate(0, 0.5), 0.5 + 0.5 * std::exp(-0.5), 1e-8);
}

TEST(Integrator, SecondDelayIntervalByMethodOfSteps) {
  // On [1, 2]: x' = -x + 0.5 (0.5 + 0.5 e^{-(t-1)}), x(1) = 0.5 + 0.5/e.
  // Solution: x = 0.25 + 0.25 (t-1) e^{-(t-1)} + (x(1) - 0.25) e^{-(t-1)}.
  const auto traj = integrate(SystemSpec{scalar(1.0, 0.5, pw(1.0), 1.0)}, constant_history({1.0}), 2.0, 1e-3);
  const double x1 = 0.5 + 0.5 * std::exp(-1.0);
  const double expected = 0.25 + 0.25 * std::exp(-1.0) + (x1 - 0.25) * std::exp(-1.0);
  EXPECT_NEAR(final_value(traj), expected, 1e-8);
}

TEST(Integrator, Deterministic) {
  const auto sys = SystemSpec{test::switching_system()};
  std::mt19937_64 r1(3), r2(3);
  const auto a = integrate(sys, random_history(1, 1.0, 1.0, r1), 10.0, 1e-3);
  const auto b = integrate(sys, random_history(1, 1.0, 1.0, r2), 10.0, 1e-3);
  ASSERT_EQ(a.node_count(), b.node_count());
  for (std::size_t k = 0; k < a.node_count(); ++k) ASSERT_EQ(a.value(k, 0), b.value(k, 0));
}

TEST(Integrator, ZeroHistoryStaysZero) {
  const auto traj = integrate(SystemSpec{test::switching_system()}, constant_history({0.0}), 5.0, 1e-3);
  for (std::size_t k = 0; k < traj.node_count(); ++k) ASSERT_EQ(traj.value(k, 0), 0.0);
}

ScalarDde smooth_system(const char* tau) {
  ScalarDde d;
  d.a = pw("2+sin(t)");
  d.b = pw("cos(t)");
  d.max_a = 3.0;
  d.max_b = 1.0;
  d.tau = pw(tau);
  d.tau_max = 0.75;
  return d;
}

TEST(Integrator, FourthOrderWithConstantDelay) {
  const SystemSpec sys{smooth_system("0.75")};
  const auto hist = constant_history({1.0});
  const double x1 = final_value(integrate(sys, hist, 3.0, 0.025));
  const double x2 = final_value(integrate(sys, hist, 3.0, 0.0125));
  const double x3 = final_value(integrate(sys, hist, 3.0, 0.00625));
  const double order = std::log2(std::abs(x1 - x2) / std::abs(x2 - x3));
  EXPECT_GE(order, 3.5) << "x = " << x1 << ", " << x2 << ", " << x3;
}

TEST(Integrator, ConvergesWithVaryingDelay) {
  // Breaking points fall inside steps, so the error is small but not of clean order.
  const SystemSpec sys{smooth_system("0.5+0.25*sin(t)")};
  const auto hist = constant_history({1.0});
  const double ref = final_value(integrate(sys, hist, 3.0, 0.75 / 4800));
  const double coarse = std::abs(final_value(integrate(sys, hist, 3.0, 0.025)) - ref);
  const double fine = std::abs(final_value(integrate(sys, hist, 3.0, 0.0015625)) - ref);
  EXPECT_LT(coarse, 1e-7);
  EXPECT_LT(fine, coarse / 16.0);
}

TEST(Integrator, StrictModeRejectsVanishingDelay) {
  const auto sys = SystemSpec{scalar(1.0, 0.5, pw("t-floor(t)"), 1.0, DelayMode::strict)};
  EXPECT_THROW((void)integrate(sys, constant_history({1.0}), 2.0, 1e-3), ConfigError);
}

TEST(Integrator, ClampModeCountsClamps) {
  const auto sys = SystemSpec{scalar(1.0, 0.5, pw("t-floor(t)"), 1.0, DelayMode::clamp)};
  const auto traj = integrate(sys, constant_history({1.0}), 2.0, 1e-3);
  EXPECT_GT(traj.clamp_count(), 0u);
  EXPECT_TRUE(std::isfinite(final_value(traj)));
}

TEST(Integrator, ExactModeMatchesClampClosely) {
  const auto exact = integrate(SystemSpec{scalar(1.0, 0.5, pw("t-floor(t)"), 1.0, DelayMode::exact)},
                               constant_history({1.0}), 3.0, 1e-3);
  const auto clamp = integrate(SystemSpec{scalar(1.0, 0.5, pw("t-floor(t)"), 1.0, DelayMode::clamp)},
                               constant_history({1.0}), 3.0, 1e-3);
  EXPECT_EQ(exact.clamp_count(), 0u);
  EXPECT_NEAR(final_value(exact), final_value(clamp), 1e-3);
}

TEST(Integrator, DelayAboveBoundRejected) {
  const auto sys = SystemSpec{scalar(1.0, 0.5, pw(1.5), 1.0)};
  EXPECT_THROW((void)integrate(sys, constant_history({1.0}), 2.0, 1e-3), ConfigError);
}

TEST(Integrator, StepMustDivideDelayBound) {
  const auto sys = SystemSpec{scalar(1.0, 0.5, pw(1.0), 1.0)};
  EXPECT_THROW((void)integrate(sys, constant_history({1.0}), 2.0, 0.3), ConfigError);
  EXPECT_THROW((void)integrate(sys, constant_history({1.0}), 2.0, 0.0), ConfigError);
  EXPECT_THROW((void)integrate(sys, constant_history({1.0, 2.0}), 2.0, 1e-3), ConfigError);
}

TEST(Integrator, OverflowReported) {
  auto d = scalar(1.0, 0.0, pw(1.0), 1.0);
  d.a = pw(-100.0);
  try {
    (void)integrate(SystemSpec{d}, constant_history({1.0}), 10.0, 1e-3);
    FAIL() << "expected divergence";
  } catch (const IntegrationError& e) {
    EXPECT_GT(e.last_valid_time(), 3.0);
    EXPECT_LT(e.last_valid_time(), 4.0);
  }
}

TEST(Integrator, SupEnvelopeDominatesSolutions) {
  const auto d = test::switching_system();
  const auto env = integrate_sup_envelope(d, 1.0, 20.0, 1e-3);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5; ++i) {
    const auto traj = integrate(SystemSpec{d}, random_history(1, 1.0, 1.0, rng), 20.0, 1e-3);
    for (std::size_t m = 0; m < env.size(); m += 97) {
      ASSERT_LE(std::abs(traj.value(traj.history_steps() + m, 0)), env[m] * (1.0 + 1e-6) + 1e-12);
    }
  }
}

TEST(Integrator, NetworkWithInputFollowsPeriodicSolution) {
  // u' = -u + cos t + sin t has the solution u = sin t.
  NetworkSpec net = test::constant_system(1.0, 0.0).as_network();
  net.input = {pw("cos(t)+sin(t)")};
  HistorySegment h{{pw("sin(t)")}};
  const auto traj = integrate(net, h, 10.0, 1e-3);
  for (double t : {1.0, 5.0, 10.0}) EXPECT_NEAR(traj.interpolate(0, t), std::sin(t), 1e-9);
}

}  // namespace
}  // namespace halanay
