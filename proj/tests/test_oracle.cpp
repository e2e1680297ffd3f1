#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "halanay/oracle.hpp"
#include "helpers.hpp"

namespace halanay {
namespace {

OracleSettings settings(EtaBoundary boundary = EtaBoundary::strict) {
  OracleSettings s;
  s.seed = 1234;
  s.boundary = boundary;
  return s;
}

EtaCertificate certify(const ScalarDde& d, double eta, EtaBoundary boundary = EtaBoundary::strict) {
  CertifyOptions o;
  o.eta = eta;
  o.horizon = 40.0;
  o.boundary = boundary;
  return check_eta_condition(d.pair(), o);
}

void expect_all_pass(const std::vector<OracleReport>& reports) {
  for (const auto& r : reports) {
    EXPECT_TRUE(r.passed()) << r.name << ": " << r.violations.size() << " violations of " << r.checks;
    EXPECT_GT(r.checks, 0u) << r.name;
  }
}

TEST(OracleBattery, ClassicalSystemPasses) {
  const auto d = test::constant_system(2.0, 1.0);
  const auto cert = certify(d, 0.5);
  ASSERT_EQ(cert.verdict, Verdict::certified);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 3; ++i) {
    const auto traj = integrate(SystemSpec{d}, random_history(1, 1.0, 1.0, rng), 20.0, 1e-3);
    const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.5, settings());
    const auto reports = run_oracle_battery(ev, &cert);
    ASSERT_EQ(reports.size(), 5u);
    expect_all_pass(reports);
  }
}

TEST(OracleBattery, SwitchingSystemPasses) {
  const auto d = test::switching_system();
  const auto cert = certify(d, 0.2, EtaBoundary::inclusive);
  ASSERT_EQ(cert.verdict, Verdict::certified);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 3; ++i) {
    const auto traj = integrate(SystemSpec{d}, random_history(1, 1.0, 1.0, rng), 30.0, 1e-3);
    const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.2, settings(EtaBoundary::inclusive));
    expect_all_pass(run_oracle_battery(ev, &cert));
  }
}

TEST(OracleSampling, StraddlesMinusRuns) {
  const auto d = test::switching_system();
  const auto traj = integrate(SystemSpec{d}, constant_history({1.0}), 30.0, 1e-3);
  const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.2, settings(EtaBoundary::inclusive));
  const auto r = check_lemma2(ev);
  EXPECT_EQ(r.checks, 200u);
  EXPECT_GE(r.details.at("pairs_with_minus"), 60.0);
}

TEST(OracleSampling, SeedReproducible) {
  const auto d = test::switching_system();
  const auto traj = integrate(SystemSpec{d}, constant_history({1.0}), 10.0, 1e-3);
  const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.2, settings(EtaBoundary::inclusive));
  const auto a = check_lemma4(ev);
  const auto b = check_lemma4(ev);
  EXPECT_EQ(a.checks, b.checks);
  EXPECT_EQ(a.details, b.details);
}

TEST(Lemma1, SkipsMinusNodes) {
  const auto d = test::constant_system(1.0, 1.2);
  const auto traj = integrate(SystemSpec{d}, constant_history({1.0}), 5.0, 1e-3);
  const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.2, settings());
  const auto r = check_lemma1(ev);
  EXPECT_EQ(r.checks, 0u);
  EXPECT_EQ(r.details.at("skipped_minus_nodes"), static_cast<double>(ev.count() - 1));
}

TEST(Lemma1, DetectsInjectedGrowth) {
  const auto d = test::constant_system(2.0, 1.0);
  const auto traj = integrate(SystemSpec{d}, constant_history({1.0}), 10.0, 1e-3);
  auto mag = magnitude(traj);
  // A spike at t = 5 breaks monotonicity of M0 on S_eta.
  mag.values[mag.index_of(5.0)] = 2.0;
  const OracleEvidence ev(mag, d.pair(), 0.5, settings());
  EXPECT_FALSE(check_lemma1(ev).passed());
}

TEST(Lemma3, PurePlusRegion) {
  const auto d = test::constant_system(1.0, 1.0);
  std::mt19937_64 rng(9);
  const auto traj = integrate(SystemSpec{d}, random_history(1, 1.0, 1.0, rng), 10.0, 1e-3);
  const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.2, settings());
  const auto r = check_lemma3(ev);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.details.at("runs_plus"), 1.0);
  EXPECT_EQ(r.details.at("runs_eta"), 0.0);
  EXPECT_EQ(r.details.at("runs_minus"), 0.0);
  EXPECT_GT(r.checks, 100u);
}

TEST(Lemma3, MinusBoundHoldsOnUnstableSystem) {
  const auto d = test::constant_system(1.0, 1.2);
  const auto traj = integrate(SystemSpec{d}, constant_history({1.0}), 10.0, 1e-3);
  const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.2, settings());
  const auto r = check_lemma3(ev);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.details.at("runs_minus"), 1.0);
}

TEST(Lemma4, MasterBoundDegenerateCases) {
  // No elapsed measure: the bound is max(delta M0, |x|) >= |x|.
  EXPECT_DOUBLE_EQ(master_bound(0.3, 1.0, 0.0, 0.0, 0.0, 0.2, 0.9, 1.0, 1.0), 0.9);
  EXPECT_DOUBLE_EQ(master_bound(0.95, 1.0, 0.0, 0.0, 0.0, 0.2, 0.9, 1.0, 1.0), 0.95);
  // Pure S_-: M0 e^{M_b mu_-} - (M0 - max(delta M0, x1)).
  EXPECT_NEAR(master_bound(1.0, 1.0, 0.0, 0.5, 0.0, 0.2, 0.9, 1.0, 1.2), std::exp(0.6), 1e-15);
  // Long S_+ stretch: the bound tends to M0.
  EXPECT_NEAR(master_bound(0.0, 1.0, 0.0, 0.0, 50.0, 0.2, 0.9, 1.0, 1.0), 1.0, 1e-15);
}

TEST(Lemma4, ZeroTrajectoryHasNoViolations) {
  const auto d = test::switching_system();
  const auto traj = integrate(SystemSpec{d}, constant_history({0.0}), 10.0, 1e-3);
  const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.2, settings(EtaBoundary::inclusive));
  const auto r = check_lemma4(ev);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.checks, 200u);
}

TEST(Envelope, ForgedCertificateIsCaught) {
  // A certificate for the stable pair applied to an unstable trajectory.
  const auto stable = test::constant_system(2.0, 1.0);
  const auto unstable = test::constant_system(1.0, 1.2);
  const auto cert = certify(stable, 0.5);
  ASSERT_EQ(cert.verdict, Verdict::certified);
  const auto traj = integrate(SystemSpec{unstable}, constant_history({1.0}), 30.0, 1e-3);
  const auto ev = OracleEvidence::from_trajectory(traj, unstable.pair(), 0.2, settings());
  const auto r = check_theorem1_envelope(ev, cert);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.details.at("violation_count"), 0.0);
}

TEST(Envelope, RequiresCertifiedInput) {
  const auto d = test::constant_system(1.0, 1.2);
  const auto cert = certify(d, 0.2);
  const auto traj = integrate(SystemSpec{d}, constant_history({1.0}), 5.0, 1e-3);
  const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.2, settings());
  EXPECT_THROW((void)check_theorem1_envelope(ev, cert), Error);
  EXPECT_EQ(run_oracle_battery(ev, &cert).size(), 4u);
}

TEST(UnstableSystem, DoesNotDecay) {
  const auto d = test::constant_system(1.0, 1.2);
  const auto traj = integrate(SystemSpec{d}, constant_history({1.0}), 40.0, 1e-3);
  EXPECT_GT(std::abs(traj.value(traj.node_count() - 1, 0)), 1e-3);
  EXPECT_LT(fit_decay_rate(magnitude(traj), 10.0), 0.0);
}

TEST(OracleEvidence, RejectsMisalignedInput) {
  const auto d = test::constant_system(2.0, 1.0);
  const auto traj = integrate(SystemSpec{d}, constant_history({1.0}), 5.0, 1e-3);
  auto mag = magnitude(traj);
  mag.grid.origin_steps += 1;
  EXPECT_THROW(OracleEvidence(mag, d.pair(), 0.5, settings()), ConfigError);
  const CoefficientPair other(test::pw(2.0), test::pw(1.0), 2.0, 1.0, 0.5);
  EXPECT_THROW((void)OracleEvidence::from_trajectory(traj, other, 0.5, settings()), ConfigError);
}

}  // namespace
}  // namespace halanay
