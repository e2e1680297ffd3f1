#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "halanay/certifier.hpp"
#include "halanay/config.hpp"
#include "halanay/system.hpp"

namespace halanay::test {

inline std::filesystem::path config_path(const std::string& name) {
  return std::filesystem::path(HALANAY_CONFIG_DIR) / name;
}

inline PiecewiseFunction pw(const std::string& expr) { return PiecewiseFunction::parse(expr); }
inline PiecewiseFunction pw(double v) { return PiecewiseFunction::constant(v); }

/// Period-2 switching gain: 0.8 on [0, 0.5), 1.2 on [1, 1.002), 1 elsewhere.
inline PiecewiseFunction switching_gain() {
  return PiecewiseFunction({Segment{0.0, 0.5, Expr::constant(0.8)}, Segment{1.0, 1.002, Expr::constant(1.2)}},
                           Expr::constant(1.0), 2.0);
}

inline ScalarDde switching_system() {
  ScalarDde d;
  d.a = pw(1.0);
  d.b = switching_gain();
  d.max_a = 1.0;
  d.max_b = 1.2;
  d.tau = pw("t-floor(t)");
  d.tau_max = 1.0;
  d.delay_mode = DelayMode::exact;
  return d;
}

inline ScalarDde constant_system(double a, double b, double tau = 1.0) {
  ScalarDde d;
  d.a = pw(a);
  d.b = pw(b);
  d.max_a = a;
  d.max_b = std::abs(b);
  d.tau = pw(tau);
  d.tau_max = tau;
  return d;
}

/// Random piecewise-constant function on [0, span) with `pieces` equal pieces,
/// values uniform in [lo, hi], repeated with period `span`.
inline PiecewiseFunction random_steps(std::mt19937_64& rng, int pieces, double span, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<Segment> segs;
  for (int i = 0; i < pieces; ++i) {
    const double to = i + 1 == pieces ? span : span * (i + 1) / pieces;
    segs.push_back(Segment{span * i / pieces, to, Expr::constant(d(rng))});
  }
  return PiecewiseFunction(std::move(segs), Expr::constant(d(rng)), span);
}

/// Brute-force count of region labels at n midpoint samples of (t1, t2).
inline std::array<double, 3> brute_force_measures(const CoefficientPair& pair, double eta, double t1, double t2,
                                                  std::size_t n, EtaBoundary boundary = EtaBoundary::strict) {
  std::array<double, 3> m{};
  const double dt = (t2 - t1) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t1 + (static_cast<double>(i) + 0.5) * dt;
    const auto s = pair(t);
    const double margin = s.a - std::abs(s.b);
    const bool in_eta = boundary == EtaBoundary::strict ? margin > eta : margin >= eta;
    const int label = in_eta ? 0 : (margin < 0.0 ? 1 : 2);
    m[static_cast<std::size_t>(label)] += dt;
  }
  return m;
}

}  // namespace halanay::test
