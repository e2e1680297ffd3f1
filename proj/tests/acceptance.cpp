// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance [--criterion N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "halanay/cli.hpp"
#include "helpers.hpp"

namespace halanay {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[x] ") + what;
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("halanay_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

// ---------------------------------------------------------------- 1

Outcome ratio_reproduction() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double stated = window_ratio_value(0.004, 0.5, 1.0, 1.2, 1, 1.0);
  const double elapsed = seconds_since(t0);
  const double geometric = window_ratio_value(0.002, 0.5, 1.0, 1.2, 1, 1.0);
  const double direct = std::expm1(1.2 * 0.002) * std::exp(2.0) / 0.5;
  o.require(std::abs(stated - 0.0711) <= 5e-4, "r(0.004) = " + num(stated));
  o.require(std::abs(geometric - 0.0355) <= 5e-4 && std::abs(geometric - direct) < 1e-12,
            "r(0.002) = " + num(geometric));
  o.require(elapsed < 1e-3, "ratio time " + num(elapsed * 1e3) + " ms");

  const auto cfg = load_config(test::config_path("scalar_switching.json"));
  const auto w = window_ratio(std::get<ScalarDde>(cfg.system).pair(), 0.2, 0.0, 1, 5, 1e-3, EtaBoundary::inclusive);
  o.require(std::abs(w.ratio - 0.0355) <= 5e-4, "measured window ratio " + num(w.ratio));
  o.require(stated < 0.1 && geometric < 0.1, "both below eta/2 = 0.1");

  CommandOptions opts{"certify", test::config_path("scalar_switching.json"), scratch("c1"), {}, {}};
  std::ostringstream sink;
  const int code = run_command(opts, sink, sink);
  o.require(code == kExitOk, "certify exit " + std::to_string(code));
  return o;
}

// ---------------------------------------------------------------- 2

Outcome switching_stability() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = load_config(test::config_path("scalar_switching.json"));
  const auto& d = std::get<ScalarDde>(cfg.system);
  CertifyOptions co;
  co.eta = 0.2;
  co.horizon = 40.0;
  co.boundary = EtaBoundary::inclusive;
  const auto cert = check_eta_condition(d.pair(), co);
  const double alpha = cert.alpha.value_or(std::nan(""));

  std::mt19937_64 rng(7);
  double worst = 0.0;
  double slowest = 1e300;
  for (int r = 0; r < 10; ++r) {
    const auto traj = integrate(SystemSpec{d}, random_history(1, 1.0, 1.0, rng), 60.0, 1e-3);
    worst = std::max(worst, std::abs(traj.value(traj.node_count() - 1, 0)));
    slowest = std::min(slowest, fit_decay_rate(maximal_function(traj, 1.0), 10.0));
  }
  const double elapsed = seconds_since(t0);
  o.require(worst < 1e-3, "max |x(60)| = " + num(worst));
  o.require(slowest >= alpha, "min fitted rate " + num(slowest) + " vs alpha " + num(alpha));
  o.require(elapsed < 5.0, "time " + num(elapsed) + " s");
  return o;
}

// ---------------------------------------------------------------- 3

Outcome ring_constants() {
  Outcome o;
  const auto a_sup = bound_estimates(test::pw("1+sin(pi*t)^2-abs(sin(pi*t))^3"), 0.0, 2.0, 1e-3).sup;
  o.require(std::abs(a_sup - 29.0 / 27.0) <= 1e-4, "sup a = " + num(a_sup) + " (stated 29/27 = " + num(29.0 / 27.0) + ")");

  const auto cfg = load_config(test::config_path("ring_network.json"));
  const auto& net = std::get<NetworkSpec>(cfg.system);
  double margin_sup = -1e300;
  for (std::size_t i = 0; i < net.n; ++i) {
    const auto b = bound_estimates([&](double t) { return net.neuron_decay(i, t) - net.neuron_gain(i, t); }, 0.0, 2.0,
                                   1e-3);
    margin_sup = std::max(margin_sup, b.sup);
  }
  o.require(std::abs(margin_sup - 2.0 / 27.0) <= 1e-4,
            "max margin = " + num(margin_sup) + " (stated 2/27 = " + num(2.0 / 27.0) + ")");

  PeriodicOptions po;
  po.eta = 1.0 / 27.0;
  po.max_a = net.max_a;
  po.max_b = net.max_b;
  const auto chk = check_periodic_condition(net, po);
  o.require(chk.mu_bar_minus == 0.0, "mu_bar_minus = " + num(chk.mu_bar_minus));
  o.require(chk.mu_bar_eta > 0.0, "mu_bar_eta = " + num(chk.mu_bar_eta));
  o.require(chk.verdict && chk.lhs == 0.0, "periodic verdict " + std::string(chk.verdict ? "true" : "false") +
                                               ", lhs = " + num(chk.lhs));
  return o;
}

// ---------------------------------------------------------------- 4

Outcome ring_behaviour() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = load_config(test::config_path("ring_network.json"));
  const auto& net = std::get<NetworkSpec>(cfg.system);
  const auto hist = expand_histories(*cfg.simulate, net.n, net.tau_max, cfg.seed);
  std::vector<Trajectory> runs;
  for (std::size_t i = 0; i < 2; ++i) runs.push_back(integrate(net, hist.at(i), 40.0, 1e-3));
  const auto z = sync_error(runs[0], runs[1]);
  const double z40 = z.values.back();
  o.require(z40 < 1e-3, "z(40) = " + num(z40));
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto v = periodic_residual(runs[i], *net.period);
    const double ratio = v.at(30.0) / v.at(5.0);
    o.require(ratio < 1e-2, "run " + std::to_string(i + 1) + " v(30)/v(5) = " + num(ratio));
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 30.0, "time " + num(elapsed) + " s");
  return o;
}

// ---------------------------------------------------------------- 5

/// Period-2 piecewise-constant pair, tau_max = 1, N = 1, eta = 0.4: one S_eta
/// stretch in [0, 1), one short S_- burst in [1, 2), S_+ elsewhere.
ScalarDde random_certified_system(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto sign = [&] { return u(rng) < 0.5 ? -1.0 : 1.0; };
  const double a = 0.8 + 0.2 * u(rng);
  const double eta_len = 0.5 + 0.3 * u(rng);
  const double eta_from = (1.0 - eta_len) * u(rng);
  const double burst = 0.002 + 0.004 * u(rng);
  const double burst_from = 1.0 + (1.0 - burst) * u(rng);
  const double b_eta = sign() * (a - 0.5 - 0.1 * u(rng));
  const double b_plus = sign() * (a - 0.05 - 0.3 * u(rng));
  const double b_minus = sign() * std::min(1.3, a + 0.1 + 0.2 * u(rng));

  ScalarDde d;
  d.a = test::pw(a);
  d.b = PiecewiseFunction({Segment{eta_from, eta_from + eta_len, Expr::constant(b_eta)},
                           Segment{burst_from, burst_from + burst, Expr::constant(b_minus)}},
                          Expr::constant(b_plus), 2.0);
  d.max_a = a;
  d.max_b = std::max({std::abs(b_eta), std::abs(b_plus), std::abs(b_minus)});
  const double freq = 0.5 + 2.0 * u(rng);
  d.tau = test::pw("0.6+0.4*sin(" + std::to_string(freq) + "*t)");
  d.tau_max = 1.0;
  return d;
}

Outcome oracle_battery() {
  Outcome o;
  std::mt19937_64 rng(2024);
  OracleSettings s;
  s.rel_tol = 1e-3;
  std::size_t systems = 0, checks = 0, violations = 0, certified = 0;
  std::optional<EtaCertificate> first_cert;
  for (int sys = 0; sys < 10; ++sys) {
    const auto d = random_certified_system(rng);
    CertifyOptions co;
    co.eta = 0.4;
    co.horizon = 60.0;
    const auto cert = check_eta_condition(d.pair(), co);
    ++systems;
    if (cert.verdict != Verdict::certified) continue;
    ++certified;
    if (!first_cert) first_cert = cert;
    for (int h = 0; h < 5; ++h) {
      const auto traj = integrate(SystemSpec{d}, random_history(1, 1.0, 1.0, rng), 30.0, 1e-3);
      s.seed = static_cast<std::uint64_t>(sys * 100 + h);
      const auto ev = OracleEvidence::from_trajectory(traj, d.pair(), 0.4, s);
      for (const auto& r : run_oracle_battery(ev, &cert)) {
        checks += r.checks;
        violations += r.details.count("violation_count") ? static_cast<std::size_t>(r.details.at("violation_count")) : 0;
      }
    }
  }
  o.require(certified == systems, std::to_string(certified) + "/" + std::to_string(systems) + " systems certified");
  o.require(violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) + " checks");

  // Meta-test: a certificate forged onto an unstable system must be caught.
  const auto unstable = test::constant_system(1.0, 1.2);
  const auto traj = integrate(SystemSpec{unstable}, constant_history({1.0}), 30.0, 1e-3);
  const auto ev = OracleEvidence::from_trajectory(traj, unstable.pair(), 0.4, s);
  std::size_t forged = 0;
  if (first_cert) forged = static_cast<std::size_t>(check_theorem1_envelope(ev, *first_cert).details.at("violation_count"));
  o.require(forged >= 1, "forged certificate: " + std::to_string(forged) + " violations");
  return o;
}

// ---------------------------------------------------------------- 6

/// Root of lambda = 2 - e^{lambda} by bisection.
double classical_rate() {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid - 2.0 + std::exp(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome classical_baseline() {
  Outcome o;
  const auto d = test::constant_system(2.0, 1.0);
  CertifyOptions co;
  co.eta = 0.5;
  co.horizon = 40.0;
  const auto cert = check_eta_condition(d.pair(), co);
  o.require(cert.verdict == Verdict::certified, std::string("verdict ") + to_string(cert.verdict));
  const bool no_minus =
      std::all_of(cert.windows.begin(), cert.windows.end(), [](const WindowStats& w) { return w.mu_minus == 0.0; });
  o.require(no_minus, "mu_- = 0 in all " + std::to_string(cert.windows.size()) + " windows");

  std::mt19937_64 rng(3);
  double slowest = 1e300;
  for (int r = 0; r < 5; ++r) {
    const auto traj = integrate(SystemSpec{d}, random_history(1, 1.0, 1.0, rng), 30.0, 1e-3);
    slowest = std::min(slowest, fit_decay_rate(maximal_function(traj, 1.0), 10.0));
  }
  const double alpha = cert.alpha.value_or(std::nan(""));
  o.require(alpha <= 1.05 * slowest, "alpha " + num(alpha) + " <= fitted " + num(slowest));
  o.require(std::abs(slowest - classical_rate()) < 0.05 * classical_rate(),
            "fitted vs characteristic root " + num(classical_rate()));
  return o;
}

// ---------------------------------------------------------------- 7

Outcome measure_equivalence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int pieces_a = 2 + static_cast<int>(rng() % 12);
    const int pieces_b = 2 + static_cast<int>(rng() % 12);
    const double span = 0.5 + 2.0 * u(rng);
    const CoefficientPair pair(test::random_steps(rng, pieces_a, span, 0.2, 2.0),
                               test::random_steps(rng, pieces_b, 0.7 * span, -2.0, 2.0), 2.0, 2.0, 1.0);
    const double eta = 0.05 + 0.8 * u(rng);
    const double t1 = 3.0 * u(rng);
    const double t2 = t1 + 0.5 + 4.0 * u(rng);
    const auto m = partition_measures(pair, eta, t1, t2, 1e-3);
    const auto brute = test::brute_force_measures(pair, eta, t1, t2, 1000000);
    worst = std::max({worst, std::abs(m.mu_eta - brute[0]), std::abs(m.mu_minus - brute[1]),
                      std::abs(m.mu_plus - brute[2])});
  }
  const double elapsed = seconds_since(t0);
  o.require(worst <= 1e-4, "max deviation " + num(worst));
  o.require(elapsed < 10.0, "time " + num(elapsed) + " s");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace halanay

int main(int argc, char** argv) {
  using namespace halanay;
  const std::vector<Criterion> all{
      {1, "window ratio reproduction", ratio_reproduction},
      {2, "switching system stability", switching_stability},
      {3, "ring network constants", ring_constants},
      {4, "ring network sync and periodicity", ring_behaviour},
      {5, "oracle battery on random certified systems", oracle_battery},
      {6, "classical baseline", classical_baseline},
      {7, "measure versus brute force", measure_equivalence},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  bool ok = true;
  bool ran = false;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d %-44s %s  (%.2f s)  %s\n", c.id, c.name, out.pass ? "PASS" : "FAIL", seconds_since(t0),
                out.detail.c_str());
    ok = ok && out.pass;
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return ok ? 0 : 1;
}
