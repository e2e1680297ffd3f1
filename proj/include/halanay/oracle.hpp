#pragma once

// Executable checks of the comparison estimates along sampled trajectories.
// Every check works on integrated (never differentiated) forms and records
// the exact witness (t1, t2, lhs, rhs) of each violation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "halanay/certifier.hpp"
#include "halanay/coefficients.hpp"
#include "halanay/error.hpp"
#include "halanay/integrator.hpp"
#include "halanay/series.hpp"

namespace halanay {

struct Violation {
  double t1 = 0.0;
  double t2 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs + allowance - lhs (negative for a violation)
};

struct OracleReport {
  std::string name;
  std::size_t checks = 0;
  std::vector<Violation> violations;
  double tolerance = 0.0;
  std::vector<std::string> notes;
  std::map<std::string, double> details;

  [[nodiscard]] bool passed() const { return violations.empty(); }
};

struct OracleSettings {
  double rel_tol = 1e-3;
  double abs_floor = 1e-9;
  std::optional<double> resolution;  // default 1e-3 * tau_max
  std::size_t sample_pairs = 200;
  std::uint64_t seed = 0;
  EtaBoundary boundary = EtaBoundary::strict;
  std::size_t max_recorded = 50;  // violations kept per report (all are counted)
};

/// Everything the oracles need from one trajectory: |x| on the grid from
/// -tau_max, the maximal function M0 from t = 0, and a region partition of
/// [0, T] for the comparison pair.
class OracleEvidence {
 public:
  /// `magnitude` must start exactly tau_max before t = 0.
  OracleEvidence(SampledSeries magnitude, CoefficientPair pair, double eta, const OracleSettings& settings)
      : mag_(std::move(magnitude)), pair_(std::move(pair)), eta_(eta), settings_(settings) {
    if (!(eta_ > 0.0)) throw ConfigError("eta must be positive");
    h_ = mag_.grid.h;
    w_ = whole_steps(pair_.tau_max(), h_, "tau_max");
    if (mag_.grid.origin_steps != -static_cast<std::ptrdiff_t>(w_)) {
      throw ConfigError("oracle magnitude series must start at -tau_max");
    }
    if (mag_.size() < w_ + 2) throw ConfigError("oracle needs a trajectory beyond t = 0");
    m0_ = maximal_function(mag_, pair_.tau_max());
    resolution_ = settings_.resolution.value_or(1e-3 * pair_.tau_max());
    index_.emplace(partition_regions(pair_, eta_, 0.0, end_time(), resolution_, settings_.boundary));
    delta_ = 1.0 - eta_ / (2.0 * pair_.max_a());
  }

  static OracleEvidence from_trajectory(const Trajectory& traj, CoefficientPair pair, double eta,
                                        const OracleSettings& settings) {
    if (std::abs(traj.tau_max() - pair.tau_max()) > 1e-12 * pair.tau_max()) {
      throw ConfigError("trajectory and pair disagree on tau_max");
    }
    return OracleEvidence(magnitude(traj), std::move(pair), eta, settings);
  }

  /// Nodes at t = 0, h, ..., T.
  [[nodiscard]] std::size_t count() const { return mag_.size() - w_; }
  [[nodiscard]] double time(std::size_t k) const { return m0_.time(k); }
  [[nodiscard]] double end_time() const { return time(count() - 1); }
  [[nodiscard]] double step() const { return h_; }
  [[nodiscard]] double x(std::size_t k) const { return mag_.values[k + w_]; }
  [[nodiscard]] double m0(std::size_t k) const { return m0_.values[k]; }
  [[nodiscard]] const SampledSeries& m0_series() const { return m0_; }
  [[nodiscard]] const CoefficientPair& pair() const { return pair_; }
  [[nodiscard]] const MeasureIndex& measures() const { return *index_; }
  [[nodiscard]] double eta() const { return eta_; }
  [[nodiscard]] double delta() const { return delta_; }
  [[nodiscard]] double resolution() const { return resolution_; }
  [[nodiscard]] const OracleSettings& settings() const { return settings_; }

  /// Index of the first node at or after t.
  [[nodiscard]] std::size_t node_at_or_after(double t) const {
    const double p = std::ceil(t / h_ - 1e-9);
    return static_cast<std::size_t>(std::clamp(p, 0.0, static_cast<double>(count() - 1)));
  }
  /// Index of the last node at or before t.
  [[nodiscard]] std::size_t node_at_or_before(double t) const {
    const double p = std::floor(t / h_ + 1e-9);
    return static_cast<std::size_t>(std::clamp(p, 0.0, static_cast<double>(count() - 1)));
  }

  [[nodiscard]] double max_m0() const { return *std::max_element(m0_.values.begin(), m0_.values.end()); }

 private:
  SampledSeries mag_;
  CoefficientPair pair_;
  double eta_;
  OracleSettings settings_;
  double h_ = 0.0;
  std::size_t w_ = 0;
  SampledSeries m0_;
  double resolution_ = 0.0;
  std::optional<MeasureIndex> index_;
  double delta_ = 0.0;
};

namespace detail {

inline void record(OracleReport& report, const OracleSettings& s, double t1, double t2, double lhs, double rhs,
                   double extra_allowance = 0.0) {
  ++report.checks;
  const double allowance = s.rel_tol * std::max(std::abs(lhs), std::abs(rhs)) + s.abs_floor + extra_allowance;
  if (lhs > rhs + allowance) {
    if (report.violations.size() < s.max_recorded) {
      report.violations.push_back(Violation{t1, t2, lhs, rhs, rhs + allowance - lhs});
    }
    report.details["violation_count"] += 1.0;
  }
}

inline OracleReport make_report(std::string name, const OracleSettings& s) {
  OracleReport r;
  r.name = std::move(name);
  r.tolerance = s.rel_tol;
  return r;
}

inline std::uint64_t check_seed(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  std::uint64_t out = 0;
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  out = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out;
}

/// Node pairs k1 < k2. When S_- runs exist, at least a quarter of the pairs
/// straddle one; the remaining lengths are log-uniform in [h, T].
inline std::vector<std::pair<std::size_t, std::size_t>> sample_node_pairs(const OracleEvidence& ev, std::size_t n,
                                                                          std::uint64_t salt) {
  std::mt19937_64 rng(check_seed(ev.settings().seed, salt));
  std::vector<LabelRun> minus_runs;
  for (const auto& r : ev.measures().partition().runs) {
    if (r.label == static_cast<int>(Region::minus)) minus_runs.push_back(r);
  }
  const double h = ev.step();
  const double end = ev.end_time();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };

  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(n);
  const std::size_t straddle = minus_runs.empty() ? 0 : (n * 3 + 9) / 10;
  for (std::size_t i = 0; i < n; ++i) {
    double t1 = 0.0;
    double t2 = 0.0;
    if (i < straddle) {
      const auto& run = minus_runs[std::uniform_int_distribution<std::size_t>(0, minus_runs.size() - 1)(rng)];
      t1 = std::max(0.0, run.from - log_uniform(h, std::max(2.0 * h, end)) * unit(rng));
      t2 = std::min(end, run.to + log_uniform(h, std::max(2.0 * h, end)) * unit(rng));
    } else {
      t1 = unit(rng) * (end - h);
      t2 = std::min(end, t1 + log_uniform(h, std::max(2.0 * h, end)));
    }
    auto k1 = ev.node_at_or_before(t1);
    auto k2 = ev.node_at_or_after(t2);
    if (k2 <= k1) k2 = std::min(k1 + 1, ev.count() - 1);
    if (k2 <= k1) continue;
    out.emplace_back(k1, k2);
  }
  return out;
}

}  // namespace detail

/// M0 is nonincreasing on S_+ and S_eta: at every node classified + or eta,
/// M0(t + h) <= M0(t) + 10 h M_b max M0.
[[nodiscard]] inline OracleReport check_lemma1(const OracleEvidence& ev) {
  const auto& s = ev.settings();
  auto report = detail::make_report("lemma1_monotone_m0", s);
  const double grid_tol = 10.0 * ev.step() * ev.pair().max_b() * ev.max_m0();
  report.details["grid_tolerance"] = grid_tol;
  std::size_t skipped = 0;
  for (std::size_t k = 0; k + 1 < ev.count(); ++k) {
    const double t = ev.time(k);
    if (classify(ev.pair(), ev.eta(), t, s.boundary) == Region::minus) {
      ++skipped;
      continue;
    }
    detail::record(report, s, t, ev.time(k + 1), ev.m0(k + 1), ev.m0(k), grid_tol);
  }
  report.details["skipped_minus_nodes"] = static_cast<double>(skipped);
  return report;
}

/// M0(t2) <= M0(t1) e^{M_b mu_-(t1, t2)} on sampled pairs.
[[nodiscard]] inline OracleReport check_lemma2(const OracleEvidence& ev) {
  const auto& s = ev.settings();
  auto report = detail::make_report("lemma2_growth_bound", s);
  std::size_t straddling = 0;
  for (auto [k1, k2] : detail::sample_node_pairs(ev, s.sample_pairs, 2)) {
    const double t1 = ev.time(k1);
    const double t2 = ev.time(k2);
    const double mu_minus = ev.measures().measure(t1, t2)[1];
    if (mu_minus > 0.0) ++straddling;
    detail::record(report, s, t1, t2, ev.m0(k2), ev.m0(k1) * std::exp(ev.pair().max_b() * mu_minus));
  }
  report.details["pairs_with_minus"] = static_cast<double>(straddling);
  return report;
}

/// Case bounds on intervals that lie inside one region: every maximal run
/// (as a whole) plus random sub-intervals of each run.
[[nodiscard]] inline OracleReport check_lemma3(const OracleEvidence& ev) {
  const auto& s = ev.settings();
  auto report = detail::make_report("lemma3_case_bounds", s);
  std::mt19937_64 rng(detail::check_seed(s.seed, 3));
  const double ma = ev.pair().max_a();
  const double mb = ev.pair().max_b();
  const double half_eta = ev.eta() / 2.0;

  auto bound = [&](Region region, std::size_t k1, std::size_t k2) {
    const double len = ev.time(k2) - ev.time(k1);
    const double x1 = ev.x(k1);
    const double m1 = ev.m0(k1);
    switch (region) {
      case Region::plus: return m1 - (m1 - x1) * std::exp(-ma * len);
      case Region::eta: return std::max(ev.delta() * m1, x1 - half_eta * len * m1);
      case Region::minus: return x1 + m1 * std::expm1(mb * len);
    }
    return 0.0;
  };

  std::array<std::size_t, 3> per_region{};
  std::size_t short_runs = 0;
  const auto& runs = ev.measures().partition().runs;
  const std::size_t sub_per_run =
      runs.empty() ? 0 : std::max<std::size_t>(1, s.sample_pairs / std::max<std::size_t>(1, runs.size()));
  for (const auto& run : runs) {
    const auto k1 = ev.node_at_or_after(run.from);
    const auto k2 = ev.node_at_or_before(run.to);
    if (k2 <= k1) {
      ++short_runs;
      continue;
    }
    const auto region = static_cast<Region>(run.label);
    ++per_region[static_cast<std::size_t>(run.label)];
    detail::record(report, s, ev.time(k1), ev.time(k2), ev.x(k2), bound(region, k1, k2));
    std::uniform_int_distribution<std::size_t> pick(k1, k2);
    for (std::size_t i = 0; i < sub_per_run; ++i) {
      auto a = pick(rng);
      auto b = pick(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      detail::record(report, s, ev.time(a), ev.time(b), ev.x(b), bound(region, a, b));
    }
  }
  report.details["runs_eta"] = static_cast<double>(per_region[0]);
  report.details["runs_minus"] = static_cast<double>(per_region[1]);
  report.details["runs_plus"] = static_cast<double>(per_region[2]);
  if (short_runs > 0) {
    report.notes.push_back(std::to_string(short_runs) + " runs shorter than one grid step skipped");
  }
  return report;
}

/// Right-hand side of the master inequality for |x(t2)|.
[[nodiscard]] inline double master_bound(double x1, double m1, double mu_eta, double mu_minus, double mu_plus,
                                         double eta, double delta, double max_a, double max_b) {
  const double inner = std::max(delta * m1, x1 - 0.5 * eta * mu_eta * m1);
  return m1 * std::exp(max_b * mu_minus) - (m1 - inner) * std::exp(-max_a * mu_plus);
}

/// The master inequality on sampled pairs spanning mixed regions.
[[nodiscard]] inline OracleReport check_lemma4(const OracleEvidence& ev) {
  const auto& s = ev.settings();
  auto report = detail::make_report("lemma4_master_inequality", s);
  for (auto [k1, k2] : detail::sample_node_pairs(ev, s.sample_pairs, 4)) {
    const double t1 = ev.time(k1);
    const double t2 = ev.time(k2);
    const auto mu = ev.measures().measure(t1, t2);
    const double rhs = master_bound(ev.x(k1), ev.m0(k1), mu[0], mu[1], mu[2], ev.eta(), ev.delta(),
                                    ev.pair().max_a(), ev.pair().max_b());
    detail::record(report, s, t1, t2, ev.x(k2), rhs);
  }
  return report;
}

/// |x(t)| <= K M0(t0) and, with a decay rate, |x(t)| <= K~ M0(t0) e^{-alpha (t - t0)}
/// for every node t >= t0, constants derived from this trajectory's M0 at the window starts.
[[nodiscard]] inline OracleReport check_theorem1_envelope(const OracleEvidence& ev, const EtaCertificate& cert) {
  const auto& s = ev.settings();
  auto report = detail::make_report("theorem1_envelope", s);
  if (cert.verdict != Verdict::certified) throw Error("envelope check needs a certified eta-condition");
  const double len = cert.window_length();
  std::vector<double> m0_windows;
  for (std::size_t k = 0;; ++k) {
    const double tk = cert.t0 + static_cast<double>(k) * len;
    if (tk > ev.end_time() + 1e-9) break;
    m0_windows.push_back(ev.m0(ev.node_at_or_after(tk)));
  }
  if (m0_windows.empty()) throw Error("trajectory ends before t0");
  const auto constants = theorem1_constants(cert, m0_windows);
  const double base = m0_windows.front();
  report.details["k_star"] = static_cast<double>(constants.k_star);
  report.details["K_prime"] = constants.k_prime;
  report.details["K"] = constants.k;
  if (constants.k_tilde) report.details["K_tilde"] = *constants.k_tilde;
  if (cert.alpha) report.details["alpha"] = *cert.alpha;
  report.details["M0_t0"] = base;

  for (std::size_t k = ev.node_at_or_after(cert.t0); k < ev.count(); ++k) {
    const double t = ev.time(k);
    detail::record(report, s, cert.t0, t, ev.x(k), constants.k * base);
    if (constants.k_tilde && cert.alpha) {
      detail::record(report, s, cert.t0, t, ev.x(k), *constants.k_tilde * base * std::exp(-*cert.alpha * (t - cert.t0)));
    }
  }
  return report;
}

/// Lemmas 1-4, plus the envelope when a certified certificate is supplied.
[[nodiscard]] inline std::vector<OracleReport> run_oracle_battery(const OracleEvidence& ev,
                                                                  const EtaCertificate* cert = nullptr) {
  std::vector<OracleReport> out;
  out.push_back(check_lemma1(ev));
  out.push_back(check_lemma2(ev));
  out.push_back(check_lemma3(ev));
  out.push_back(check_lemma4(ev));
  if (cert != nullptr && cert->verdict == Verdict::certified) out.push_back(check_theorem1_envelope(ev, *cert));
  return out;
}

}  // namespace halanay
