#pragma once

// Finite-horizon checks of the eta-condition, the common eta-condition and
// the periodic-network condition, with the explicit stability constants of
// the generalized Halanay estimate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halanay/coefficients.hpp"
#include "halanay/error.hpp"
#include "halanay/system.hpp"

namespace halanay {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// r = [e^{M_b mu_-} - 1] e^{M_a (N+1) tau_max} / min{1/M_a, mu_eta}.
/// Zero numerator gives 0 (also for 0/0); zero denominator otherwise gives +inf.
[[nodiscard]] inline double window_ratio_value(double mu_minus, double mu_eta, double max_a, double max_b, int n,
                                               double tau_max) {
  if (mu_minus <= 0.0 || max_b == 0.0) return 0.0;
  const double den = std::min(1.0 / max_a, mu_eta);
  if (!(den > 0.0)) return kInfinity;
  return std::expm1(max_b * mu_minus) * std::exp(max_a * (n + 1) * tau_max) / den;
}

/// Same ratio under the alternative reading of the numerator exponent,
/// e^{M_a mu_+} in place of e^{M_a (N+1) tau_max}.
[[nodiscard]] inline double window_ratio_mu_plus_reading(double mu_minus, double mu_eta, double mu_plus,
                                                         double max_a, double max_b) {
  if (mu_minus <= 0.0 || max_b == 0.0) return 0.0;
  const double den = std::min(1.0 / max_a, mu_eta);
  if (!(den > 0.0)) return kInfinity;
  return std::expm1(max_b * mu_minus) * std::exp(max_a * mu_plus) / den;
}

struct WindowStats {
  std::size_t k = 0;
  double t_k = 0.0;
  double t_k_minus = 0.0;  // t_k - tau_max
  double mu_eta = 0.0;     // over (t_k, t_{k+1}^-)
  double mu_eta_full = 0.0;  // over (t_k, t_{k+1})
  double mu_minus = 0.0;   // over (t_k, t_{k+1})
  double mu_plus = 0.0;    // over (t_k, t_{k+1})
  double ratio = 0.0;
  double ratio_mu_plus_reading = 0.0;
  std::size_t boundaries = 0;
  double tolerance = 0.0;

  [[nodiscard]] bool ratio_infinite() const { return std::isinf(ratio); }
};

[[nodiscard]] inline WindowStats window_ratio(const CoefficientPair& pair, double eta, double t0, int n,
                                              std::size_t k, double resolution,
                                              EtaBoundary boundary = EtaBoundary::strict) {
  if (n < 1) throw ConfigError("N must be a positive integer");
  const double tau = pair.tau_max();
  const double len = (n + 1) * tau;
  WindowStats w;
  w.k = k;
  w.t_k = t0 + static_cast<double>(k) * len;
  w.t_k_minus = w.t_k - tau;
  const double t_next = w.t_k + len;
  const MeasureIndex index(partition_regions(pair, eta, w.t_k, t_next, resolution, boundary));
  const auto full = index.measure(w.t_k, t_next);
  const auto head = index.measure(w.t_k, t_next - tau);
  w.mu_eta = head[0];
  w.mu_eta_full = full[0];
  w.mu_minus = full[1];
  w.mu_plus = full[2];
  w.boundaries = index.partition().boundaries;
  w.tolerance = index.partition().tolerance;
  w.ratio = window_ratio_value(w.mu_minus, w.mu_eta, pair.max_a(), pair.max_b(), n, tau);
  w.ratio_mu_plus_reading = window_ratio_mu_plus_reading(w.mu_minus, w.mu_eta, w.mu_plus, pair.max_a(), pair.max_b());
  return w;
}

enum class Verdict { certified, refuted, inconclusive };

[[nodiscard]] inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct CertifyOptions {
  double eta = 0.0;
  double t0 = 0.0;
  int n = 1;
  double horizon = 0.0;
  std::optional<double> resolution;            // default 1e-3 * tau_max
  std::optional<double> divergence_threshold;  // default 10 * max(1/M_a, tau_max)
  EtaBoundary boundary = EtaBoundary::strict;
};

struct EtaCertificate {
  double eta = 0.0;
  double t0 = 0.0;
  int n = 1;
  double tau_max = 0.0;
  double max_a = 0.0;
  double max_b = 0.0;
  double delta = 0.0;
  EtaBoundary boundary = EtaBoundary::strict;
  double resolution = 0.0;
  std::vector<WindowStats> windows;
  double c_star_est = 0.0;
  double sum_mu_eta = 0.0;
  double divergence_threshold = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::string reason;
  std::optional<double> epsilon;
  std::optional<double> c;
  std::optional<double> lambda0;
  std::optional<double> alpha;
  std::optional<double> k_bound;

  [[nodiscard]] double window_length() const { return (n + 1) * tau_max; }
};

/// Relative band around eta/2 inside which a failing tail is reported as
/// inconclusive instead of refuted.
inline constexpr double kNearThresholdBand = 0.01;

[[nodiscard]] inline EtaCertificate check_eta_condition(const CoefficientPair& pair, const CertifyOptions& opt) {
  if (!(opt.eta > 0.0)) throw ConfigError("eta must be positive");
  if (opt.n < 1) throw ConfigError("N must be a positive integer");
  if (!(opt.t0 >= 0.0)) throw ConfigError("t0 must be nonnegative");

  EtaCertificate cert;
  cert.eta = opt.eta;
  cert.t0 = opt.t0;
  cert.n = opt.n;
  cert.tau_max = pair.tau_max();
  cert.max_a = pair.max_a();
  cert.max_b = pair.max_b();
  cert.boundary = opt.boundary;
  cert.delta = 1.0 - opt.eta / (2.0 * cert.max_a);
  if (!(cert.delta > 0.0 && cert.delta < 1.0)) throw ConfigError("eta must lie in (0, 2 M_a)");
  cert.resolution = opt.resolution.value_or(1e-3 * cert.tau_max);
  cert.divergence_threshold = opt.divergence_threshold.value_or(10.0 * std::max(1.0 / cert.max_a, cert.tau_max));

  const double len = cert.window_length();
  const auto count = static_cast<std::size_t>(std::floor((opt.horizon - opt.t0) / len + 1e-9));
  if (!(opt.horizon > opt.t0) || count < 8) {
    throw HorizonError("horizon covers " + std::to_string(count) + " windows of length " + std::to_string(len) +
                       "; at least 8 are required");
  }
  pair.validate(opt.t0, opt.t0 + static_cast<double>(count) * len, cert.resolution);

  double eps = kInfinity;
  double slack = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    auto w = window_ratio(pair, opt.eta, opt.t0, opt.n, k, cert.resolution, opt.boundary);
    cert.sum_mu_eta += w.mu_eta;
    slack += w.tolerance * static_cast<double>(w.boundaries);
    eps = std::min(eps, w.mu_eta);
    cert.windows.push_back(w);
  }

  const std::size_t tail_begin = count / 2;
  double tail_max = 0.0;
  double tail_min = kInfinity;
  bool tail_infinite = false;
  for (std::size_t k = tail_begin; k < count; ++k) {
    const double r = cert.windows[k].ratio;
    tail_max = std::max(tail_max, r);
    tail_min = std::min(tail_min, r);
    tail_infinite = tail_infinite || std::isinf(r);
  }
  cert.c_star_est = tail_max;

  const double half = opt.eta / 2.0;
  const bool diverges = cert.sum_mu_eta >= cert.divergence_threshold - slack;
  if (tail_max < half && diverges) {
    cert.verdict = Verdict::certified;
    cert.reason = "tail ratios below eta/2 and cumulative mu_eta above the divergence threshold";
  } else if (tail_infinite) {
    cert.verdict = Verdict::refuted;
    cert.reason = "a tail window has mu_eta = 0 with mu_- > 0 (ratio infinite)";
  } else if (tail_min >= half * (1.0 + kNearThresholdBand)) {
    cert.verdict = Verdict::refuted;
    cert.reason = "every tail ratio is at or above eta/2";
  } else {
    cert.verdict = Verdict::inconclusive;
    cert.reason = tail_max < half ? "cumulative mu_eta below the divergence threshold"
                                  : "tail ratios straddle or hover near eta/2";
  }

  if (tail_max < half) cert.c = 0.5 * (tail_max + half);
  if (eps > 0.0 && std::isfinite(eps)) cert.epsilon = eps;
  if (cert.verdict == Verdict::certified && cert.epsilon) {
    const double decay = std::exp(-cert.max_a * len);
    const double lambda0 = 1.0 - (half - *cert.c) * std::min(1.0 / cert.max_a, *cert.epsilon) * decay;
    cert.lambda0 = lambda0;
    cert.alpha = -std::log(lambda0) / len;
  }
  return cert;
}

/// Pointwise minimum-margin reduction of n pairs (ties go to the lowest index).
[[nodiscard]] inline CoefficientPair common_pair(const std::vector<CoefficientPair>& pairs) {
  if (pairs.empty()) throw ConfigError("common_pair needs at least one pair");
  const double tau = pairs.front().tau_max();
  double m_a = 0.0;
  double m_b = 0.0;
  for (const auto& p : pairs) {
    if (std::abs(p.tau_max() - tau) > 1e-12 * tau) throw ConfigError("common_pair: pairs disagree on tau_max");
    m_a = std::max(m_a, p.max_a());
    m_b = std::max(m_b, p.max_b());
  }
  return CoefficientPair(
      [pairs](double t) {
        CoefficientSample best = pairs.front()(t);
        double best_margin = best.a - std::abs(best.b);
        for (std::size_t i = 1; i < pairs.size(); ++i) {
          const auto s = pairs[i](t);
          const double m = s.a - std::abs(s.b);
          if (m < best_margin) {
            best = s;
            best_margin = m;
          }
        }
        return best;
      },
      m_a, m_b, tau);
}

struct NetworkBounds {
  double max_a = 0.0;
  double max_b = 0.0;
};

/// Grid estimates of M_a >= sup_i (d_i - sum_j G_j|A_ij|) and
/// M_b >= sup_i sum_j F_j|B_ij| over [t1, t2]; user-supplied values win.
[[nodiscard]] inline NetworkBounds network_bounds(const NetworkSpec& net, double t1, double t2, double resolution) {
  NetworkBounds b;
  for (std::size_t i = 0; i < net.n; ++i) {
    b.max_a = std::max(b.max_a, bound_estimates([&](double t) { return net.neuron_decay(i, t); }, t1, t2, resolution).sup);
    b.max_b = std::max(b.max_b, bound_estimates([&](double t) { return net.neuron_gain(i, t); }, t1, t2, resolution).sup);
  }
  if (net.max_a) b.max_a = *net.max_a;
  if (net.max_b) b.max_b = *net.max_b;
  return b;
}

/// The common comparison pair of a network (minimum margin over neurons).
[[nodiscard]] inline CoefficientPair network_pair(const NetworkSpec& net, const NetworkBounds& bounds) {
  return common_pair(net.neuron_pairs(bounds.max_a, bounds.max_b));
}

struct PeriodicOptions {
  double eta = 0.0;
  int n = 1;
  double resolution = 1e-3;
  std::optional<double> max_a;
  std::optional<double> max_b;
};

struct PeriodicCheck {
  double eta = 0.0;
  int n = 1;
  double omega = 0.0;
  int p = 1;
  double max_a = 0.0;
  double max_b = 0.0;
  double mu_bar_eta = 0.0;
  double mu_bar_minus = 0.0;
  double lhs = 0.0;
  bool verdict = false;
  std::string diagnostic;
};

[[nodiscard]] inline PeriodicCheck check_periodic_condition(const NetworkSpec& net, const PeriodicOptions& opt) {
  net.validate();
  if (!net.period) throw ConfigError("periodic check needs the network period omega");
  if (!(opt.eta > 0.0)) throw ConfigError("eta must be positive");
  if (opt.n < 1) throw ConfigError("N must be a positive integer");
  PeriodicCheck out;
  out.eta = opt.eta;
  out.n = opt.n;
  out.omega = *net.period;
  out.p = std::max(1, static_cast<int>(std::ceil(net.tau_max / out.omega - 1e-12)));

  const auto bounds = network_bounds(net, 0.0, out.omega, opt.resolution);
  out.max_a = opt.max_a.value_or(bounds.max_a);
  out.max_b = opt.max_b.value_or(bounds.max_b);
  if (!(out.max_a > 0.0)) throw ConfigError("M_a must be positive");

  // 0: all neuron margins >= eta; 1: some margin < 0; 2: otherwise.
  auto label = [&](double t) {
    bool all_eta = true;
    for (std::size_t i = 0; i < net.n; ++i) {
      double scale = std::abs(net.decay[i](t));
      double m = net.decay[i](t);
      for (std::size_t j = 0; j < net.n; ++j) {
        const double term = net.instant_lipschitz[j] * std::abs(net.instant_gain[i * net.n + j](t)) +
                            net.delayed_lipschitz[j] * std::abs(net.delayed_gain[i * net.n + j](t));
        m -= term;
        scale += term;
      }
      const double r = kMarginRoundoff * scale;
      if (m < -r) return 1;
      if (m < opt.eta - r) all_eta = false;
    }
    return all_eta ? 0 : 2;
  };
  const auto part = partition_labels(label, 0.0, out.omega, opt.resolution);
  for (const auto& run : part.runs) {
    if (run.label == 0) out.mu_bar_eta += run.to - run.from;
    if (run.label == 1) out.mu_bar_minus += run.to - run.from;
  }

  const double p = out.p;
  const double n = opt.n;
  if (out.mu_bar_minus <= 0.0) {
    out.lhs = 0.0;
  } else {
    const double den = std::min(1.0 / out.max_a, p * n * out.mu_bar_eta);
    out.lhs = den > 0.0 ? std::expm1(out.max_b * p * (n + 1) * out.mu_bar_minus) *
                              std::exp(out.max_a * p * (n + 1) * out.omega) / den
                        : kInfinity;
  }
  out.verdict = out.mu_bar_eta > 0.0 && out.lhs < opt.eta / 2.0;
  if (std::isinf(out.lhs)) {
    out.diagnostic = "ratio infinite: mu_bar_eta = 0 while mu_bar_minus > 0";
  } else if (out.mu_bar_eta <= 0.0) {
    out.diagnostic = "mu_bar_eta = 0";
  } else if (!out.verdict) {
    out.diagnostic = "lhs >= eta/2";
  } else {
    out.diagnostic = "condition holds";
  }
  return out;
}

struct StabilityConstants {
  std::size_t k_star = 0;
  double k_prime = 1.0;
  double k = 1.0;
  std::optional<double> k_tilde;
};

/// Bound constants for a certified pair. `m0_at_windows[k]` is M0(t_k) of a
/// trajectory, for as many window starts as the trajectory covers.
[[nodiscard]] inline StabilityConstants theorem1_constants(const EtaCertificate& cert,
                                                           std::span<const double> m0_at_windows) {
  if (cert.verdict != Verdict::certified || !cert.c) {
    throw Error("stability constants need a certified eta-condition");
  }
  if (m0_at_windows.empty()) throw Error("stability constants need M0(t_0)");
  StabilityConstants out;
  // k*: first window from which every computed ratio is <= C.
  out.k_star = cert.windows.size();
  while (out.k_star > 0 && cert.windows[out.k_star - 1].ratio <= *cert.c) --out.k_star;

  const double base = m0_at_windows[0];
  if (base > 0.0) {
    const std::size_t last = std::min(out.k_star, m0_at_windows.size() - 1);
    for (std::size_t k = 0; k <= last; ++k) out.k_prime = std::max(out.k_prime, m0_at_windows[k] / base);
  }
  const double tau = cert.tau_max;
  out.k = out.k_prime * std::exp(cert.max_b * cert.n * tau);
  if (cert.alpha && cert.lambda0) {
    const double len = cert.window_length();
    const auto ks = static_cast<double>(out.k_star);
    const double tail = out.k_prime * std::exp(cert.max_b * len) * std::pow(*cert.lambda0, -(ks + 1.0));
    out.k_tilde = std::max(out.k, tail) * std::exp(*cert.alpha * ks * len);
  }
  return out;
}

}  // namespace halanay
