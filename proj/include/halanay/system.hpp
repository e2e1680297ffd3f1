#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "halanay/coefficients.hpp"
#include "halanay/error.hpp"
#include "halanay/piecewise.hpp"

namespace halanay {

/// Built-in activation functions; each is globally Lipschitz with constant 1.
enum class InnerFunction { identity, tanh, arctan, sin };

[[nodiscard]] inline double apply(InnerFunction f, double x) {
  switch (f) {
    case InnerFunction::identity: return x;
    case InnerFunction::tanh: return std::tanh(x);
    case InnerFunction::arctan: return std::atan(x);
    case InnerFunction::sin: return std::sin(x);
  }
  return x;
}

[[nodiscard]] constexpr double lipschitz_constant(InnerFunction) { return 1.0; }

[[nodiscard]] inline InnerFunction inner_function_from_string(const std::string& name) {
  if (name == "identity") return InnerFunction::identity;
  if (name == "tanh") return InnerFunction::tanh;
  if (name == "arctan") return InnerFunction::arctan;
  if (name == "sin") return InnerFunction::sin;
  throw ConfigError("unknown inner function '" + name + "' (expected identity, tanh, arctan or sin)");
}

[[nodiscard]] inline const char* to_string(InnerFunction f) {
  switch (f) {
    case InnerFunction::identity: return "identity";
    case InnerFunction::tanh: return "tanh";
    case InnerFunction::arctan: return "arctan";
    case InnerFunction::sin: return "sin";
  }
  return "?";
}

/// How the integrator treats delays that approach zero.
///   strict: reject any delay below 4h;
///   clamp:  replace tau(t) by max(tau(t), 4h) and count the clamps;
///   exact:  use tau as given, with left limits at step ends; the delayed
///           argument must never lie ahead of the current step start.
enum class DelayMode { strict, clamp, exact };

[[nodiscard]] inline DelayMode delay_mode_from_string(const std::string& s) {
  if (s == "strict") return DelayMode::strict;
  if (s == "clamp") return DelayMode::clamp;
  if (s == "exact") return DelayMode::exact;
  throw ConfigError("unknown delay mode '" + s + "' (expected strict, clamp or exact)");
}

/// n-neuron delayed network
///   u_i' = -d_i(t) u_i + sum_j A_ij(t) g_j(u_j(t)) + sum_j B_ij(t) f_j(u_j(t - tau_ij(t))) + I_i(t).
/// Matrices are stored row-major (index i*n + j).
struct NetworkSpec {
  std::size_t n = 0;
  std::vector<PiecewiseFunction> decay;
  std::vector<PiecewiseFunction> instant_gain;
  std::vector<PiecewiseFunction> delayed_gain;
  std::vector<PiecewiseFunction> delays;
  std::vector<InnerFunction> instant_fn;
  std::vector<InnerFunction> delayed_fn;
  std::vector<double> instant_lipschitz;
  std::vector<double> delayed_lipschitz;
  std::vector<PiecewiseFunction> input;
  double tau_max = 1.0;
  DelayMode delay_mode = DelayMode::strict;
  std::optional<double> period;
  std::optional<double> max_a;
  std::optional<double> max_b;

  void validate() const {
    if (n == 0) throw ConfigError("network size must be positive");
    auto need = [](std::size_t got, std::size_t want, const char* what) {
      if (got != want) {
        throw ConfigError(std::string(what) + " has " + std::to_string(got) + " entries, expected " +
                          std::to_string(want));
      }
    };
    need(decay.size(), n, "d");
    need(instant_gain.size(), n * n, "A");
    need(delayed_gain.size(), n * n, "B");
    need(delays.size(), n * n, "tau");
    need(instant_fn.size(), n, "g");
    need(delayed_fn.size(), n, "f");
    need(instant_lipschitz.size(), n, "G");
    need(delayed_lipschitz.size(), n, "F");
    need(input.size(), n, "I");
    if (!(tau_max > 0.0)) throw ConfigError("tau_max must be positive");
    if (period && !(*period > 0.0)) throw ConfigError("omega must be positive");
    for (std::size_t j = 0; j < n; ++j) {
      if (instant_lipschitz[j] < lipschitz_constant(instant_fn[j])) {
        throw ConfigError("G_" + std::to_string(j + 1) + " is below the Lipschitz constant of g_" +
                          std::to_string(j + 1));
      }
      if (delayed_lipschitz[j] < lipschitz_constant(delayed_fn[j])) {
        throw ConfigError("F_" + std::to_string(j + 1) + " is below the Lipschitz constant of f_" +
                          std::to_string(j + 1));
      }
    }
  }

  /// d_i - sum_j G_j |A_ij| : the decay coefficient of neuron i's comparison inequality.
  [[nodiscard]] double neuron_decay(std::size_t i, double t) const {
    double v = decay[i](t);
    for (std::size_t j = 0; j < n; ++j) v -= instant_lipschitz[j] * std::abs(instant_gain[i * n + j](t));
    return v;
  }

  /// sum_j F_j |B_ij| : the delayed gain of neuron i's comparison inequality.
  [[nodiscard]] double neuron_gain(std::size_t i, double t) const {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += delayed_lipschitz[j] * std::abs(delayed_gain[i * n + j](t));
    return v;
  }

  /// One comparison pair per neuron, sharing the supplied bounds.
  [[nodiscard]] std::vector<CoefficientPair> neuron_pairs(double m_a, double m_b) const {
    std::vector<CoefficientPair> pairs;
    pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      pairs.emplace_back(
          [net = *this, i](double t) { return CoefficientSample{net.neuron_decay(i, t), net.neuron_gain(i, t)}; },
          m_a, m_b, tau_max);
    }
    return pairs;
  }
};

/// Scalar delay equation x' = -a(t) x + b(t) x(t - tau(t)).
struct ScalarDde {
  PiecewiseFunction a;
  PiecewiseFunction b;
  double max_a = 1.0;
  double max_b = 1.0;
  PiecewiseFunction tau;
  double tau_max = 1.0;
  DelayMode delay_mode = DelayMode::strict;

  [[nodiscard]] CoefficientPair pair() const { return CoefficientPair(a, b, max_a, max_b, tau_max); }

  [[nodiscard]] NetworkSpec as_network() const {
    NetworkSpec net;
    net.n = 1;
    net.decay = {a};
    net.instant_gain = {PiecewiseFunction::constant(0.0)};
    net.delayed_gain = {b};
    net.delays = {tau};
    net.instant_fn = {InnerFunction::identity};
    net.delayed_fn = {InnerFunction::identity};
    net.instant_lipschitz = {1.0};
    net.delayed_lipschitz = {1.0};
    net.input = {PiecewiseFunction::constant(0.0)};
    net.tau_max = tau_max;
    net.delay_mode = delay_mode;
    net.max_a = max_a;
    net.max_b = max_b;
    return net;
  }
};

using SystemSpec = std::variant<ScalarDde, NetworkSpec>;

[[nodiscard]] inline NetworkSpec to_network(const SystemSpec& s) {
  if (const auto* scalar = std::get_if<ScalarDde>(&s)) return scalar->as_network();
  return std::get<NetworkSpec>(s);
}

/// Initial function per component on [-tau_max, 0].
struct HistorySegment {
  std::vector<PiecewiseFunction> phi;
};

[[nodiscard]] inline HistorySegment constant_history(std::vector<double> values) {
  HistorySegment h;
  for (double v : values) h.phi.push_back(PiecewiseFunction::constant(v));
  return h;
}

/// Piecewise-constant history with 8 equal knots on [-tau_max, 0], values
/// uniform in [-amplitude, amplitude].
[[nodiscard]] inline HistorySegment random_history(std::size_t n, double tau_max, double amplitude,
                                                   std::mt19937_64& rng) {
  constexpr int kKnots = 8;
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  HistorySegment h;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Segment> segs;
    double last = 0.0;
    for (int k = 0; k < kKnots; ++k) {
      last = dist(rng);
      const double from = -tau_max + tau_max * k / kKnots;
      const double to = -tau_max + tau_max * (k + 1) / kKnots;
      segs.push_back(Segment{from, to, Expr::constant(last)});
    }
    // The last knot also covers t = 0.
    h.phi.emplace_back(std::move(segs), Expr::constant(last));
  }
  return h;
}

}  // namespace halanay
