#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "halanay/error.hpp"
#include "halanay/piecewise.hpp"

namespace halanay {

/// Values of the decay coefficient a(t) and the delay gain b(t) at one instant.
struct CoefficientSample {
  double a = 0.0;
  double b = 0.0;
};

/// The pair {a(.), b(.)} of a scalar delay inequality together with its
/// uniform bounds M_a, M_b and the delay bound tau_max.
class CoefficientPair {
 public:
  using Evaluator = std::function<CoefficientSample(double)>;

  CoefficientPair(PiecewiseFunction a, PiecewiseFunction b, double max_a, double max_b, double tau_max)
      : CoefficientPair(
            [a = std::move(a), b = std::move(b)](double t) { return CoefficientSample{a(t), b(t)}; },
            max_a, max_b, tau_max) {}

  CoefficientPair(Evaluator eval, double max_a, double max_b, double tau_max)
      : eval_(std::move(eval)), max_a_(max_a), max_b_(max_b), tau_max_(tau_max) {
    if (!(max_a_ > 0.0)) throw ConfigError("M_a must be positive");
    if (!(max_b_ >= 0.0)) throw ConfigError("M_b must be nonnegative");
    if (!(tau_max_ > 0.0)) throw ConfigError("tau_max must be positive");
  }

  [[nodiscard]] CoefficientSample operator()(double t) const { return eval_(t); }

  [[nodiscard]] double margin(double t) const {
    const auto s = eval_(t);
    return s.a - std::abs(s.b);
  }

  [[nodiscard]] double max_a() const { return max_a_; }
  [[nodiscard]] double max_b() const { return max_b_; }
  [[nodiscard]] double tau_max() const { return tau_max_; }

  /// Checks 0 < a <= M_a and |b| <= M_b on a uniform grid over [t1, t2].
  void validate(double t1, double t2, double resolution) const {
    const auto n = static_cast<std::size_t>(std::ceil((t2 - t1) / resolution));
    for (std::size_t i = 0; i <= n; ++i) {
      const double t = t1 + (t2 - t1) * static_cast<double>(i) / static_cast<double>(n);
      const auto s = eval_(t);
      if (!(s.a > 0.0)) throw ConfigError("a(t) must be positive; a(" + std::to_string(t) + ") = " + std::to_string(s.a));
      if (s.a > max_a_ * (1.0 + 1e-9)) {
        throw ConfigError("a(" + std::to_string(t) + ") = " + std::to_string(s.a) + " exceeds M_a = " +
                          std::to_string(max_a_));
      }
      if (std::abs(s.b) > max_b_ * (1.0 + 1e-9)) {
        throw ConfigError("|b(" + std::to_string(t) + ")| = " + std::to_string(std::abs(s.b)) + " exceeds M_b = " +
                          std::to_string(max_b_));
      }
    }
  }

 private:
  Evaluator eval_;
  double max_a_;
  double max_b_;
  double tau_max_;
};

/// Classification of an instant by the margin a(t) - |b(t)|.
enum class Region : int { eta = 0, minus = 1, plus = 2 };

[[nodiscard]] inline const char* to_string(Region r) {
  switch (r) {
    case Region::eta: return "eta";
    case Region::minus: return "-";
    case Region::plus: return "+";
  }
  return "?";
}

/// strict: margin > eta belongs to S_eta (margin == eta goes to S_+).
/// inclusive: margin >= eta belongs to S_eta.
enum class EtaBoundary { strict, inclusive };

/// Relative allowance for floating cancellation when comparing margins.
inline constexpr double kMarginRoundoff = 1e-12;

[[nodiscard]] inline Region classify_margin(double a, double b, double eta, EtaBoundary boundary = EtaBoundary::strict) {
  const double m = a - std::abs(b);
  const double r = kMarginRoundoff * (std::abs(a) + std::abs(b));
  const bool in_eta = boundary == EtaBoundary::strict ? m > eta + r : m >= eta - r;
  if (in_eta) return Region::eta;
  if (m < -r) return Region::minus;
  return Region::plus;
}

[[nodiscard]] inline Region classify(const CoefficientPair& pair, double eta, double t,
                                     EtaBoundary boundary = EtaBoundary::strict) {
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  const auto s = pair(t);
  return classify_margin(s.a, s.b, eta, boundary);
}

/// A maximal run of constant label produced by the grid/bisection sweep.
struct LabelRun {
  double from = 0.0;
  double to = 0.0;
  int label = 0;
};

struct LabelPartition {
  std::vector<LabelRun> runs;
  std::size_t boundaries = 0;
  double tolerance = 0.0;  // bisection tolerance used at every boundary
};

/// Partitions (t1, t2) by an integer-valued label function: labels are sampled
/// on a uniform grid of the given resolution, and every grid cell whose end
/// labels differ is bisected down to resolution/1024.
template <class LabelFn>
[[nodiscard]] LabelPartition partition_labels(LabelFn&& label, double t1, double t2, double resolution) {
  if (!(t1 < t2)) throw ConfigError("partition interval must satisfy t1 < t2");
  if (!(resolution > 0.0)) throw ConfigError("resolution must be positive");
  LabelPartition out;
  out.tolerance = resolution / 1024.0;
  const double tol = out.tolerance;
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((t2 - t1) / resolution - 1e-9)));

  auto emit = [&](double lo, double hi, int l) {
    if (!(hi > lo)) return;
    if (!out.runs.empty() && out.runs.back().label == l) {
      out.runs.back().to = hi;
    } else {
      out.runs.push_back(LabelRun{lo, hi, l});
    }
  };

  std::function<void(double, int, double, int)> refine = [&](double lo, int llo, double hi, int lhi) {
    if (llo == lhi) {
      emit(lo, hi, llo);
      return;
    }
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol) {
      emit(lo, mid, llo);
      emit(mid, hi, lhi);
      ++out.boundaries;
      return;
    }
    const int lmid = label(mid);
    refine(lo, llo, mid, lmid);
    refine(mid, lmid, hi, lhi);
  };

  auto node = [&](std::size_t i) {
    return i == n ? t2 : t1 + (t2 - t1) * static_cast<double>(i) / static_cast<double>(n);
  };
  // The interval is open on the right: sample just inside t2.
  auto node_label = [&](std::size_t i) { return label(i == n ? t2 - 1e-3 * tol : node(i)); };

  int prev = node_label(0);
  for (std::size_t i = 1; i <= n; ++i) {
    const int cur = node_label(i);
    refine(node(i - 1), prev, node(i), cur);
    prev = cur;
  }
  return out;
}

/// Lebesgue measures of S_eta, S_-, S_+ over (t1, t2).
struct MeasureTriple {
  double mu_eta = 0.0;
  double mu_minus = 0.0;
  double mu_plus = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  std::size_t boundaries = 0;
  double tolerance = 0.0;

  [[nodiscard]] double total() const { return mu_eta + mu_minus + mu_plus; }
};

[[nodiscard]] inline LabelPartition partition_regions(const CoefficientPair& pair, double eta, double t1, double t2,
                                                      double resolution, EtaBoundary boundary = EtaBoundary::strict) {
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  return partition_labels(
      [&](double t) { return static_cast<int>(classify(pair, eta, t, boundary)); }, t1, t2, resolution);
}

[[nodiscard]] inline MeasureTriple partition_measures(const CoefficientPair& pair, double eta, double t1, double t2,
                                                      double resolution, EtaBoundary boundary = EtaBoundary::strict) {
  const auto p = partition_regions(pair, eta, t1, t2, resolution, boundary);
  MeasureTriple m;
  m.t1 = t1;
  m.t2 = t2;
  m.boundaries = p.boundaries;
  m.tolerance = p.tolerance;
  for (const auto& run : p.runs) {
    const double len = run.to - run.from;
    switch (static_cast<Region>(run.label)) {
      case Region::eta: m.mu_eta += len; break;
      case Region::minus: m.mu_minus += len; break;
      case Region::plus: m.mu_plus += len; break;
    }
  }
  return m;
}

/// Constant-time region measures over arbitrary subintervals of a
/// precomputed partition (prefix sums over the runs).
class MeasureIndex {
 public:
  explicit MeasureIndex(LabelPartition partition) : partition_(std::move(partition)) {
    prefix_.resize(partition_.runs.size() + 1);
    for (std::size_t i = 0; i < partition_.runs.size(); ++i) {
      prefix_[i + 1] = prefix_[i];
      const auto& r = partition_.runs[i];
      prefix_[i + 1][static_cast<std::size_t>(r.label)] += r.to - r.from;
    }
  }

  [[nodiscard]] const LabelPartition& partition() const { return partition_; }

  /// Measures by label {eta, minus, plus} over (t1, t2), clipped to the partition span.
  [[nodiscard]] std::array<double, 3> measure(double t1, double t2) const {
    auto c2 = cumulative(t2);
    const auto c1 = cumulative(t1);
    for (std::size_t k = 0; k < 3; ++k) c2[k] = std::max(0.0, c2[k] - c1[k]);
    return c2;
  }

  [[nodiscard]] MeasureTriple triple(double t1, double t2) const {
    const auto m = measure(t1, t2);
    MeasureTriple out;
    out.mu_eta = m[0];
    out.mu_minus = m[1];
    out.mu_plus = m[2];
    out.t1 = t1;
    out.t2 = t2;
    out.tolerance = partition_.tolerance;
    return out;
  }

 private:
  [[nodiscard]] std::array<double, 3> cumulative(double t) const {
    const auto& runs = partition_.runs;
    std::array<double, 3> c{};
    if (runs.empty() || t <= runs.front().from) return c;
    auto it = std::upper_bound(runs.begin(), runs.end(), t, [](double v, const LabelRun& r) { return v < r.from; });
    const auto idx = static_cast<std::size_t>(std::distance(runs.begin(), it)) - 1;
    c = prefix_[idx];
    const auto& r = runs[idx];
    c[static_cast<std::size_t>(r.label)] += std::min(t, r.to) - r.from;
    return c;
  }

  LabelPartition partition_;
  std::vector<std::array<double, 3>> prefix_;
};

struct BoundEstimate {
  double inf = 0.0;
  double sup = 0.0;
};

/// Grid estimate of inf/sup of `f` over [t1, t2], sharpened by two nested
/// local sub-grids around the extremal grid points. An estimate, not a
/// rigorous enclosure.
template <class Fn>
[[nodiscard]] BoundEstimate bound_estimates(Fn&& f, double t1, double t2, double resolution) {
  if (!(t1 < t2)) throw ConfigError("bound interval must satisfy t1 < t2");
  if (!(resolution > 0.0)) throw ConfigError("resolution must be positive");
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((t2 - t1) / resolution - 1e-9)));
  const double step = (t2 - t1) / static_cast<double>(n);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double t_lo = t1;
  double t_hi = t1;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = i == n ? t2 : t1 + (t2 - t1) * static_cast<double>(i) / static_cast<double>(n);
    const double v = f(t);
    if (v < lo) {
      lo = v;
      t_lo = t;
    }
    if (v > hi) {
      hi = v;
      t_hi = t;
    }
  }
  auto polish = [&](double center, double width, bool want_max, double& best, double& best_t) {
    constexpr int kSub = 64;
    for (int pass = 0; pass < 2; ++pass) {
      const double a = std::max(t1, center - width);
      const double b = std::min(t2, center + width);
      for (int k = 0; k <= kSub; ++k) {
        const double t = a + (b - a) * k / kSub;
        const double v = f(t);
        if (want_max ? v > best : v < best) {
          best = v;
          best_t = t;
        }
      }
      center = best_t;
      width = (b - a) / kSub;
    }
  };
  polish(t_lo, step, false, lo, t_lo);
  polish(t_hi, step, true, hi, t_hi);
  return BoundEstimate{lo, hi};
}

}  // namespace halanay
