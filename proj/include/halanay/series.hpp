#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "halanay/error.hpp"
#include "halanay/integrator.hpp"

namespace halanay {

/// A scalar series on a uniform grid.
struct SampledSeries {
  TimeGrid grid;
  std::vector<double> values;

  [[nodiscard]] double time(std::size_t k) const { return grid.time(k); }
  [[nodiscard]] std::size_t size() const { return values.size(); }
  /// Index of the node nearest to t (clamped to the series range).
  [[nodiscard]] std::size_t index_of(double t) const {
    const double p = std::round(t / grid.h) - static_cast<double>(grid.origin_steps);
    return static_cast<std::size_t>(std::clamp(p, 0.0, static_cast<double>(values.size() - 1)));
  }
  [[nodiscard]] double at(double t) const { return values[index_of(t)]; }
};

/// out[k] = max(values[k - window .. k]) for k >= window, via a monotone deque in O(n).
[[nodiscard]] inline std::vector<double> sliding_max(std::span<const double> values, std::size_t window) {
  std::vector<double> out;
  if (values.size() <= window) return out;
  out.reserve(values.size() - window);
  std::deque<std::size_t> dq;
  for (std::size_t k = 0; k < values.size(); ++k) {
    while (!dq.empty() && values[dq.back()] <= values[k]) dq.pop_back();
    dq.push_back(k);
    if (k < window) continue;
    while (dq.front() + window < k) dq.pop_front();
    out.push_back(values[dq.front()]);
  }
  return out;
}

/// Max-norm |x(t)| on every node of the trajectory, history included.
[[nodiscard]] inline SampledSeries magnitude(const Trajectory& traj) {
  SampledSeries s{traj.grid(), std::vector<double>(traj.node_count())};
  for (std::size_t k = 0; k < traj.node_count(); ++k) {
    double m = 0.0;
    for (double v : traj.state(k)) m = std::max(m, std::abs(v));
    s.values[k] = m;
  }
  return s;
}

/// M0(t) = sup_{t - tau_max <= s <= t} |x(s)| from a magnitude series that
/// starts at least tau_max before its first output time. Output starts at
/// the first node with a full trailing window.
[[nodiscard]] inline SampledSeries maximal_function(const SampledSeries& mag, double tau_max) {
  const std::size_t w = whole_steps(tau_max, mag.grid.h, "tau_max");
  SampledSeries out;
  out.grid = TimeGrid{mag.grid.h, mag.grid.origin_steps + static_cast<std::ptrdiff_t>(w)};
  out.values = sliding_max(mag.values, w);
  return out;
}

[[nodiscard]] inline SampledSeries maximal_function(const Trajectory& traj, double tau_max) {
  if (tau_max > traj.tau_max() * (1.0 + 1e-12)) {
    throw ConfigError("maximal function window exceeds the trajectory's history");
  }
  auto mag = magnitude(traj);
  // Start the series exactly tau_max before t = 0.
  const std::size_t w = whole_steps(tau_max, traj.step(), "tau_max");
  const std::size_t skip = traj.history_steps() - w;
  mag.values.erase(mag.values.begin(), mag.values.begin() + static_cast<std::ptrdiff_t>(skip));
  mag.grid.origin_steps += static_cast<std::ptrdiff_t>(skip);
  return maximal_function(mag, tau_max);
}

/// z(t) = max_i |x_i(t) - y_i(t)| on the common grid, history included.
[[nodiscard]] inline SampledSeries sync_error(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid() == b.grid()) || a.node_count() != b.node_count() || a.dim() != b.dim()) {
    throw ConfigError("sync_error needs trajectories on the same grid");
  }
  SampledSeries z{a.grid(), std::vector<double>(a.node_count())};
  for (std::size_t k = 0; k < a.node_count(); ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a.value(k, i) - b.value(k, i)));
    z.values[k] = m;
  }
  return z;
}

/// v(t) = max_i |u_i(t) - u_i(t - omega)| for grid times t >= omega.
[[nodiscard]] inline SampledSeries periodic_residual(const Trajectory& traj, double omega) {
  if (!(omega > 0.0)) throw ConfigError("omega must be positive");
  if (traj.end_time() < omega) throw ConfigError("trajectory shorter than one period");
  const std::size_t zero = traj.history_steps();
  const double h = traj.step();
  const auto first = zero + static_cast<std::size_t>(std::ceil(omega / h - 1e-9));
  SampledSeries v;
  v.grid = TimeGrid{h, static_cast<std::ptrdiff_t>(first - zero)};
  for (std::size_t k = first; k < traj.node_count(); ++k) {
    const double t = traj.time(k);
    double m = 0.0;
    for (std::size_t i = 0; i < traj.dim(); ++i) {
      m = std::max(m, std::abs(traj.value(k, i) - traj.interpolate(i, t - omega)));
    }
    v.values.push_back(m);
  }
  return v;
}

/// Negated least-squares slope of log(values) against t over [t_start, end].
/// Values below 1e-15 are clipped.
[[nodiscard]] inline double fit_decay_rate(const SampledSeries& series, double t_start) {
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double t = series.time(k);
    if (t < t_start) continue;
    ts.push_back(t);
    ys.push_back(std::log(std::max(series.values[k], 1e-15)));
  }
  if (ts.size() < 10) throw Error("fit_decay_rate needs at least 10 samples, got " + std::to_string(ts.size()));
  const double c = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    mt += ts[k];
    my += ys[k];
  }
  mt /= c;
  my /= c;
  double stt = 0.0, sty = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - mt) * (ts[k] - mt);
    sty += (ts[k] - mt) * (ys[k] - my);
  }
  if (stt <= 0.0) throw Error("fit_decay_rate: degenerate time samples");
  return -sty / stt;
}

}  // namespace halanay
