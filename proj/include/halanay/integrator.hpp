#pragma once

// Fixed-step RK4 for delay systems. Delayed states come from cubic Hermite
// interpolation over already computed grid values (linear on the history).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "halanay/error.hpp"
#include "halanay/system.hpp"

namespace halanay {

/// Uniform time grid t_k = origin + k h.
struct TimeGrid {
  double h = 1e-3;
  std::ptrdiff_t origin_steps = 0;  // t_0 = origin_steps * h

  [[nodiscard]] double time(std::size_t k) const {
    const auto steps = static_cast<double>(static_cast<std::ptrdiff_t>(k) + origin_steps);
    // Division by an integral rate keeps integer times exact (1000/1000.0 == 1).
    const double rate = std::round(1.0 / h);
    if (std::abs(rate * h - 1.0) < 1e-12) return steps / rate;
    return steps * h;
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// A time just below `t_end`, so piecewise coefficients switching exactly at
/// a grid node are read as left limits without biasing the step.
[[nodiscard]] inline double left_limit(double t_end, double h) {
  const double ulp = std::nextafter(t_end, std::numeric_limits<double>::infinity()) - t_end;
  return t_end - std::max(1e-9 * h, 4.0 * ulp);
}

/// Number of whole steps of size h in `span`; throws if h does not divide it.
[[nodiscard]] inline std::size_t whole_steps(double span, double h, const char* what) {
  const double q = span / h;
  const double r = std::round(q);
  if (!(r >= 0.0) || std::abs(q - r) > 1e-6) {
    throw ConfigError(std::string("step h = ") + std::to_string(h) + " does not divide " + what + " = " +
                      std::to_string(span));
  }
  return static_cast<std::size_t>(r);
}

class Trajectory {
 public:
  Trajectory(std::shared_ptr<const NetworkSpec> system, HistorySegment history, double h, std::size_t steps)
      : system_(std::move(system)), history_(std::move(history)) {
    dim_ = system_->n;
    history_steps_ = whole_steps(system_->tau_max, h, "tau_max");
    steps_ = steps;
    grid_ = TimeGrid{h, -static_cast<std::ptrdiff_t>(history_steps_)};
    states_.assign(node_count() * dim_, 0.0);
    derivs_.assign(node_count() * dim_, 0.0);
  }

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] double step() const { return grid_.h; }
  [[nodiscard]] const TimeGrid& grid() const { return grid_; }
  /// Nodes on [-tau_max, 0) precede node `history_steps()` at t = 0.
  [[nodiscard]] std::size_t history_steps() const { return history_steps_; }
  [[nodiscard]] std::size_t steps() const { return steps_; }
  [[nodiscard]] std::size_t node_count() const { return history_steps_ + steps_ + 1; }
  [[nodiscard]] double time(std::size_t k) const { return grid_.time(k); }
  [[nodiscard]] double end_time() const { return time(node_count() - 1); }
  [[nodiscard]] double tau_max() const { return system_->tau_max; }
  [[nodiscard]] std::size_t clamp_count() const { return clamps_; }
  [[nodiscard]] const NetworkSpec& system() const { return *system_; }
  [[nodiscard]] const HistorySegment& history() const { return history_; }

  [[nodiscard]] std::span<const double> state(std::size_t k) const {
    return {states_.data() + k * dim_, dim_};
  }
  [[nodiscard]] double value(std::size_t k, std::size_t i) const { return states_[k * dim_ + i]; }

  /// Node index nearest to time t.
  [[nodiscard]] std::size_t index_of(double t) const {
    const double p = std::round(t / grid_.h) - static_cast<double>(grid_.origin_steps);
    return static_cast<std::size_t>(std::clamp(p, 0.0, static_cast<double>(node_count() - 1)));
  }

  /// Component i at time t. `ready` is the last node whose derivative is known.
  [[nodiscard]] double interpolate(std::size_t i, double t) const { return interpolate(i, t, node_count() - 1); }

  [[nodiscard]] double interpolate(std::size_t i, double t, std::size_t ready) const {
    const double h = grid_.h;
    const double p = t / h - static_cast<double>(grid_.origin_steps);
    const double last = static_cast<double>(node_count() - 1);
    if (p <= 0.0) return value(0, i);
    if (p >= last) return value(node_count() - 1, i);
    const double fl = std::floor(p);
    const auto k = static_cast<std::size_t>(fl);
    const double theta = p - fl;
    if (theta < 1e-9) return value(k, i);
    if (theta > 1.0 - 1e-9) return value(k + 1, i);
    const double y0 = value(k, i);
    const double y1 = value(k + 1, i);
    if (k < history_steps_) return y0 + theta * (y1 - y0);
    const double m0 = h * derivs_[k * dim_ + i];
    if (k + 1 > ready) {
      // Right slope unknown yet: quadratic through both values with the left slope.
      return y0 + m0 * theta + (y1 - y0 - m0) * theta * theta;
    }
    const double m1 = h * derivs_[(k + 1) * dim_ + i];
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
  }

 private:
  friend class DelayIntegrator;

  std::shared_ptr<const NetworkSpec> system_;
  HistorySegment history_;
  std::size_t dim_ = 0;
  std::size_t history_steps_ = 0;
  std::size_t steps_ = 0;
  TimeGrid grid_;
  std::vector<double> states_;
  std::vector<double> derivs_;
  std::size_t clamps_ = 0;
};

class DelayIntegrator {
 public:
  DelayIntegrator(const NetworkSpec& system, const HistorySegment& history, double horizon, double h)
      : traj_(std::make_shared<const NetworkSpec>(system), history, checked_step(h),
              whole_steps(checked_horizon(horizon), h, "T")) {
    system.validate();
    if (history.phi.size() != system.n) {
      throw ConfigError("history has " + std::to_string(history.phi.size()) + " components, expected " +
                        std::to_string(system.n));
    }
    const auto& net = traj_.system();
    zero_delayed_.resize(net.n * net.n);
    zero_instant_.resize(net.n * net.n);
    for (std::size_t k = 0; k < net.n * net.n; ++k) {
      zero_delayed_[k] = net.delayed_gain[k].is_zero();
      zero_instant_[k] = net.instant_gain[k].is_zero();
    }
  }

  Trajectory run() && {
    const auto& net = traj_.system();
    const std::size_t n = net.n;
    const double h = traj_.step();
    const std::size_t w = traj_.history_steps();

    for (std::size_t k = 0; k <= w; ++k) {
      const double t = traj_.time(k);
      for (std::size_t i = 0; i < n; ++i) {
        const double v = traj_.history_.phi[i](t);
        if (!std::isfinite(v)) throw ConfigError("history is not finite at t = " + std::to_string(t));
        traj_.states_[k * n + i] = v;
      }
    }

    std::vector<double> x(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (std::size_t m = 0; m < traj_.steps(); ++m) {
      const std::size_t node = w + m;
      const double t = traj_.time(node);
      std::copy_n(traj_.states_.begin() + static_cast<std::ptrdiff_t>(node * n), n, x.begin());

      ready_ = node - 1;
      rhs(t, t, x, node, k1);
      std::copy(k1.begin(), k1.end(), traj_.derivs_.begin() + static_cast<std::ptrdiff_t>(node * n));
      ready_ = node;

      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
      rhs(t + 0.5 * h, t, tmp, node, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
      rhs(t + 0.5 * h, t, tmp, node, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
      // Coefficients at the step end are taken as left limits.
      rhs(left_limit(traj_.time(node + 1), h), t, tmp, node, k4);

      for (std::size_t i = 0; i < n; ++i) {
        const double next = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(next) || std::abs(next) > 1e150) {
          throw IntegrationError("state diverged", t);
        }
        traj_.states_[(node + 1) * n + i] = next;
      }
    }
    // Derivative at the final node, for interpolation up to T.
    const std::size_t last = traj_.node_count() - 1;
    std::copy_n(traj_.states_.begin() + static_cast<std::ptrdiff_t>(last * n), n, x.begin());
    ready_ = last - 1;
    rhs(traj_.time(last), traj_.time(last), x, last, k1);
    std::copy(k1.begin(), k1.end(), traj_.derivs_.begin() + static_cast<std::ptrdiff_t>(last * n));
    return std::move(traj_);
  }

 private:
  static double checked_step(double h) {
    if (!(h > 0.0)) throw ConfigError("step h must be positive");
    return h;
  }
  static double checked_horizon(double horizon) {
    if (!(horizon > 0.0)) throw ConfigError("horizon T must be positive");
    return horizon;
  }

  /// Delayed argument s - tau_ij(s) for a stage at time s in the step starting at t_start.
  double delayed_time(std::size_t idx, double s, double t_start) {
    const auto& net = traj_.system();
    const double h = traj_.step();
    double tau = net.delays[idx](s);
    if (!std::isfinite(tau) || tau > net.tau_max * (1.0 + 1e-9)) {
      throw ConfigError("delay " + std::to_string(tau) + " at t = " + std::to_string(s) + " exceeds tau_max = " +
                        std::to_string(net.tau_max));
    }
    switch (net.delay_mode) {
      case DelayMode::strict:
        if (tau < 4.0 * h * (1.0 - 1e-9)) {
          throw ConfigError("delay " + std::to_string(tau) + " at t = " + std::to_string(s) +
                            " is below 4h; use delay_mode clamp or a smaller step");
        }
        break;
      case DelayMode::clamp:
        if (tau < 4.0 * h) {
          tau = 4.0 * h;
          ++traj_.clamps_;
        }
        break;
      case DelayMode::exact:
        if (tau < 0.0) throw ConfigError("negative delay at t = " + std::to_string(s));
        break;
    }
    double d = s - tau;
    if (d > t_start) {
      if (d > t_start + 1e-5 * h) {
        throw ConfigError("delayed argument at t = " + std::to_string(s) +
                          " lies inside the current step; reduce h or use delay_mode clamp");
      }
      d = t_start;
    }
    return d;
  }

  void rhs(double s, double t_start, const std::vector<double>& x, std::size_t node, std::vector<double>& out) {
    const auto& net = traj_.system();
    const std::size_t n = net.n;
    (void)node;
    for (std::size_t i = 0; i < n; ++i) {
      double v = -net.decay[i](s) * x[i] + net.input[i](s);
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t idx = i * n + j;
        if (!zero_instant_[idx]) v += net.instant_gain[idx](s) * apply(net.instant_fn[j], x[j]);
        if (!zero_delayed_[idx]) {
          const double d = delayed_time(idx, s, t_start);
          v += net.delayed_gain[idx](s) * apply(net.delayed_fn[j], traj_.interpolate(j, d, ready_));
        }
      }
      out[i] = v;
    }
  }

  Trajectory traj_;
  std::vector<bool> zero_delayed_;
  std::vector<bool> zero_instant_;
  std::size_t ready_ = 0;
};

/// Integrates `system` from `history` over [0, T] with step h.
[[nodiscard]] inline Trajectory integrate(const NetworkSpec& system, const HistorySegment& history, double horizon,
                                          double h) {
  return DelayIntegrator(system, history, horizon, h).run();
}

[[nodiscard]] inline Trajectory integrate(const SystemSpec& system, const HistorySegment& history, double horizon,
                                          double h) {
  return integrate(to_network(system), history, horizon, h);
}

/// Worst-case envelope y' = -a(t) y + |b(t)| sup_{[t - tau_max, t]} |y| with
/// y = `bound` on the history. By comparison, |x(t)| <= y(t) for every
/// solution of the scalar equation whose history satisfies |phi| <= bound.
/// Returns y on the grid t = 0, h, ..., T.
[[nodiscard]] inline std::vector<double> integrate_sup_envelope(const ScalarDde& dde, double bound, double horizon,
                                                                double h) {
  const std::size_t w = whole_steps(dde.tau_max, h, "tau_max");
  const std::size_t steps = whole_steps(horizon, h, "T");
  const TimeGrid grid{h, 0};
  std::vector<double> y(steps + 1, 0.0);
  y[0] = std::abs(bound);
  // Monotone deque of node indices (offset by w so history nodes are 0..w-1).
  std::deque<std::pair<std::ptrdiff_t, double>> window;
  auto push = [&](std::ptrdiff_t idx, double v) {
    while (!window.empty() && window.back().second <= v) window.pop_back();
    window.emplace_back(idx, v);
  };
  for (std::ptrdiff_t k = -static_cast<std::ptrdiff_t>(w); k <= 0; ++k) push(k, std::abs(bound));

  auto f = [&](double s, double yv, double sup) {
    const double a = dde.a(s);
    const double b = std::abs(dde.b(s));
    return -a * yv + b * std::max(sup, std::abs(yv));
  };
  for (std::size_t m = 0; m < steps; ++m) {
    const auto node = static_cast<std::ptrdiff_t>(m);
    while (!window.empty() && window.front().first < node - static_cast<std::ptrdiff_t>(w)) window.pop_front();
    const double sup = window.front().second;
    const double t = grid.time(m);
    const double k1 = f(t, y[m], sup);
    const double k2 = f(t + 0.5 * h, y[m] + 0.5 * h * k1, sup);
    const double k3 = f(t + 0.5 * h, y[m] + 0.5 * h * k2, sup);
    const double k4 = f(left_limit(grid.time(m + 1), h), y[m] + h * k3, sup);
    y[m + 1] = y[m] + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(y[m + 1])) throw IntegrationError("envelope diverged", t);
    push(node + 1, std::abs(y[m + 1]));
  }
  return y;
}

}  // namespace halanay
