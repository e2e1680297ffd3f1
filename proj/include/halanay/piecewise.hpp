#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halanay/error.hpp"
#include "halanay/expr.hpp"

namespace halanay {

/// One half-open piece [from, to) of a piecewise function.
struct Segment {
  double from = 0.0;
  double to = 0.0;
  Expr expr;
};

/// A time signal made of expression segments over half-open intervals, with a
/// default expression elsewhere. With a period set, time is first reduced into
/// [0, period) and every expression sees the reduced time.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  explicit PiecewiseFunction(Expr fallback) : fallback_(std::move(fallback)) {}

  PiecewiseFunction(std::vector<Segment> segments, Expr fallback, std::optional<double> period = std::nullopt)
      : segments_(std::move(segments)), fallback_(std::move(fallback)), period_(period) {
    if (period_ && !(*period_ > 0.0 && std::isfinite(*period_))) {
      throw ConfigError("piecewise period must be positive");
    }
    std::sort(segments_.begin(), segments_.end(),
              [](const Segment& x, const Segment& y) { return x.from < y.from; });
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const auto& s = segments_[i];
      if (!(s.from < s.to)) throw ConfigError("piecewise segment must satisfy from < to");
      if (i > 0 && segments_[i - 1].to > s.from) throw ConfigError("piecewise segments overlap");
      if (period_ && (s.from < 0.0 || s.to > *period_)) {
        throw ConfigError("piecewise segments must lie within [0, period)");
      }
    }
  }

  static PiecewiseFunction constant(double v) { return PiecewiseFunction(Expr::constant(v)); }

  static PiecewiseFunction parse(const std::string& expr) { return PiecewiseFunction(parse_expr(expr)); }

  [[nodiscard]] double operator()(double t) const {
    if (period_) t -= *period_ * std::floor(t / *period_);
    if (!segments_.empty()) {
      auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                 [](double v, const Segment& s) { return v < s.from; });
      if (it != segments_.begin()) {
        const Segment& s = *std::prev(it);
        if (t < s.to) return s.expr(t);
      }
    }
    return fallback_(t);
  }

  /// True when every piece is the literal constant 0.
  [[nodiscard]] bool is_zero() const {
    auto zero = [](const Expr& e) {
      return e.nodes().size() == 1 && e.nodes()[0].op == Op::constant && e.nodes()[0].value == 0.0;
    };
    return zero(fallback_) &&
           std::all_of(segments_.begin(), segments_.end(), [&](const Segment& s) { return zero(s.expr); });
  }

  [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }
  [[nodiscard]] const Expr& fallback() const { return fallback_; }
  [[nodiscard]] std::optional<double> period() const { return period_; }

 private:
  std::vector<Segment> segments_;
  Expr fallback_;
  std::optional<double> period_;
};

}  // namespace halanay
