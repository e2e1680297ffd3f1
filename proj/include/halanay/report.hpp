#pragma once

// JSON and CSV serialization of certificates, checks and sampled series.

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "halanay/certifier.hpp"
#include "halanay/error.hpp"
#include "halanay/integrator.hpp"
#include "halanay/oracle.hpp"
#include "halanay/series.hpp"

namespace halanay {

/// Shortest decimal text that round-trips to the same double.
[[nodiscard]] inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

/// Finite numbers as-is, non-finite ones as null.
[[nodiscard]] inline nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

template <class T>
[[nodiscard]] nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? finite_or_null(static_cast<double>(*v)) : nlohmann::json(nullptr);
}

[[nodiscard]] inline nlohmann::json to_json(const WindowStats& w) {
  return {
      {"k", w.k},
      {"t_k", w.t_k},
      {"t_k_minus", w.t_k_minus},
      {"mu_eta", w.mu_eta},
      {"mu_eta_full", w.mu_eta_full},
      {"mu_minus", w.mu_minus},
      {"mu_plus", w.mu_plus},
      {"ratio", finite_or_null(w.ratio)},
      {"ratio_infinite", w.ratio_infinite()},
      {"ratio_mu_plus_reading", finite_or_null(w.ratio_mu_plus_reading)},
      {"boundaries", w.boundaries},
  };
}

[[nodiscard]] inline nlohmann::json to_json(const EtaCertificate& c) {
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : c.windows) windows.push_back(to_json(w));
  return {
      {"eta", c.eta},
      {"t0", c.t0},
      {"N", c.n},
      {"tau_max", c.tau_max},
      {"M_a", c.max_a},
      {"M_b", c.max_b},
      {"delta", c.delta},
      {"eta_boundary", c.boundary == EtaBoundary::strict ? "strict" : "inclusive"},
      {"resolution", c.resolution},
      {"windows", windows},
      {"C_star_est", finite_or_null(c.c_star_est)},
      {"C_star_infinite", std::isinf(c.c_star_est)},
      {"sum_mu_eta", c.sum_mu_eta},
      {"divergence_threshold", c.divergence_threshold},
      {"verdict", to_string(c.verdict)},
      {"reason", c.reason},
      {"epsilon", optional_json(c.epsilon)},
      {"C", optional_json(c.c)},
      {"lambda0", optional_json(c.lambda0)},
      {"alpha", optional_json(c.alpha)},
      {"K", optional_json(c.k_bound)},
  };
}

[[nodiscard]] inline nlohmann::json to_json(const OracleReport& r) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"t1", v.t1}, {"t2", v.t2}, {"lhs", v.lhs}, {"rhs", v.rhs}, {"slack", v.slack}});
  }
  nlohmann::json details = nlohmann::json::object();
  for (const auto& [k, v] : r.details) details[k] = finite_or_null(v);
  return {
      {"name", r.name},
      {"checks", r.checks},
      {"violations", violations},
      {"tolerance", r.tolerance},
      {"passed", r.passed()},
      {"notes", r.notes},
      {"details", details},
  };
}

[[nodiscard]] inline nlohmann::json to_json(const PeriodicCheck& p) {
  return {
      {"eta", p.eta},
      {"N", p.n},
      {"omega", p.omega},
      {"p", p.p},
      {"M_a", p.max_a},
      {"M_b", p.max_b},
      {"mu_bar_eta", p.mu_bar_eta},
      {"mu_bar_minus", p.mu_bar_minus},
      {"lhs", finite_or_null(p.lhs)},
      {"verdict", p.verdict},
      {"diagnostic", p.diagnostic},
  };
}

inline void write_text(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << body;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

/// `t,x1,...,xn`, one row per grid node including the history.
[[nodiscard]] inline std::string trajectory_csv(const Trajectory& traj, std::size_t first_node = 0) {
  std::string out = "t";
  for (std::size_t i = 0; i < traj.dim(); ++i) out += ",x" + std::to_string(i + 1);
  out += '\n';
  for (std::size_t k = first_node; k < traj.node_count(); ++k) {
    out += format_double(traj.time(k));
    for (std::size_t i = 0; i < traj.dim(); ++i) {
      out += ',';
      out += format_double(traj.value(k, i));
    }
    out += '\n';
  }
  return out;
}

/// `t,value`.
[[nodiscard]] inline std::string series_csv(const SampledSeries& s) {
  std::string out = "t,value\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    out += format_double(s.time(k));
    out += ',';
    out += format_double(s.values[k]);
    out += '\n';
  }
  return out;
}

}  // namespace halanay
