#pragma once

// Command pipelines behind the halanay-cert executable.
//
// Exit codes: 0 certified / ok, 1 refuted (or a check reported violations),
// 2 configuration or parse error, 3 evaluation error, 4 inconclusive or
// horizon too short, 5 integration overflow.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "halanay/certifier.hpp"
#include "halanay/config.hpp"
#include "halanay/error.hpp"
#include "halanay/integrator.hpp"
#include "halanay/oracle.hpp"
#include "halanay/report.hpp"
#include "halanay/series.hpp"
#include "halanay/svg.hpp"

namespace halanay {

enum ExitCode : int {
  kExitOk = 0,
  kExitRefuted = 1,
  kExitConfig = 2,
  kExitEvaluation = 3,
  kExitInconclusive = 4,
  kExitOverflow = 5,
};

struct CommandOptions {
  std::string command;
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

namespace cli_detail {

using nlohmann::json;

struct Context {
  Config cfg;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  OracleSettings oracle;
  std::ostream& log;
};

inline const CertifySection& need_certify(const Config& cfg, const char* cmd) {
  if (!cfg.certify) throw ConfigError(std::string(cmd) + " needs a certify section");
  return *cfg.certify;
}

inline const SimulateSection& need_simulate(const Config& cfg, const char* cmd) {
  if (!cfg.simulate) throw ConfigError(std::string(cmd) + " needs a simulate section");
  return *cfg.simulate;
}

inline double certify_horizon(const Config& cfg) {
  const auto& c = need_certify(cfg, "certification");
  if (c.horizon) return *c.horizon;
  if (cfg.simulate) return cfg.simulate->horizon;
  throw ConfigError("certify.horizon is required without a simulate section");
}

inline double certify_resolution(const Config& cfg) {
  const auto& c = need_certify(cfg, "certification");
  return c.resolution.value_or(1e-3 * cfg.tau_max());
}

inline CertifyOptions certify_options(const Config& cfg, double eta, int n) {
  const auto& c = need_certify(cfg, "certification");
  CertifyOptions o;
  o.eta = eta;
  o.t0 = c.t0;
  o.n = n;
  o.horizon = certify_horizon(cfg);
  o.resolution = c.resolution;
  o.divergence_threshold = c.divergence_threshold;
  o.boundary = c.boundary;
  return o;
}

inline std::vector<int> n_values(const CertifySection& c) {
  std::vector<int> out;
  if (c.n_max) {
    for (int n = 1; n <= *c.n_max; ++n) out.push_back(n);
  } else {
    out.push_back(c.n);
  }
  return out;
}

inline std::string fmt(double v, int precision = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

inline std::string opt_fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("n/a"); }

inline CoefficientPair pair_for(const Config& cfg, double t_end) {
  return comparison_pair(cfg.system, t_end, certify_resolution(cfg));
}

struct Run {
  Trajectory traj;
  HistorySegment history;
};

inline std::vector<Run> simulate_all(const Context& ctx) {
  const auto& sim = need_simulate(ctx.cfg, "simulation");
  const auto net = to_network(ctx.cfg.system);
  std::vector<Run> runs;
  for (auto& h : expand_histories(sim, net.n, net.tau_max, ctx.seed)) {
    auto traj = integrate(net, h, sim.horizon, sim.h);
    runs.push_back(Run{std::move(traj), std::move(h)});
  }
  return runs;
}

/// The first configured eta/N certificate for oracle use, or nothing when no
/// certify section exists or the horizon is too short.
inline std::optional<EtaCertificate> oracle_certificate(const Context& ctx, const CoefficientPair& pair,
                                                        json& notes) {
  if (!ctx.cfg.certify) return std::nullopt;
  const auto& c = *ctx.cfg.certify;
  try {
    return check_eta_condition(pair, certify_options(ctx.cfg, c.etas.front(), n_values(c).front()));
  } catch (const HorizonError& e) {
    notes.push_back(std::string("certificate skipped: ") + e.what());
    return std::nullopt;
  }
}

inline OracleSettings oracle_settings(const Context& ctx, std::uint64_t salt) {
  OracleSettings s = ctx.oracle;
  s.seed = ctx.seed * 1000003ULL + salt;
  if (ctx.cfg.certify) {
    s.boundary = ctx.cfg.certify->boundary;
    s.resolution = ctx.cfg.certify->resolution;
  }
  if (ctx.cfg.simulate) s.sample_pairs = ctx.cfg.simulate->sample_pairs;
  return s;
}

inline json battery_json(const std::vector<OracleReport>& reports, json& all, bool& passed) {
  json arr = json::array();
  for (const auto& r : reports) {
    arr.push_back(to_json(r));
    all.push_back(to_json(r));
    passed = passed && r.passed();
  }
  return arr;
}

inline void log_battery(std::ostream& log, const std::vector<OracleReport>& reports) {
  for (const auto& r : reports) {
    log << "  " << std::left << std::setw(28) << r.name << (r.passed() ? "pass" : "FAIL") << "  checks=" << r.checks;
    if (!r.passed()) log << " violations=" << fmt(r.details.count("violation_count") ? r.details.at("violation_count") : 0);
    log << '\n';
  }
}

// ---------------------------------------------------------------- measure

inline int cmd_measure(Context& ctx) {
  const auto& c = need_certify(ctx.cfg, "measure");
  const double horizon = certify_horizon(ctx.cfg);
  const double eta = c.etas.front();
  const int n = n_values(c).front();
  const auto pair = pair_for(ctx.cfg, horizon);
  const double res = certify_resolution(ctx.cfg);
  const double len = (n + 1) * pair.tau_max();
  const auto count = static_cast<std::size_t>(std::floor((horizon - c.t0) / len + 1e-9));
  if (count == 0) throw HorizonError("horizon shorter than one window");
  pair.validate(c.t0, c.t0 + static_cast<double>(count) * len, res);

  std::string csv = "k,t_k,t_k1,mu_eta,mu_eta_full,mu_minus,mu_plus,ratio\n";
  double s_eta = 0.0, s_eta_full = 0.0, s_minus = 0.0, s_plus = 0.0;
  ctx.log << "eta = " << fmt(eta) << ", N = " << n << ", window length " << fmt(len) << '\n';
  ctx.log << std::left << std::setw(5) << "k" << std::setw(12) << "t_k" << std::setw(14) << "mu_eta" << std::setw(14)
          << "mu_minus" << std::setw(14) << "mu_plus" << "ratio\n";
  for (std::size_t k = 0; k < count; ++k) {
    const auto w = window_ratio(pair, eta, c.t0, n, k, res, c.boundary);
    s_eta += w.mu_eta;
    s_eta_full += w.mu_eta_full;
    s_minus += w.mu_minus;
    s_plus += w.mu_plus;
    csv += std::to_string(k) + ',' + format_double(w.t_k) + ',' + format_double(w.t_k + len) + ',' +
           format_double(w.mu_eta) + ',' + format_double(w.mu_eta_full) + ',' + format_double(w.mu_minus) + ',' +
           format_double(w.mu_plus) + ',' + (w.ratio_infinite() ? std::string("inf") : format_double(w.ratio)) + '\n';
    ctx.log << std::left << std::setw(5) << k << std::setw(12) << fmt(w.t_k) << std::setw(14) << fmt(w.mu_eta)
            << std::setw(14) << fmt(w.mu_minus) << std::setw(14) << fmt(w.mu_plus) << fmt(w.ratio) << '\n';
  }
  const double t_end = c.t0 + static_cast<double>(count) * len;
  csv += "total," + format_double(c.t0) + ',' + format_double(t_end) + ',' + format_double(s_eta) + ',' +
         format_double(s_eta_full) + ',' + format_double(s_minus) + ',' + format_double(s_plus) + ',' +
         format_double(s_eta_full + s_minus + s_plus) + '\n';
  ctx.log << "total measure " << fmt(s_eta_full + s_minus + s_plus, 10) << " over span " << fmt(t_end - c.t0, 10)
          << '\n';
  if (ctx.cfg.outputs.wants("csv")) write_text(ctx.out / "measure.csv", csv);
  return kExitOk;
}

// ---------------------------------------------------------------- certify

inline int cmd_certify(Context& ctx) {
  const auto& c = need_certify(ctx.cfg, "certify");
  const double horizon = certify_horizon(ctx.cfg);
  const auto pair = pair_for(ctx.cfg, horizon);

  std::vector<EtaCertificate> certs;
  for (double eta : c.etas) {
    for (int n : n_values(c)) certs.push_back(check_eta_condition(pair, certify_options(ctx.cfg, eta, n)));
  }
  // Best: certified with the largest alpha; else the first inconclusive; else the first.
  const EtaCertificate* best = nullptr;
  for (const auto& cert : certs) {
    if (cert.verdict != Verdict::certified) continue;
    if (best == nullptr || cert.alpha.value_or(0.0) > best->alpha.value_or(0.0)) best = &cert;
  }
  if (best == nullptr) {
    for (const auto& cert : certs) {
      if (cert.verdict == Verdict::inconclusive) {
        best = &cert;
        break;
      }
    }
  }
  if (best == nullptr) best = &certs.front();

  json report = to_json(*best);
  if (c.reference_window) {
    const auto& r = *c.reference_window;
    const double ratio = window_ratio_value(r.mu_minus, r.mu_eta, best->max_a, best->max_b, best->n, best->tau_max);
    report["reference_window"] = {{"mu_minus", r.mu_minus},
                                  {"mu_eta", r.mu_eta},
                                  {"ratio", finite_or_null(ratio)},
                                  {"below_half_eta", ratio < best->eta / 2.0}};
  }
  if (certs.size() > 1) {
    json sweep = json::array();
    for (const auto& cert : certs) {
      sweep.push_back({{"eta", cert.eta},
                       {"N", cert.n},
                       {"verdict", to_string(cert.verdict)},
                       {"C_star_est", finite_or_null(cert.c_star_est)},
                       {"alpha", optional_json(cert.alpha)}});
    }
    report["sweep"] = sweep;
  }
  if (ctx.cfg.outputs.wants("json")) write_json(ctx.out / "certificate.json", report);

  ctx.log << "verdict: " << to_string(best->verdict) << " (" << best->reason << ")\n";
  ctx.log << "eta = " << fmt(best->eta) << ", N = " << best->n << ", windows = " << best->windows.size()
          << ", C* estimate = " << fmt(best->c_star_est) << ", eta/2 = " << fmt(best->eta / 2.0) << '\n';
  ctx.log << "sum mu_eta = " << fmt(best->sum_mu_eta) << " (threshold " << fmt(best->divergence_threshold) << ")\n";
  ctx.log << "epsilon = " << opt_fmt(best->epsilon) << ", C = " << opt_fmt(best->c)
          << ", lambda0 = " << opt_fmt(best->lambda0) << ", alpha = " << opt_fmt(best->alpha) << '\n';
  if (report.contains("reference_window")) {
    ctx.log << "reference window ratio = " << report["reference_window"]["ratio"].dump() << '\n';
  }
  switch (best->verdict) {
    case Verdict::certified: return kExitOk;
    case Verdict::refuted: return kExitRefuted;
    case Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

// --------------------------------------------------------------- simulate

inline int cmd_simulate(Context& ctx) {
  const auto& sim = need_simulate(ctx.cfg, "simulate");
  auto runs = simulate_all(ctx);
  json notes = json::array();
  std::optional<CoefficientPair> pair;
  std::optional<EtaCertificate> cert;
  const auto net = to_network(ctx.cfg.system);
  const bool forced = std::any_of(net.input.begin(), net.input.end(), [](const auto& f) { return !f.is_zero(); });
  if (ctx.cfg.certify) {
    pair = pair_for(ctx.cfg, std::max(sim.horizon, certify_horizon(ctx.cfg)));
    cert = oracle_certificate(ctx, *pair, notes);
  } else {
    notes.push_back("no certify section: oracle battery skipped");
  }
  if (forced && pair) {
    // |x| obeys the comparison inequality only without external input; the
    // sync command checks the input-free difference system instead.
    notes.push_back("nonzero inputs: per-trajectory oracle battery skipped (use sync)");
    pair.reset();
  }

  json all = json::array();
  json run_reports = json::array();
  bool passed = true;
  double k_max = 0.0;
  const double fit_from = sim.fit_from.value_or(sim.horizon / 2.0);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& traj = runs[r].traj;
    const std::string tag = std::to_string(r + 1);
    const auto m0 = maximal_function(traj, traj.tau_max());
    const auto mag = magnitude(traj);
    if (ctx.cfg.outputs.wants("csv")) {
      write_text(ctx.out / ("traj_" + tag + ".csv"), trajectory_csv(traj));
      write_text(ctx.out / ("m0_" + tag + ".csv"), series_csv(m0));
    }
    if (ctx.cfg.outputs.wants("svg")) {
      std::vector<PlotSeries> plots;
      for (std::size_t i = 0; i < traj.dim(); ++i) {
        PlotSeries p{"x" + std::to_string(i + 1), {}, {}};
        for (std::size_t k = 0; k < traj.node_count(); ++k) {
          p.x.push_back(traj.time(k));
          p.y.push_back(traj.value(k, i));
        }
        plots.push_back(std::move(p));
      }
      write_text(ctx.out / ("traj_" + tag + ".svg"), render_svg("trajectory " + tag, plots));
    }

    json entry = {{"index", r + 1}, {"T", traj.end_time()}, {"clamp_count", traj.clamp_count()}};
    entry["abs_x_T"] = mag.values.back();
    entry["M0_T"] = m0.values.back();
    try {
      entry["alpha_emp"] = fit_decay_rate(m0, fit_from);
    } catch (const Error& e) {
      entry["alpha_emp"] = nullptr;
      entry["alpha_emp_note"] = e.what();
    }

    std::vector<OracleReport> reports;
    if (pair) {
      const auto ev = OracleEvidence::from_trajectory(traj, *pair, ctx.cfg.certify->etas.front(),
                                                      oracle_settings(ctx, r + 1));
      reports = run_oracle_battery(ev, cert ? &*cert : nullptr);
      for (const auto& rep : reports) {
        if (rep.name == "theorem1_envelope" && rep.details.count("K")) k_max = std::max(k_max, rep.details.at("K"));
      }
    }
    if (sim.sup_variant) {
      if (const auto* dde = std::get_if<ScalarDde>(&ctx.cfg.system)) {
        double bound = 0.0;
        for (std::size_t k = 0; k <= traj.history_steps(); ++k) bound = std::max(bound, mag.values[k]);
        const auto y = integrate_sup_envelope(*dde, bound, sim.horizon, sim.h);
        OracleReport rep;
        rep.name = "sup_variant_dominates";
        rep.tolerance = ctx.oracle.rel_tol;
        for (std::size_t k = 0; k < y.size(); ++k) {
          const std::size_t node = traj.history_steps() + k;
          detail::record(rep, ctx.oracle, 0.0, traj.time(node), mag.values[node], y[k]);
        }
        rep.details["envelope_T"] = y.back();
        reports.push_back(std::move(rep));
      } else {
        notes.push_back("sup_variant applies to scalar systems only");
      }
    }
    entry["oracles"] = battery_json(reports, all, passed);
    run_reports.push_back(entry);

    ctx.log << "run " << tag << ": |x(T)| = " << fmt(mag.values.back()) << ", M0(T) = " << fmt(m0.values.back())
            << ", fitted rate = " << (entry["alpha_emp"].is_null() ? std::string("n/a") : fmt(entry["alpha_emp"]))
            << ", clamps = " << traj.clamp_count() << '\n';
    log_battery(ctx.log, reports);
  }

  json report = {{"command", "simulate"}, {"seed", ctx.seed}, {"runs", run_reports}, {"oracles", all}};
  if (cert) {
    if (cert->verdict == Verdict::certified && k_max > 0.0) cert->k_bound = k_max;
    report["certificate"] = to_json(*cert);
    ctx.log << "certificate: " << to_string(cert->verdict) << ", alpha = " << opt_fmt(cert->alpha) << '\n';
  }
  report["notes"] = notes;
  report["all_passed"] = passed;
  if (ctx.cfg.outputs.wants("json")) write_json(ctx.out / "report.json", report);
  return passed ? kExitOk : kExitRefuted;
}

// ------------------------------------------------------------------- sync

inline int cmd_sync(Context& ctx) {
  const auto& sim = need_simulate(ctx.cfg, "sync");
  auto runs = simulate_all(ctx);
  if (runs.size() < 2) throw ConfigError("sync needs at least two histories");
  json notes = json::array();
  std::optional<CoefficientPair> pair;
  std::optional<EtaCertificate> cert;
  if (ctx.cfg.certify) {
    pair = pair_for(ctx.cfg, std::max(sim.horizon, certify_horizon(ctx.cfg)));
    cert = oracle_certificate(ctx, *pair, notes);
  } else {
    notes.push_back("no certify section: oracle battery skipped");
  }

  json all = json::array();
  json pairs = json::array();
  bool passed = true;
  std::vector<PlotSeries> plots;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      const auto z = sync_error(runs[i].traj, runs[j].traj);
      const std::string tag = std::to_string(i + 1) + "_" + std::to_string(j + 1);
      if (ctx.cfg.outputs.wants("csv")) write_text(ctx.out / ("z_" + tag + ".csv"), series_csv(z));
      plots.push_back(plot_series("z " + tag, z));
      json entry = {{"histories", {i + 1, j + 1}}, {"z_T", z.values.back()}};
      try {
        entry["rate_emp"] = fit_decay_rate(z, sim.fit_from.value_or(sim.horizon / 2.0));
      } catch (const Error& e) {
        entry["rate_emp"] = nullptr;
      }
      std::vector<OracleReport> reports;
      if (pair) {
        const OracleEvidence ev(z, *pair, ctx.cfg.certify->etas.front(), oracle_settings(ctx, 100 + i * 31 + j));
        reports = run_oracle_battery(ev, cert ? &*cert : nullptr);
      }
      entry["oracles"] = battery_json(reports, all, passed);
      pairs.push_back(entry);
      ctx.log << "z_" << tag << "(T) = " << fmt(z.values.back()) << '\n';
      log_battery(ctx.log, reports);
    }
  }
  if (ctx.cfg.outputs.wants("svg")) write_text(ctx.out / "sync.svg", render_svg("synchronization error", plots, true));
  json report = {{"command", "sync"}, {"seed", ctx.seed}, {"pairs", pairs}, {"oracles", all}, {"notes", notes}};
  if (cert) report["certificate"] = to_json(*cert);
  report["all_passed"] = passed;
  if (ctx.cfg.outputs.wants("json")) write_json(ctx.out / "sync.json", report);
  return passed ? kExitOk : kExitRefuted;
}

// --------------------------------------------------------------- periodic

inline int cmd_periodic(Context& ctx) {
  const auto* net_ptr = std::get_if<NetworkSpec>(&ctx.cfg.system);
  if (net_ptr == nullptr || !net_ptr->period) throw ConfigError("periodic needs a network with omega");
  const auto& net = *net_ptr;
  const double omega = *net.period;
  const auto& sim = need_simulate(ctx.cfg, "periodic");
  auto runs = simulate_all(ctx);

  json run_reports = json::array();
  std::vector<PlotSeries> plots;
  const double fit_from = sim.fit_from.value_or(omega);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& traj = runs[r].traj;
    const std::string tag = std::to_string(r + 1);
    const auto v = periodic_residual(traj, omega);
    if (ctx.cfg.outputs.wants("csv")) write_text(ctx.out / ("v_" + tag + ".csv"), series_csv(v));
    plots.push_back(plot_series("v " + tag, v));
    json entry = {{"index", r + 1}, {"v_T", v.values.back()}, {"v_first", v.values.front()}};
    try {
      entry["rate_emp"] = fit_decay_rate(v, fit_from);
    } catch (const Error& e) {
      entry["rate_emp"] = nullptr;
    }
    // Closure of the last full period: max_i |u(t) - u(t - omega)| for t in [T - omega, T].
    double closure = 0.0;
    for (std::size_t k = v.index_of(traj.end_time() - omega); k < v.size(); ++k) closure = std::max(closure, v.values[k]);
    entry["orbit_closure"] = closure;
    if (r == 0 && ctx.cfg.outputs.wants("csv")) {
      write_text(ctx.out / "orbit.csv", trajectory_csv(traj, traj.index_of(traj.end_time() - omega)));
    }
    run_reports.push_back(entry);
    ctx.log << "run " << tag << ": v(T) = " << fmt(v.values.back()) << ", fitted rate = "
            << (entry["rate_emp"].is_null() ? std::string("n/a") : fmt(entry["rate_emp"]))
            << ", orbit closure = " << fmt(closure) << '\n';
  }
  if (ctx.cfg.outputs.wants("svg")) write_text(ctx.out / "periodic.svg", render_svg("periodic residual", plots, true));

  json report = {{"command", "periodic"}, {"seed", ctx.seed}, {"omega", omega}, {"runs", run_reports}};
  int code = kExitOk;
  if (ctx.cfg.certify) {
    const auto& c = *ctx.cfg.certify;
    json checks = json::array();
    std::optional<PeriodicCheck> first_pass;
    for (double eta : c.etas) {
      for (int n : n_values(c)) {
        PeriodicOptions o;
        o.eta = eta;
        o.n = n;
        o.resolution = c.resolution.value_or(1e-3 * std::min(omega, net.tau_max));
        o.max_a = net.max_a;
        o.max_b = net.max_b;
        const auto pc = check_periodic_condition(net, o);
        checks.push_back(to_json(pc));
        if (pc.verdict && !first_pass) first_pass = pc;
      }
    }
    report["condition_checks"] = checks;
    report["condition"] = first_pass ? to_json(*first_pass) : json(nullptr);
    if (first_pass) {
      ctx.log << "periodic condition holds: eta = " << fmt(first_pass->eta) << ", N = " << first_pass->n
              << ", p = " << first_pass->p << ", lhs = " << fmt(first_pass->lhs) << ", mu_bar_eta = "
              << fmt(first_pass->mu_bar_eta) << ", mu_bar_minus = " << fmt(first_pass->mu_bar_minus) << '\n';
    } else {
      ctx.log << "periodic condition fails for every eta/N combination\n";
      code = kExitRefuted;
    }
  }
  if (ctx.cfg.outputs.wants("json")) write_json(ctx.out / "periodic.json", report);
  return code;
}

}  // namespace cli_detail

/// Runs one command; errors are mapped to exit codes and reported on `err`.
[[nodiscard]] inline int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  try {
    Config cfg = load_config(opts.config);
    const std::filesystem::path dir = opts.out_dir.value_or(std::filesystem::path(cfg.outputs.dir));
    Context ctx{std::move(cfg), dir, 0, {}, out};
    ctx.seed = opts.seed.value_or(ctx.cfg.seed);
    if (opts.tolerance) {
      if (!(*opts.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
      ctx.oracle.rel_tol = *opts.tolerance;
    }
    if (opts.command == "measure") return cmd_measure(ctx);
    if (opts.command == "certify") return cmd_certify(ctx);
    if (opts.command == "simulate") return cmd_simulate(ctx);
    if (opts.command == "sync") return cmd_sync(ctx);
    if (opts.command == "periodic") return cmd_periodic(ctx);
    throw ConfigError("unknown command '" + opts.command + "'");
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const EvaluationError& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kExitEvaluation;
  } catch (const HorizonError& e) {
    err << "horizon too short: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const IntegrationError& e) {
    err << "integration aborted: " << e.what() << '\n';
    return kExitOverflow;
  } catch (const nlohmann::json::exception& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "file error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace halanay
