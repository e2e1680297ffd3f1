#pragma once

// JSON run configuration: a system block plus optional certify, simulate
// and outputs blocks. Unknown keys are rejected at every level.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "halanay/certifier.hpp"
#include "halanay/error.hpp"
#include "halanay/piecewise.hpp"
#include "halanay/system.hpp"

namespace halanay {

using Json = nlohmann::json;

struct ReferenceWindow {
  double mu_minus = 0.0;
  double mu_eta = 0.0;
};

struct CertifySection {
  std::vector<double> etas;  // one entry unless a grid was given
  EtaBoundary boundary = EtaBoundary::strict;
  double t0 = 0.0;
  int n = 1;
  std::optional<int> n_max;  // sweep N = 1..n_max
  std::optional<double> horizon;
  std::optional<double> resolution;
  std::optional<double> divergence_threshold;
  std::optional<ReferenceWindow> reference_window;
};

struct HistorySpec {
  bool random = false;
  std::size_t count = 1;
  double amplitude = 1.0;
  HistorySegment phi;  // explicit histories only
};

struct SimulateSection {
  double horizon = 0.0;  // T
  double h = 1e-3;
  std::vector<HistorySpec> histories;
  bool sup_variant = false;
  std::optional<double> fit_from;
  std::size_t sample_pairs = 200;
};

struct OutputsSection {
  std::string dir = "out";
  std::set<std::string> formats{"csv", "svg", "json"};

  [[nodiscard]] bool wants(const std::string& f) const { return formats.count(f) > 0; }
};

struct Config {
  SystemSpec system;
  std::optional<CertifySection> certify;
  std::optional<SimulateSection> simulate;
  OutputsSection outputs;
  std::uint64_t seed = 0;
  std::filesystem::path base_dir;  // directory of the config file

  [[nodiscard]] bool is_network() const { return std::holds_alternative<NetworkSpec>(system); }
  [[nodiscard]] double tau_max() const {
    return std::visit([](const auto& s) { return s.tau_max; }, system);
  }
};

namespace config_detail {

inline void allow_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; })) {
      throw ConfigError("unknown key '" + k + "' in " + where);
    }
  }
}

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  return obj.at(key);
}

inline double number(const Json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

inline double positive(const Json& v, const std::string& what) {
  const double x = number(v, what);
  if (!(x > 0.0)) throw ConfigError(what + " must be positive");
  return x;
}

inline int positive_int(const Json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError(what + " must be a positive integer");
  return v.get<int>();
}

inline std::string text(const Json& v, const std::string& what) {
  if (!v.is_string()) throw ConfigError(what + " must be a string");
  return v.get<std::string>();
}

inline std::optional<double> optional_positive(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return positive(obj.at(key), where + "." + key);
}

}  // namespace config_detail

/// A number, an expression string, or {default, segments: [{from, to, expr}], period}.
[[nodiscard]] inline PiecewiseFunction parse_piecewise(const Json& v, const std::string& where) {
  using namespace config_detail;
  if (v.is_number()) return PiecewiseFunction::constant(v.get<double>());
  if (v.is_string()) return PiecewiseFunction::parse(v.get<std::string>());
  allow_keys(v, where, {"default", "segments", "period"});
  Expr fallback = Expr::constant(0.0);
  if (v.contains("default")) {
    const auto& d = v.at("default");
    fallback = d.is_number() ? Expr::constant(d.get<double>()) : parse_expr(text(d, where + ".default"));
  }
  std::vector<Segment> segs;
  if (v.contains("segments")) {
    const auto& arr = v.at("segments");
    if (!arr.is_array()) throw ConfigError(where + ".segments must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = where + ".segments[" + std::to_string(i) + "]";
      allow_keys(arr[i], w, {"from", "to", "expr"});
      const auto& e = require(arr[i], "expr", w);
      segs.push_back(Segment{number(require(arr[i], "from", w), w + ".from"), number(require(arr[i], "to", w), w + ".to"),
                             e.is_number() ? Expr::constant(e.get<double>()) : parse_expr(text(e, w + ".expr"))});
    }
  }
  std::optional<double> period;
  if (v.contains("period")) period = positive(v.at("period"), where + ".period");
  return PiecewiseFunction(std::move(segs), std::move(fallback), period);
}

namespace config_detail {

inline std::vector<PiecewiseFunction> vector_of(const Json& v, std::size_t n, const std::string& where) {
  if (!v.is_array()) {
    // A single spec is broadcast to every entry.
    return std::vector<PiecewiseFunction>(n, parse_piecewise(v, where));
  }
  if (v.size() != n) throw ConfigError(where + " must have " + std::to_string(n) + " entries");
  std::vector<PiecewiseFunction> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(parse_piecewise(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<PiecewiseFunction> matrix_of(const Json& v, std::size_t n, const std::string& where) {
  if (!v.is_array() || v.size() != n) throw ConfigError(where + " must be an array of " + std::to_string(n) + " rows");
  std::vector<PiecewiseFunction> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = v[i];
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != n) throw ConfigError(w + " must have " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) out.push_back(parse_piecewise(row[j], w + "[" + std::to_string(j) + "]"));
  }
  return out;
}

inline std::vector<double> numbers_of(const Json& v, std::size_t n, const std::string& where) {
  if (v.is_number()) return std::vector<double>(n, v.get<double>());
  if (!v.is_array() || v.size() != n) throw ConfigError(where + " must have " + std::to_string(n) + " entries");
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(number(v[i], where));
  return out;
}

inline std::vector<InnerFunction> functions_of(const Json& v, std::size_t n, const std::string& where) {
  if (v.is_string()) return std::vector<InnerFunction>(n, inner_function_from_string(v.get<std::string>()));
  if (!v.is_array() || v.size() != n) throw ConfigError(where + " must have " + std::to_string(n) + " entries");
  std::vector<InnerFunction> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(inner_function_from_string(text(v[i], where)));
  return out;
}

inline ScalarDde parse_scalar(const Json& s) {
  allow_keys(s, "system", {"kind", "a", "b", "tau", "tau_max", "M_a", "M_b", "delay_mode"});
  ScalarDde d;
  d.a = parse_piecewise(require(s, "a", "system"), "system.a");
  d.b = parse_piecewise(require(s, "b", "system"), "system.b");
  d.tau_max = positive(require(s, "tau_max", "system"), "system.tau_max");
  d.tau = s.contains("tau") ? parse_piecewise(s.at("tau"), "system.tau") : PiecewiseFunction::constant(d.tau_max);
  d.max_a = positive(require(s, "M_a", "system"), "system.M_a");
  d.max_b = number(require(s, "M_b", "system"), "system.M_b");
  if (d.max_b < 0.0) throw ConfigError("system.M_b must be nonnegative");
  if (s.contains("delay_mode")) d.delay_mode = delay_mode_from_string(text(s.at("delay_mode"), "system.delay_mode"));
  return d;
}

inline NetworkSpec parse_network(const Json& s) {
  allow_keys(s, "system",
             {"kind", "n", "d", "A", "B", "tau", "g", "f", "G", "F", "I", "tau_max", "omega", "M_a", "M_b",
              "delay_mode"});
  NetworkSpec net;
  net.n = static_cast<std::size_t>(positive_int(require(s, "n", "system"), "system.n"));
  const std::size_t n = net.n;
  net.tau_max = positive(require(s, "tau_max", "system"), "system.tau_max");
  net.decay = vector_of(require(s, "d", "system"), n, "system.d");
  auto zeros = std::vector<PiecewiseFunction>(n * n, PiecewiseFunction::constant(0.0));
  net.instant_gain = s.contains("A") ? matrix_of(s.at("A"), n, "system.A") : zeros;
  net.delayed_gain = s.contains("B") ? matrix_of(s.at("B"), n, "system.B") : zeros;
  net.delays = s.contains("tau") ? matrix_of(s.at("tau"), n, "system.tau")
                                 : std::vector<PiecewiseFunction>(n * n, PiecewiseFunction::constant(net.tau_max));
  net.instant_fn = s.contains("g") ? functions_of(s.at("g"), n, "system.g")
                                   : std::vector<InnerFunction>(n, InnerFunction::identity);
  net.delayed_fn = s.contains("f") ? functions_of(s.at("f"), n, "system.f")
                                   : std::vector<InnerFunction>(n, InnerFunction::identity);
  net.instant_lipschitz = s.contains("G") ? numbers_of(s.at("G"), n, "system.G") : std::vector<double>(n, 1.0);
  net.delayed_lipschitz = s.contains("F") ? numbers_of(s.at("F"), n, "system.F") : std::vector<double>(n, 1.0);
  net.input = s.contains("I") ? vector_of(s.at("I"), n, "system.I")
                              : std::vector<PiecewiseFunction>(n, PiecewiseFunction::constant(0.0));
  if (s.contains("omega")) net.period = positive(s.at("omega"), "system.omega");
  if (s.contains("M_a")) net.max_a = positive(s.at("M_a"), "system.M_a");
  if (s.contains("M_b")) {
    net.max_b = number(s.at("M_b"), "system.M_b");
    if (*net.max_b < 0.0) throw ConfigError("system.M_b must be nonnegative");
  }
  if (s.contains("delay_mode")) net.delay_mode = delay_mode_from_string(text(s.at("delay_mode"), "system.delay_mode"));
  net.validate();
  return net;
}

inline CertifySection parse_certify(const Json& c) {
  allow_keys(c, "certify",
             {"eta", "eta_grid", "eta_boundary", "t0", "N", "N_max", "horizon", "resolution", "divergence_threshold",
              "reference_window"});
  CertifySection out;
  if (c.contains("eta") == c.contains("eta_grid")) throw ConfigError("certify needs exactly one of eta, eta_grid");
  if (c.contains("eta")) {
    out.etas.push_back(positive(c.at("eta"), "certify.eta"));
  } else {
    const auto& g = c.at("eta_grid");
    if (!g.is_array() || g.empty()) throw ConfigError("certify.eta_grid must be a nonempty array");
    for (const auto& e : g) out.etas.push_back(positive(e, "certify.eta_grid entry"));
  }
  if (c.contains("eta_boundary")) {
    const auto b = text(c.at("eta_boundary"), "certify.eta_boundary");
    if (b == "strict") {
      out.boundary = EtaBoundary::strict;
    } else if (b == "inclusive") {
      out.boundary = EtaBoundary::inclusive;
    } else {
      throw ConfigError("certify.eta_boundary must be strict or inclusive");
    }
  }
  if (c.contains("t0")) {
    out.t0 = number(c.at("t0"), "certify.t0");
    if (out.t0 < 0.0) throw ConfigError("certify.t0 must be nonnegative");
  }
  if (c.contains("N") && c.contains("N_max")) throw ConfigError("certify takes N or N_max, not both");
  if (c.contains("N")) out.n = positive_int(c.at("N"), "certify.N");
  if (c.contains("N_max")) out.n_max = positive_int(c.at("N_max"), "certify.N_max");
  out.horizon = optional_positive(c, "horizon", "certify");
  out.resolution = optional_positive(c, "resolution", "certify");
  out.divergence_threshold = optional_positive(c, "divergence_threshold", "certify");
  if (c.contains("reference_window")) {
    const auto& r = c.at("reference_window");
    allow_keys(r, "certify.reference_window", {"mu_minus", "mu_eta"});
    out.reference_window = ReferenceWindow{number(require(r, "mu_minus", "certify.reference_window"), "mu_minus"),
                                           number(require(r, "mu_eta", "certify.reference_window"), "mu_eta")};
  }
  return out;
}

inline HistorySpec parse_history(const Json& v, std::size_t n, const std::string& where) {
  HistorySpec spec;
  if (v.is_string()) {
    // "random:k:amplitude"
    const auto s = v.get<std::string>();
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3 || parts[0] != "random") {
      throw ConfigError(where + ": expected \"random:k:amplitude\", got \"" + s + "\"");
    }
    spec.random = true;
    try {
      std::size_t used = 0;
      const long long k = std::stoll(parts[1], &used);
      if (used != parts[1].size() || k < 1) throw ConfigError(where + ": k must be a positive integer");
      spec.count = static_cast<std::size_t>(k);
      spec.amplitude = std::stod(parts[2], &used);
      if (used != parts[2].size() || !(spec.amplitude >= 0.0)) throw ConfigError(where + ": bad amplitude");
    } catch (const std::logic_error&) {
      throw ConfigError(where + ": malformed random history \"" + s + "\"");
    }
    return spec;
  }
  allow_keys(v, where, {"phi"});
  spec.phi.phi = vector_of(require(v, "phi", where), n, where + ".phi");
  return spec;
}

inline SimulateSection parse_simulate(const Json& s, std::size_t n) {
  allow_keys(s, "simulate", {"T", "h", "histories", "sup_variant", "fit_from", "sample_pairs"});
  SimulateSection out;
  out.horizon = positive(require(s, "T", "simulate"), "simulate.T");
  if (s.contains("h")) out.h = positive(s.at("h"), "simulate.h");
  const auto& hs = require(s, "histories", "simulate");
  if (!hs.is_array() || hs.empty()) throw ConfigError("simulate.histories must be a nonempty array");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    out.histories.push_back(parse_history(hs[i], n, "simulate.histories[" + std::to_string(i) + "]"));
  }
  if (s.contains("sup_variant")) {
    if (!s.at("sup_variant").is_boolean()) throw ConfigError("simulate.sup_variant must be a boolean");
    out.sup_variant = s.at("sup_variant").get<bool>();
  }
  if (s.contains("fit_from")) out.fit_from = number(s.at("fit_from"), "simulate.fit_from");
  if (s.contains("sample_pairs")) {
    out.sample_pairs = static_cast<std::size_t>(positive_int(s.at("sample_pairs"), "simulate.sample_pairs"));
  }
  return out;
}

inline OutputsSection parse_outputs(const Json& o) {
  allow_keys(o, "outputs", {"dir", "formats"});
  OutputsSection out;
  if (o.contains("dir")) out.dir = text(o.at("dir"), "outputs.dir");
  if (o.contains("formats")) {
    out.formats.clear();
    const auto& f = o.at("formats");
    if (!f.is_array()) throw ConfigError("outputs.formats must be an array");
    for (const auto& x : f) {
      const auto name = text(x, "outputs.formats entry");
      if (name != "csv" && name != "svg" && name != "json") {
        throw ConfigError("outputs.formats entries must be csv, svg or json");
      }
      out.formats.insert(name);
    }
  }
  return out;
}

}  // namespace config_detail

[[nodiscard]] inline Config parse_config(const Json& root) {
  using namespace config_detail;
  allow_keys(root, "config", {"system", "certify", "simulate", "outputs", "seed"});
  Config cfg;
  const auto& sys = require(root, "system", "config");
  const auto kind = text(require(sys, "kind", "system"), "system.kind");
  std::size_t n = 1;
  if (kind == "scalar") {
    cfg.system = parse_scalar(sys);
  } else if (kind == "network") {
    auto net = parse_network(sys);
    n = net.n;
    cfg.system = std::move(net);
  } else {
    throw ConfigError("system.kind must be scalar or network");
  }
  if (root.contains("certify")) cfg.certify = parse_certify(root.at("certify"));
  if (root.contains("simulate")) cfg.simulate = parse_simulate(root.at("simulate"), n);
  if (root.contains("outputs")) cfg.outputs = parse_outputs(root.at("outputs"));
  if (root.contains("seed")) {
    const auto& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ConfigError("seed must be a nonnegative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  return cfg;
}

[[nodiscard]] inline Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json root;
  try {
    root = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
  Config cfg = parse_config(root);
  cfg.base_dir = path.parent_path();
  return cfg;
}

/// Expands the history specs in order; random histories draw from one
/// generator seeded with `seed`.
[[nodiscard]] inline std::vector<HistorySegment> expand_histories(const SimulateSection& sim, std::size_t n,
                                                                  double tau_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<HistorySegment> out;
  for (const auto& spec : sim.histories) {
    if (!spec.random) {
      out.push_back(spec.phi);
      continue;
    }
    for (std::size_t k = 0; k < spec.count; ++k) out.push_back(random_history(n, tau_max, spec.amplitude, rng));
  }
  return out;
}

/// The scalar comparison pair of the configured system: the scalar pair
/// itself, or the minimum-margin reduction of a network over [0, t_end].
[[nodiscard]] inline CoefficientPair comparison_pair(const SystemSpec& system, double t_end, double resolution) {
  if (const auto* s = std::get_if<ScalarDde>(&system)) return s->pair();
  const auto& net = std::get<NetworkSpec>(system);
  return network_pair(net, network_bounds(net, 0.0, t_end, resolution));
}

}  // namespace halanay
