#pragma once

// Flat `key = value` run configuration with a typed schema. Every key has
// a unit and a default; the resolved table (value plus its source: file
// line, default or environment) goes into the run manifest.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlsm/errors.hpp"

namespace nlsm {

enum class ValueType { kString, kReal, kInteger, kUnsigned, kRealList, kChoice };

struct KeySpec {
  std::string name;
  ValueType type;
  std::string units;
  std::string fallback;
  std::vector<std::string> choices;
  std::string help;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> v{"evolve", "almost-conservation", "strichartz",
                                          "locality", "an-identity", "tensorize"};
  return v;
}

inline const std::vector<KeySpec>& config_schema() {
  using V = ValueType;
  static const std::vector<KeySpec> s{
      {"experiment", V::kChoice, "-", "", experiment_names(), "experiment family; must match the subcommand"},
      {"manifold", V::kChoice, "-", "torus", {"torus", "sphere"}, "base manifold"},
      {"s", V::kReal, "-", "0.7", {}, "Sobolev index of the I-multiplier"},
      {"N", V::kRealList, "frequency", "", {}, "I-multiplier scale or sweep list (N1 for strichartz); evolve: empty means no I"},
      {"lambda_rule", V::kChoice, "-", "explicit", {"explicit", "auto"}, "auto: lambda = N^((1-s)/s)"},
      {"lambda", V::kReal, "length", "1", {}, "rescaling factor for lambda_rule = explicit"},
      {"dt", V::kReal, "time", "0.001", {}, "time step"},
      {"T", V::kReal, "time", "0.5", {}, "evolution horizon (evolve)"},
      {"delta", V::kReal, "time", "0.5", {}, "local time step on M_lambda (almost-conservation horizon)"},
      {"trials", V::kInteger, "count", "20", {}, "random trials per sweep point"},
      {"seed", V::kUnsigned, "-", "2024", {}, "master seed"},
      {"output_dir", V::kString, "path", "out", {}, "artifact directory"},
      {"workers", V::kInteger, "count", "1", {}, "worker threads for independent sweep points"},
      {"cutoff", V::kReal, "frequency", "24", {}, "basis cutoff on the unit-scale manifold"},
      {"data", V::kChoice, "-", "smooth", {"smooth", "decay"}, "smooth: Gaussian decay of width; decay: (1+nu)^-1"},
      {"width", V::kReal, "frequency", "3", {}, "Gaussian width for data = smooth"},
      {"mass", V::kReal, "L2 norm^2", "1", {}, "initial mass"},
      {"scheme", V::kChoice, "-", "split-step", {"split-step", "rk4"}, "time integrator"},
      {"record_every", V::kInteger, "steps", "1", {}, "diagnostic stride"},
      {"N2", V::kReal, "frequency", "4", {}, "low frequency of the bilinear pair"},
      {"regime", V::kChoice, "-", "semiclassical", {"semiclassical", "rescaled"}, "strichartz time window"},
      {"time_rule", V::kChoice, "-", "gauss", {"gauss", "simpson"}, "time quadrature of bilinear norms"},
      {"max_ratio_factor", V::kReal, "-", "2", {}, "allowed spread of max ratios between first and last N1"},
      {"lambda_cluster", V::kInteger, "frequency", "40", {}, "high cluster degree (locality)"},
      {"mu_cluster", V::kInteger, "frequency", "4", {}, "low cluster degree (locality)"},
      {"K", V::kRealList, "-", "0.5, 1, 2, 4", {}, "cluster offsets nu = lambda +- (K mu + 2)"},
      {"quadruples", V::kInteger, "count", "1000", {}, "random torus character quadruples"},
      {"box", V::kInteger, "frequency", "8", {}, "random lattice vectors drawn from [-box, box]^2"},
      {"zero_tolerance", V::kReal, "-", "1e-10", {}, "threshold for exactly vanishing quantities"},
      {"n_iters", V::kInteger, "count", "2", {}, "largest n of the A_n identity"},
      {"an_tolerance", V::kReal, "-", "1e-10", {}, "max relative error of the A_n identity"},
      {"J", V::kInteger, "count", "4", {}, "Fourier modes per axis are 2J+1"},
      {"extension", V::kChoice, "-", "fourier-extension", {"fourier-extension", "bump-window"}, "periodic extension"},
      {"symbol", V::kChoice, "-", "bar-m", {"bar-m", "ratio", "denominator"}, "multiplier symbol"},
      {"l", V::kInteger, "count", "3", {}, "power of the resonance denominator"},
      {"alpha", V::kInteger, "count", "8", {}, "block index of n1"},
      {"beta", V::kInteger, "count", "0", {}, "block index of n2"},
      {"block", V::kRealList, "frequency", "64, 2, 1", {}, "N2, N3, N4 of the tensorized block"},
      {"tolerance", V::kReal, "-", "1e-6", {}, "relative sup error of the tensor expansion"},
      {"slope_bound", V::kReal, "-", "-0.3", {}, "required log-log slope of increment vs N"},
      {"mass_tolerance", V::kReal, "-", "1e-10", {}, "relative mass drift allowed by evolve"},
  };
  return s;
}

inline const KeySpec* find_key(const std::string& name) {
  for (const auto& k : config_schema())
    if (k.name == name) return &k;
  return nullptr;
}

struct ConfigEntry {
  std::string value;
  int line = 0;          // 0: not from the file
  std::string source;    // "file", "default", "env", "cli"
};

namespace detail {

inline std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double parse_real(const std::string& v, const std::string& key, int line) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc{} || p != end || !std::isfinite(x))
    throw ConfigError("key '" + key + "': expected a real number, got '" + v + "'", line);
  return x;
}

inline long long parse_int(const std::string& v, const std::string& key, int line) {
  long long x = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc{} || p != end) throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'", line);
  return x;
}

inline std::vector<double> parse_list(const std::string& v, const std::string& key, int line) {
  std::vector<double> out;
  std::string s = v;
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      if (!trim(s).empty()) throw ConfigError("key '" + key + "': empty list element", line);
      continue;
    }
    out.push_back(parse_real(item, key, line));
  }
  return out;
}

inline void check_value(const KeySpec& k, const ConfigEntry& e) {
  switch (k.type) {
    case ValueType::kReal: parse_real(e.value, k.name, e.line); break;
    case ValueType::kInteger: parse_int(e.value, k.name, e.line); break;
    case ValueType::kUnsigned:
      if (!e.value.empty() && e.value[0] == '-')
        throw ConfigError("key '" + k.name + "': expected a non-negative integer, got '" + e.value + "'", e.line);
      parse_int(e.value, k.name, e.line);
      break;
    case ValueType::kRealList: parse_list(e.value, k.name, e.line); break;
    case ValueType::kChoice:
      if (e.value.empty() && k.fallback.empty()) break;
      if (std::find(k.choices.begin(), k.choices.end(), e.value) == k.choices.end()) {
        std::string all;
        for (const auto& c : k.choices) all += (all.empty() ? "" : "|") + c;
        throw ConfigError("key '" + k.name + "': '" + e.value + "' is not one of " + all, e.line);
      }
      break;
    case ValueType::kString: break;
  }
}

}  // namespace detail

/// Parsed and type-checked configuration; missing keys take schema defaults.
class Config {
 public:
  static Config parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string body = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + body + "'", line);
      const std::string key = detail::trim(body.substr(0, eq));
      const std::string value = detail::trim(body.substr(eq + 1));
      const KeySpec* spec = find_key(key);
      if (!spec) throw ConfigError("unknown key '" + key + "'", line);
      if (auto it = c.entries_.find(key); it != c.entries_.end())
        throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) + ")",
                          line);
      ConfigEntry e{value, line, "file"};
      detail::check_value(*spec, e);
      c.entries_[key] = e;
    }
    for (const auto& k : config_schema())
      if (!c.entries_.count(k.name)) c.entries_[k.name] = ConfigEntry{k.fallback, 0, "default"};
    return c;
  }

  static Config load(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      Config c = parse(ss.str());
      c.source_ = path.string();
      return c;
    } catch (const ConfigError& e) {
      throw ConfigError(e.reason(), e.line(), path.string());
    }
  }

  /// Replace a value from outside the file (env var or command line).
  void set(const std::string& key, const std::string& value, const std::string& source) {
    const KeySpec* spec = find_key(key);
    if (!spec) throw ConfigError("unknown key '" + key + "'");
    ConfigEntry e{value, 0, source};
    try {
      detail::check_value(*spec, e);
    } catch (const ConfigError& err) {
      throw ConfigError(err.reason(), 0, source);
    }
    entries_[key] = e;
  }

  /// NLSM_OUTPUT_DIR and NLSM_WORKERS override the file.
  void apply_environment() {
    if (const char* v = std::getenv("NLSM_OUTPUT_DIR"); v && *v) set("output_dir", v, "env NLSM_OUTPUT_DIR");
    if (const char* v = std::getenv("NLSM_WORKERS"); v && *v) set("workers", v, "env NLSM_WORKERS");
  }

  const ConfigEntry& entry(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("unknown key '" + key + "'");
    return it->second;
  }

  std::string str(const std::string& key) const { return entry(key).value; }
  double real(const std::string& key) const {
    const auto& e = entry(key);
    return detail::parse_real(e.value, key, e.line);  // validated at parse time
  }
  long long integer(const std::string& key) const {
    const auto& e = entry(key);
    return detail::parse_int(e.value, key, e.line);
  }
  std::uint64_t unsigned_integer(const std::string& key) const {
    return static_cast<std::uint64_t>(integer(key));
  }
  std::vector<double> list(const std::string& key) const {
    const auto& e = entry(key);
    return detail::parse_list(e.value, key, e.line);
  }

  int line(const std::string& key) const { return entry(key).line; }
  const std::string& source() const noexcept { return source_; }

  /// {key: {value, units, source[, line]}} for the manifest.
  nlohmann::json resolved() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& k : config_schema()) {
      const auto& e = entries_.at(k.name);
      nlohmann::json v{{"value", e.value}, {"units", k.units}, {"source", e.source}};
      if (e.line > 0) v["line"] = e.line;
      j[k.name] = std::move(v);
    }
    return j;
  }

 private:
  std::map<std::string, ConfigEntry> entries_;
  std::string source_ = "<config>";
};

enum class LambdaRule { kExplicit, kAuto };

/// Typed view of a Config for one experiment, validated before dispatch.
struct RunConfig {
  std::string experiment;
  std::string manifold;
  double s = 0.7;
  std::vector<double> N;
  LambdaRule lambda_rule = LambdaRule::kExplicit;
  double lambda = 1.0;
  double dt = 1e-3;
  double T = 0.5;
  double delta = 0.5;
  int trials = 20;
  std::uint64_t seed = 2024;
  std::string output_dir;
  int workers = 1;
  double cutoff = 24.0;
  std::string data;
  double width = 3.0;
  double mass = 1.0;
  std::string scheme;
  int record_every = 1;
  double N2 = 4.0;
  std::string regime;
  std::string time_rule;
  double max_ratio_factor = 2.0;
  int lambda_cluster = 40;
  int mu_cluster = 4;
  std::vector<double> K;
  int quadruples = 1000;
  int box = 8;
  double zero_tolerance = 1e-10;
  int n_iters = 2;
  double an_tolerance = 1e-10;
  int J = 4;
  std::string extension;
  std::string symbol;
  int l = 3;
  int alpha = 8;
  int beta = 0;
  std::vector<double> block;
  double tolerance = 1e-6;
  double slope_bound = -0.3;
  double mass_tolerance = 1e-10;

  /// lambda for scale N under the configured rule.
  double lambda_for(double n) const {
    return lambda_rule == LambdaRule::kAuto ? std::pow(n, (1.0 - s) / s) : lambda;
  }
};

inline RunConfig resolve(const Config& c, const std::string& experiment) {
  auto fail = [&c](const std::string& key, const std::string& msg) -> void {
    throw ConfigError(msg, c.line(key), c.source());
  };
  const std::string declared = c.str("experiment");
  if (!declared.empty() && declared != experiment)
    fail("experiment", "config declares experiment '" + declared + "' but the subcommand is '" + experiment + "'");
  if (std::find(experiment_names().begin(), experiment_names().end(), experiment) == experiment_names().end())
    throw ConfigError("unknown experiment '" + experiment + "'", 0, c.source());

  RunConfig r;
  r.experiment = experiment;
  r.manifold = c.str("manifold");
  r.s = c.real("s");
  r.N = c.list("N");
  r.lambda_rule = c.str("lambda_rule") == "auto" ? LambdaRule::kAuto : LambdaRule::kExplicit;
  r.lambda = c.real("lambda");
  r.dt = c.real("dt");
  r.T = c.real("T");
  r.delta = c.real("delta");
  r.trials = static_cast<int>(c.integer("trials"));
  r.seed = c.unsigned_integer("seed");
  r.output_dir = c.str("output_dir");
  r.workers = static_cast<int>(c.integer("workers"));
  r.cutoff = c.real("cutoff");
  r.data = c.str("data");
  r.width = c.real("width");
  r.mass = c.real("mass");
  r.scheme = c.str("scheme");
  r.record_every = static_cast<int>(c.integer("record_every"));
  r.N2 = c.real("N2");
  r.regime = c.str("regime");
  r.time_rule = c.str("time_rule");
  r.max_ratio_factor = c.real("max_ratio_factor");
  r.lambda_cluster = static_cast<int>(c.integer("lambda_cluster"));
  r.mu_cluster = static_cast<int>(c.integer("mu_cluster"));
  r.K = c.list("K");
  r.quadruples = static_cast<int>(c.integer("quadruples"));
  r.box = static_cast<int>(c.integer("box"));
  r.zero_tolerance = c.real("zero_tolerance");
  r.n_iters = static_cast<int>(c.integer("n_iters"));
  r.an_tolerance = c.real("an_tolerance");
  r.J = static_cast<int>(c.integer("J"));
  r.extension = c.str("extension");
  r.symbol = c.str("symbol");
  r.l = static_cast<int>(c.integer("l"));
  r.alpha = static_cast<int>(c.integer("alpha"));
  r.beta = static_cast<int>(c.integer("beta"));
  r.block = c.list("block");
  r.tolerance = c.real("tolerance");
  r.slope_bound = c.real("slope_bound");
  r.mass_tolerance = c.real("mass_tolerance");

  if (!(r.s > 0.0 && r.s <= 1.0)) fail("s", "s must lie in (0, 1]");
  if (r.lambda_rule == LambdaRule::kAuto && !(r.s > 2.0 / 3.0 && r.s < 1.0))
    fail("lambda_rule", "lambda_rule = auto requires s in (2/3, 1), got s = " + c.str("s"));
  if (!(r.lambda > 0.0)) fail("lambda", "lambda must be > 0");
  if (!(r.dt > 0.0)) fail("dt", "dt must be > 0");
  if (!(r.T > 0.0)) fail("T", "T must be > 0");
  if (!(r.delta > 0.0)) fail("delta", "delta must be > 0");
  if (r.trials < 1) fail("trials", "trials must be >= 1");
  if (r.workers < 1) fail("workers", "workers must be >= 1");
  if (r.output_dir.empty()) fail("output_dir", "output_dir must not be empty");
  if (!(r.cutoff > 0.0)) fail("cutoff", "cutoff must be > 0");
  if (!(r.width > 0.0)) fail("width", "width must be > 0");
  if (!(r.mass > 0.0)) fail("mass", "mass must be > 0");
  if (r.record_every < 1) fail("record_every", "record_every must be >= 1");

  const bool sweeps_N = experiment == "almost-conservation" || experiment == "strichartz" || experiment == "tensorize";
  if (sweeps_N && r.N.empty()) fail("N", "sweep list N is empty");
  for (double n : r.N)
    if (!(n > 0.0)) fail("N", "entries of N must be > 0");
  if (experiment == "evolve" && r.N.empty() && r.lambda_rule == LambdaRule::kAuto)
    fail("lambda_rule", "lambda_rule = auto needs N");
  if (experiment == "evolve" && r.N.size() > 1)
    fail("N", "evolve takes a single N (the I-multiplier scale), got " + std::to_string(r.N.size()));
  if (experiment == "almost-conservation") {
    if (r.N.size() < 2) fail("N", "almost-conservation needs at least two N to fit a slope");
    for (double n : r.N)
      if (n < 2.0) fail("N", "almost-conservation needs N >= 2");
  }
  if (experiment == "strichartz") {
    for (double n : r.N)
      if (n < r.N2) fail("N", "every N1 must be >= N2 = " + c.str("N2"));
    if (!(r.N2 > 0.0)) fail("N2", "N2 must be > 0");
    if (!(r.max_ratio_factor >= 1.0)) fail("max_ratio_factor", "max_ratio_factor must be >= 1");
  }
  if (experiment == "locality") {
    if (r.K.empty()) fail("K", "sweep list K is empty");
    if (r.lambda_cluster < 0 || r.mu_cluster < 1) fail("mu_cluster", "need lambda_cluster >= 0 and mu_cluster >= 1");
    if (r.quadruples < 0) fail("quadruples", "quadruples must be >= 0");
    if (r.box < 1) fail("box", "box must be >= 1");
  }
  if (experiment == "an-identity") {
    if (r.n_iters < 1) fail("n_iters", "n_iters must be >= 1");
    if (r.quadruples < 1) fail("quadruples", "quadruples must be >= 1");
    if (r.box < 1) fail("box", "box must be >= 1");
  }
  if (experiment == "tensorize") {
    if (r.J < 0) fail("J", "J must be >= 0");
    if (r.block.size() != 3) fail("block", "block needs three entries N2, N3, N4");
    if (r.l < 0) fail("l", "l must be >= 0");
    if (!(r.tolerance > 0.0)) fail("tolerance", "tolerance must be > 0");
  }
  return r;
}

}  // namespace nlsm
