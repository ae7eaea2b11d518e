#pragma once

// Experiment drivers behind the CLI subcommands. Each driver turns a
// validated RunConfig into tables, a JSON summary and a list of built-in
// assertions; write_artifacts puts them on disk with a manifest.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <fftw3.h>
#include <nlohmann/json.hpp>

#include "nlsm/config.hpp"
#include "nlsm/imethod.hpp"
#include "nlsm/locality.hpp"
#include "nlsm/random.hpp"
#include "nlsm/records.hpp"
#include "nlsm/solver.hpp"
#include "nlsm/spectra.hpp"
#include "nlsm/strichartz.hpp"
#include "nlsm/tensorizer.hpp"
#include "nlsm/transform.hpp"

namespace nlsm {

inline constexpr const char* kVersion = "0.1.0";

/// Results for indices 0..n-1 computed on `workers` threads, returned in
/// index order. The exception of the lowest failing index is rethrown.
template <class F>
auto parallel_map(std::size_t n, int workers, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using T = decltype(f(std::size_t{}));
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), n);
  if (nt <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<std::pair<std::string, CsvTable>> tables;  // file name, table
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json extra_files = nlohmann::json::object();  // file name -> JSON body
  nlohmann::json bases = nlohmann::json::array();
  std::vector<Assertion> assertions;

  bool passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
  }
  void check(std::string name, bool ok, std::string detail) {
    assertions.push_back({std::move(name), ok, std::move(detail)});
  }
};

inline std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

/// Short form for human-readable summaries; CSV bodies use format_double.
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

/// Initial data on the unit-scale manifold: Gaussian spectral decay of the
/// configured width, or (1 + nu)^{-1} amplitudes; mass as configured.
inline SpectralCoeffs initial_data(const RunConfig& c, const BasisPtr& unit_basis) {
  auto rng = make_rng(c.seed);
  if (c.data == "decay")
    return random_field(unit_basis, rng, [](const Mode& m) { return 1.0 / (1.0 + m.eigenvalue); }, std::sqrt(c.mass));
  return random_smooth(unit_basis, c.cutoff, c.width, rng, std::sqrt(c.mass));
}

// ---------------------------------------------------------------------------

inline ExperimentResult run_evolve(const RunConfig& c) {
  ExperimentResult res;
  res.experiment = "evolve";
  const Manifold man = manifold_from_string(c.manifold);
  auto unit = build_basis(man, c.cutoff, 1.0);
  const auto U0 = initial_data(c, unit);
  const double lambda = c.N.empty() ? c.lambda : c.lambda_for(c.N[0]);
  const auto u0 = lambda == 1.0 ? U0 : rescale_data(U0, lambda);
  res.bases.push_back(u0.basis().descriptor());

  EvolveConfig ec;
  ec.dt = c.dt;
  ec.T = c.T;
  ec.scheme = scheme_from_string(c.scheme);
  ec.record_every = c.record_every;
  if (!c.N.empty()) ec.mult = IMultiplier(c.N[0], c.s);
  const auto traj = evolve(u0, ec);

  auto energy = energy_table();
  for (std::size_t i = 0; i < traj.states.size(); ++i) add_row(energy, traj.times[i], traj.reports[i]);
  res.tables.emplace_back("energy.csv", std::move(energy));
  auto tt = trajectory_table(traj);

  double mass_drift = 0.0, energy_drift = 0.0, increment = 0.0;
  const double m0 = traj.reports.front().mass;
  const double e0 = hamiltonian(traj.states.front());
  const double me0 = traj.reports.front().modified_energy;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    mass_drift = std::max(mass_drift, std::abs(traj.reports[i].mass - m0) / m0);
    energy_drift = std::max(energy_drift, std::abs(hamiltonian(traj.states[i]) - e0) / std::abs(e0));
    increment = std::max(increment, std::abs(traj.reports[i].modified_energy - me0));
  }
  res.tables.emplace_back("trajectory.csv", std::move(tt));
  res.summary = {{"lambda", lambda},
                 {"steps", step_count(ec)},
                 {"modes", u0.size()},
                 {"relative_mass_drift", mass_drift},
                 {"relative_energy_drift", energy_drift},
                 {"modified_energy_increment", increment}};
  res.check("mass conservation", mass_drift <= c.mass_tolerance,
            "relative drift " + sci(mass_drift) + " (limit " + sci(c.mass_tolerance) + ")");
  return res;
}

struct IncrementPoint {
  double N = 0.0;
  double lambda = 0.0;
  double E0 = 0.0;
  double increment = 0.0;
  double reference = 0.0;  // 1 / (lambda N^{1/2})
  nlohmann::json basis;
};

/// sup_{[0, delta]} |E~(t) - E~(0)| on M_lambda for one N.
inline IncrementPoint almost_conservation_point(const RunConfig& c, const SpectralCoeffs& U0, double N) {
  IncrementPoint p;
  p.N = N;
  p.lambda = c.lambda_for(N);
  const auto u0 = p.lambda == 1.0 ? U0 : rescale_data(U0, p.lambda);
  p.basis = u0.basis().descriptor();
  EvolveConfig ec;
  ec.dt = c.dt;
  ec.T = c.delta;
  ec.scheme = scheme_from_string(c.scheme);
  ec.record_every = c.record_every;
  ec.mult = IMultiplier(N, c.s);
  const auto traj = evolve(u0, ec);
  p.E0 = traj.reports.front().modified_energy;
  for (const auto& r : traj.reports) p.increment = std::max(p.increment, std::abs(r.modified_energy - p.E0));
  p.reference = 1.0 / (p.lambda * std::sqrt(N));
  return p;
}

inline ExperimentResult run_almost_conservation(const RunConfig& c) {
  ExperimentResult res;
  res.experiment = "almost-conservation";
  auto unit = build_basis(manifold_from_string(c.manifold), c.cutoff, 1.0);
  const auto U0 = initial_data(c, unit);
  res.bases.push_back(unit->descriptor());
  const auto pts = parallel_map(c.N.size(), c.workers, [&](std::size_t i) {
    return almost_conservation_point(c, U0, c.N[i]);
  });
  CsvTable t({"N", "lambda", "T", "dt", "E0", "increment", "relative_increment", "reference"});
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    t.add({p.N, p.lambda, c.delta, c.dt, p.E0, p.increment, p.increment / std::abs(p.E0), p.reference});
    res.bases.push_back(p.basis);
    xs.push_back(p.N);
    ys.push_back(p.increment);
  }
  res.tables.emplace_back("almost_conservation.csv", std::move(t));
  const bool positive = std::all_of(ys.begin(), ys.end(), [](double y) { return y > 0.0; });
  const double slope = positive ? loglog_slope(xs, ys) : std::nan("");
  res.summary = {{"slope", positive ? nlohmann::json(slope) : nlohmann::json(nullptr)},
                 {"predicted_slope", -0.5 - (1.0 - c.s) / c.s},
                 {"slope_bound", c.slope_bound}};
  res.check("increment slope", positive && slope <= c.slope_bound,
            positive ? "fitted slope " + num(slope) + " (bound " + num(c.slope_bound) + ")"
                     : std::string("an increment is exactly zero; slope undefined"));
  return res;
}

inline ExperimentResult run_strichartz(const RunConfig& c) {
  ExperimentResult res;
  res.experiment = "strichartz";
  SweepOptions opt;
  opt.manifold = manifold_from_string(c.manifold);
  opt.regime = c.regime == "rescaled" ? StrichartzRegime::kRescaled : StrichartzRegime::kSemiclassical;
  opt.bilinear.rule = time_rule_from_string(c.time_rule);
  const std::size_t trials = static_cast<std::size_t>(c.trials);
  const auto samples = parallel_map(c.N.size() * trials, c.workers, [&](std::size_t i) {
    const double N1 = c.N[i / trials];
    return strichartz_point(N1, c.N2, c.lambda_for(N1), static_cast<int>(i % trials), c.seed, opt);
  });
  for (double N1 : c.N) res.bases.push_back(build_basis(opt.manifold, std::max(1.0, 2.0 * N1), c.lambda_for(N1))->descriptor());
  res.tables.emplace_back("strichartz.csv", strichartz_table(samples));

  nlohmann::json maxima = nlohmann::json::object();
  std::vector<double> max_ratio(c.N.size(), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i)
    max_ratio[i / trials] = std::max(max_ratio[i / trials], samples[i].ratio);
  for (std::size_t k = 0; k < c.N.size(); ++k) maxima[num(c.N[k])] = max_ratio[k];
  res.summary = {{"max_ratio", maxima}};
  const double spread = std::max(max_ratio.back() / max_ratio.front(), max_ratio.front() / max_ratio.back());
  res.summary["spread"] = spread;
  res.check("uniform constant", spread <= c.max_ratio_factor,
            "max ratio " + num(max_ratio.front()) + " at N1 = " + num(c.N.front()) + ", " + num(max_ratio.back()) +
                " at N1 = " + num(c.N.back()) + " (factor " + num(c.max_ratio_factor) + " allowed)");
  return res;
}

/// Random torus quadruples of orthonormal characters that are not resonant.
inline std::vector<std::array<std::array<int, 2>, 4>> off_resonant_quadruples(int count, int box,
                                                                             std::uint64_t seed) {
  auto rng = make_rng(seed, 0x71);
  std::uniform_int_distribution<int> d(-box, box);
  std::vector<std::array<std::array<int, 2>, 4>> out;
  while (static_cast<int>(out.size()) < count) {
    std::array<std::array<int, 2>, 4> q{};
    int sx = 0, sy = 0;
    for (auto& x : q) {
      x = {d(rng), d(rng)};
      sx += x[0];
      sy += x[1];
    }
    if (sx != 0 || sy != 0) out.push_back(q);
  }
  return out;
}

inline double character_quadruple_integral(const BasisPtr& b, const std::array<std::array<int, 2>, 4>& q) {
  std::vector<SpectralCoeffs> fs;
  for (const auto& x : q) {
    SpectralCoeffs e(b);
    e.set({x[0], x[1]}, 1.0);
    fs.push_back(std::move(e));
  }
  return std::abs(correlation_integral(fs));
}

inline ExperimentResult run_locality(const RunConfig& c) {
  ExperimentResult res;
  res.experiment = "locality";
  const auto rows = cluster_decay_table(c.lambda_cluster, c.mu_cluster, c.K, c.seed);
  double beyond = 0.0, inside = 0.0;
  for (const auto& r : rows) {
    const bool outside = r.nu > c.lambda_cluster + c.mu_cluster || r.nu < c.lambda_cluster - c.mu_cluster;
    (outside ? beyond : inside) = std::max(outside ? beyond : inside, r.norm);
  }
  res.tables.emplace_back("locality.csv", decay_table(rows));
  res.bases.push_back(build_basis(Manifold::kSphere, std::max(c.lambda_cluster, c.mu_cluster) + 1.0, 1.0)->descriptor());

  double torus_max = 0.0;
  if (c.quadruples > 0) {
    auto b = build_basis(Manifold::kTorus, std::sqrt(2.0) * c.box + 1.0, 1.0);
    res.bases.push_back(b->descriptor());
    const auto qs = off_resonant_quadruples(c.quadruples, c.box, c.seed);
    const auto vals = parallel_map(qs.size(), c.workers, [&](std::size_t i) {
      return character_quadruple_integral(b, qs[i]);
    });
    for (double v : vals) torus_max = std::max(torus_max, v);
  }
  res.summary = {{"sphere_max_beyond_triangle", beyond},
                 {"sphere_max_inside_triangle", inside},
                 {"torus_quadruples", c.quadruples},
                 {"torus_max_off_resonance", torus_max}};
  res.check("sphere triangle rule", beyond <= c.zero_tolerance,
            "max normalized cluster norm outside [lambda - mu, lambda + mu]: " + sci(beyond));
  if (c.quadruples > 0)
    res.check("torus off-resonance", torus_max <= c.zero_tolerance,
              "max |integral| over " + std::to_string(c.quadruples) + " quadruples: " + sci(torus_max));
  return res;
}

inline ExperimentResult run_an_identity(const RunConfig& c) {
  ExperimentResult res;
  res.experiment = "an-identity";
  auto rng = make_rng(c.seed, 0xa7);
  std::uniform_int_distribution<int> d(-c.box, c.box);
  std::vector<std::array<std::array<int, 2>, 3>> inst;
  long skipped = 0;
  auto sq = [](std::array<int, 2> v) { return v[0] * v[0] + v[1] * v[1]; };
  while (static_cast<int>(inst.size()) < c.quadruples) {
    std::array<std::array<int, 2>, 3> x{};
    for (auto& v : x) v = {d(rng), d(rng)};
    const std::array<int, 2> x1{-(x[0][0] + x[1][0] + x[2][0]), -(x[0][1] + x[1][1] + x[2][1])};
    if (std::abs(sq(x1) - sq(x[0]) - sq(x[1]) - sq(x[2])) < 1) {
      ++skipped;
      continue;
    }
    inst.push_back(x);
  }
  const auto results = parallel_map(inst.size(), c.workers, [&](std::size_t i) {
    return an_identity_check(inst[i][0], inst[i][1], inst[i][2], c.n_iters);
  });
  CsvTable t({"instance", "xi2_x", "xi2_y", "xi3_x", "xi3_y", "xi4_x", "xi4_y", "n", "denominator", "A0_re",
              "An_symbolic_re", "An_quadrature_re", "An_quadrature_im", "rel_error_symbolic",
              "rel_error_quadrature"});
  double worst = 0.0, worst_sym = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i)
    for (const auto& r : results[i]) {
      const auto& x = inst[i];
      t.add({static_cast<long>(i), x[0][0], x[0][1], x[1][0], x[1][1], x[2][0], x[2][1], r.n, r.denominator,
             r.A0.real(), r.An_symbolic.real(), r.An_quadrature.real(), r.An_quadrature.imag(), r.rel_error_symbolic,
             r.rel_error_quadrature});
      worst = std::max(worst, r.rel_error_quadrature);
      worst_sym = std::max(worst_sym, r.rel_error_symbolic);
    }
  res.tables.emplace_back("an_identity.csv", std::move(t));
  res.summary = {{"instances", inst.size()},
                 {"skipped_small_denominator", skipped},
                 {"max_rel_error_quadrature", worst},
                 {"max_rel_error_symbolic", worst_sym}};
  res.check("A_n identity", worst <= c.an_tolerance && worst_sym <= c.an_tolerance,
            "max relative error " + sci(worst) + " (quadrature), " + sci(worst_sym) + " (symbolic)");
  return res;
}

inline SymbolFn symbol_from_config(const RunConfig& c, double N) {
  if (c.symbol == "ratio") return ratio_symbol(N, c.s);
  if (c.symbol == "denominator") return denominator_symbol(c.l);
  return bar_m_symbol(N, c.s, c.l);
}

inline ExperimentResult run_tensorize(const RunConfig& c) {
  ExperimentResult res;
  res.experiment = "tensorize";
  const Extension ext = extension_from_string(c.extension);
  const auto exps = parallel_map(c.N.size(), c.workers, [&](std::size_t i) {
    const auto block = s1_block(c.block[0], c.block[1], c.block[2], c.alpha, c.beta, symbol_from_config(c, c.N[i]));
    return tensorize(block, c.J, ext, c.tolerance);
  });
  CsvTable t({"N", "s", "l", "J", "modes_per_axis", "l1_mass", "sup_symbol", "sup_error", "relative_error", "failed"});
  nlohmann::json out = nlohmann::json::array();
  int failed = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    const auto& e = exps[i];
    t.add({c.N[i], c.s, c.l, e.J, e.modes_per_axis(), e.l1_mass, e.sup_symbol, e.sup_error, e.relative_error,
           e.failed ? 1 : 0});
    auto j = to_json(e, true);
    j["N"] = c.N[i];
    j["symbol"] = c.symbol;
    out.push_back(std::move(j));
    failed += e.failed ? 1 : 0;
    worst = std::max(worst, e.relative_error);
  }
  res.tables.emplace_back("tensorize.csv", std::move(t));
  res.extra_files["expansions.json"] = std::move(out);
  res.summary = {{"max_relative_error", worst}, {"failed", failed}, {"window", window_id(ext)}};
  res.check("reconstruction", failed == 0,
            "max relative sup error " + sci(worst) + " with " + std::to_string(2 * c.J + 1) +
                " modes per axis (tolerance " + sci(c.tolerance) + ")");
  return res;
}

inline ExperimentResult run_experiment(const RunConfig& c) {
  if (c.experiment == "evolve") return run_evolve(c);
  if (c.experiment == "almost-conservation") return run_almost_conservation(c);
  if (c.experiment == "strichartz") return run_strichartz(c);
  if (c.experiment == "locality") return run_locality(c);
  if (c.experiment == "an-identity") return run_an_identity(c);
  if (c.experiment == "tensorize") return run_tensorize(c);
  throw ConfigError("unknown experiment '" + c.experiment + "'");
}

/// Fast built-in checks across all modules (a few seconds).
inline ExperimentResult run_selftest() {
  ExperimentResult res;
  res.experiment = "selftest";
  {
    double worst = 0.0;
    for (auto man : {Manifold::kTorus, Manifold::kSphere}) {
      auto b = build_basis(man, 16.5, 1.0);
      auto rng = make_rng(1, static_cast<std::uint64_t>(man));
      auto c = random_band(b, 0.0, 17.0, rng);
      auto back = analyze(synthesize(c, grid_for(man, 1.0, 2 * b->extent())), b);
      for (std::size_t k = 0; k < c.size(); ++k) worst = std::max(worst, std::abs(back[k] - c[k]));
    }
    res.check("round trip", worst <= 1e-12, "max coefficient error " + sci(worst));
  }
  {
    auto b = build_basis(Manifold::kTorus, 12.0, 1.0);
    auto rng = make_rng(2);
    auto u0 = random_smooth(b, 12.0, 2.0, rng);
    EvolveConfig ec;
    ec.dt = 1e-3;
    ec.T = 0.2;
    auto tr = evolve(u0, ec);
    const double drift = std::abs(tr.reports.back().mass - tr.reports.front().mass);
    res.check("split-step mass", drift <= 1e-11, "mass drift " + sci(drift));
  }
  {
    double worst = 0.0;
    auto r = an_identity_check({1, 2}, {-3, 1}, {2, 2}, 2);
    for (const auto& e : r) worst = std::max(worst, e.rel_error_quadrature);
    res.check("A_n identity", worst <= 1e-10, "relative error " + sci(worst));
  }
  {
    auto rows = cluster_decay_table(10, 3, {2.0}, 5);
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.norm);
    res.check("triangle rule", m <= 1e-10, "cluster norm beyond the triangle " + sci(m));
  }
  {
    auto block = s1_block(16, 2, 1, 2, 0, [](std::span<const double>) { return 1.0; });
    auto e = tensorize(block, 1);
    res.check("tensorize constant", !e.failed && e.relative_error <= 1e-10,
              "relative error " + sci(e.relative_error));
  }
  return res;
}

inline nlohmann::json version_info() {
  return {{"nlsm", kVersion},
          {"compiler", __VERSION__},
          {"cplusplus", __cplusplus},
          {"fftw", std::string(fftw_version)},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

inline std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes the tables, extra JSON files, manifest.json and summary.txt.
/// Timestamps appear only in the manifest.
inline void write_artifacts(const ExperimentResult& res, const std::filesystem::path& dir,
                            const nlohmann::json& resolved_config, std::uint64_t seed, const std::string& started,
                            double seconds) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, table] : res.tables) {
    table.write(dir / name);
    files.push_back(name);
  }
  for (const auto& [name, body] : res.extra_files.items()) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << body.dump(2) << '\n';
    files.push_back(name);
  }
  nlohmann::json asserts = nlohmann::json::array();
  for (const auto& a : res.assertions) asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  nlohmann::json manifest{{"experiment", res.experiment},
                          {"config", resolved_config},
                          {"seed", seed},
                          {"versions", version_info()},
                          {"bases", res.bases},
                          {"summary", res.summary},
                          {"assertions", asserts},
                          {"passed", res.passed()},
                          {"files", files},
                          {"started", started},
                          {"finished", utc_timestamp()},
                          {"seconds", seconds}};
  {
    std::ofstream f(dir / "manifest.json");
    if (!f) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
    f << manifest.dump(2) << '\n';
  }
  std::ofstream f(dir / "summary.txt");
  if (!f) throw std::runtime_error("cannot write " + (dir / "summary.txt").string());
  f << res.experiment << ": " << (res.passed() ? "PASS" : "FAIL") << '\n';
  for (const auto& a : res.assertions) f << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << '\n';
}

}  // namespace nlsm
