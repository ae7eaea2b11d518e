// nlsm <subcommand> <config>: run one experiment family and write its
// artifacts. Exit codes: 0 pass, 1 assertion failure, 2 config error,
// 3 numerical refusal.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlsm/nlsm.hpp"

namespace {

enum Exit { kPass = 0, kAssertion = 1, kConfig = 2, kRefusal = 3 };

struct Options {
  std::string config;
  std::string output_dir;
  int workers = 0;
  bool quiet = false;
};

void print_result(const nlsm::ExperimentResult& res, const std::string& dir, double secs) {
  std::printf("%s: %s (%.2f s)\n", res.experiment.c_str(), res.passed() ? "PASS" : "FAIL", secs);
  for (const auto& a : res.assertions)
    std::printf("  %s %s: %s\n", a.passed ? "PASS" : "FAIL", a.name.c_str(), a.detail.c_str());
  if (!dir.empty()) std::printf("  artifacts: %s\n", dir.c_str());
}

/// Best effort: leave a manifest behind when a run is refused.
void write_refusal(const std::string& dir, const std::string& experiment, const nlohmann::json& config,
                   const std::string& message) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return;
  std::ofstream f(std::filesystem::path(dir) / "manifest.json");
  if (!f) return;
  f << nlohmann::json{{"experiment", experiment},
                      {"config", config},
                      {"versions", nlsm::version_info()},
                      {"refused", message},
                      {"finished", nlsm::utc_timestamp()}}
           .dump(2)
    << '\n';
}

int run(const std::string& experiment, const Options& o) {
  nlohmann::json resolved;
  std::string out_dir;
  try {
    auto cfg = nlsm::Config::load(o.config);
    cfg.apply_environment();
    if (!o.output_dir.empty()) cfg.set("output_dir", o.output_dir, "command line");
    if (o.workers > 0) cfg.set("workers", std::to_string(o.workers), "command line");
    const auto rc = nlsm::resolve(cfg, experiment);
    resolved = cfg.resolved();
    out_dir = rc.output_dir;
    const auto started = nlsm::utc_timestamp();
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = nlsm::run_experiment(rc);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlsm::write_artifacts(res, rc.output_dir, resolved, rc.seed, started, secs);
    if (!o.quiet) print_result(res, rc.output_dir, secs);
    return res.passed() ? kPass : kAssertion;
  } catch (const nlsm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const nlsm::RefusalError& e) {
    std::cerr << "numerical refusal: " << e.what() << '\n';
    if (!out_dir.empty()) write_refusal(out_dir, experiment, resolved, e.what());
    return kRefusal;
  } catch (const nlsm::InstabilityError& e) {
    std::cerr << "numerical refusal (instability): " << e.what() << '\n';
    if (!out_dir.empty()) write_refusal(out_dir, experiment, resolved, e.what());
    return kRefusal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
}

int selftest(const Options& o) {
  const auto started = nlsm::utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto res = nlsm::run_selftest();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string dir = o.output_dir;
    if (dir.empty())
      if (const char* v = std::getenv("NLSM_OUTPUT_DIR"); v && *v) dir = v;
    if (!dir.empty()) nlsm::write_artifacts(res, dir, nlohmann::json::object(), 0, started, secs);
    if (!o.quiet) print_result(res, dir, secs);
    return res.passed() ? kPass : kAssertion;
  } catch (const nlsm::RefusalError& e) {
    std::cerr << "numerical refusal: " << e.what() << '\n';
    return kRefusal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAssertion;
  }
}

void print_keys() {
  for (const auto& k : nlsm::config_schema()) {
    std::printf("%-17s %-10s default %-22s %s", k.name.c_str(), k.units.c_str(),
                ("'" + k.fallback + "'").c_str(), k.help.c_str());
    if (!k.choices.empty()) {
      std::string all;
      for (const auto& c : k.choices) all += (all.empty() ? "" : "|") + c;
      std::printf(" [%s]", all.c_str());
    }
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral NLS laboratory on the torus and the sphere"};
  app.require_subcommand(0, 1);
  bool keys = false;
  app.add_flag("--keys", keys, "list configuration keys with units and defaults");

  Options o;
  std::string chosen;
  for (const auto& name : nlsm::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("config", o.config, "configuration file (key = value)")->required();
    sub->add_option("--output-dir", o.output_dir, "override output_dir (after NLSM_OUTPUT_DIR)");
    sub->add_option("--workers", o.workers, "override workers (after NLSM_WORKERS)")->check(CLI::PositiveNumber);
    sub->add_flag("-q,--quiet", o.quiet, "no summary on stdout");
    sub->callback([&chosen, name] { chosen = name; });
  }
  auto* st = app.add_subcommand("selftest", "fast built-in checks");
  st->add_option("--output-dir", o.output_dir, "write artifacts here");
  st->add_flag("-q,--quiet", o.quiet, "no summary on stdout");
  st->callback([&chosen] { chosen = "selftest"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  if (keys) {
    print_keys();
    return kPass;
  }
  if (chosen.empty()) {
    std::cerr << app.help();
    return kConfig;
  }
  if (chosen == "selftest") return selftest(o);
  return run(chosen, o);
}
