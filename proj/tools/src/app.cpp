#include "qfall/cli/app.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "qfall/cli/config.hpp"
#include "qfall/cli/scenarios.hpp"

namespace qfall::cli {

namespace {

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
    const std::string text(env);
    unsigned value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || value == 0) {
      throw ConfigError(kThreadsEnv, 0, 0, "", "expected a positive integer, got '" + text + "'");
    }
    return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ScenarioConfig load(const std::string& path, bool si) {
  ScenarioConfig config = load_config(path);
  if (si) {
    if (config.kind != ScenarioKind::qubit_phase) {
      throw ConfigError(path, 0, 0, "units", "--si only applies to the qubit-phase scenario");
    }
    config.units = UnitMode::si;
  }
  return config;
}

std::string brief(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

void print_checks(const RunReport& report, std::ostream& out) {
  for (const Check& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << brief(c.value) << ' ' << c.relation << ' '
        << brief(c.threshold) << '\n';
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum free-fall scenario runner"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("qfall ") + kVersion);

  unsigned threads = 0;
  std::optional<std::string> out_dir;
  bool si = false;
  app.add_option("--threads", threads, std::string("worker threads for sweeps (default: $") + kThreadsEnv +
                                           ", else the hardware concurrency)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", out_dir, "output directory (overrides output.dir in the config)");
  app.add_flag("--si", si, "evaluate closed forms in SI units (qubit-phase only)");

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run a scenario and write CSV/JSON output");
  run->add_option("config", config_path, "scenario config (YAML)")->required();
  CLI::App* validate = app.add_subcommand("validate", "parse and validate a config without running it");
  validate->add_option("config", config_path, "scenario config (YAML)")->required();
  CLI::App* list = app.add_subcommand("list-scenarios", "list scenario kinds and their CSV columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  if (list->parsed()) {
    for (const ScenarioInfo& info : scenario_catalog()) {
      out << scenario_name(info.kind) << "\n  " << info.summary << "\n  " << info.columns << '\n';
    }
    return kExitPass;
  }

  ScenarioConfig config;
  try {
    config = load(config_path, si);
    if (validate->parsed()) {
      out << config_path << ": valid " << scenario_name(config.kind) << " config\n";
      return kExitPass;
    }
    const unsigned workers = resolve_threads(threads);
    out << "qfall " << kVersion << ": " << scenario_name(config.kind) << " '" << config.name << "', " << workers
        << (workers == 1 ? " thread\n" : " threads\n");

    const RunReport report = run_scenario(config, {workers});
    print_checks(report, out);
    for (const auto& path : write_report(report, out_dir.value_or(config.output_dir))) {
      out << "wrote " << path.string() << '\n';
    }
    out << "wall-clock " << report.wall_clock_seconds << " s\n";
    out << (report.passed() ? "result: PASS\n" : "result: FAIL\n");
    return report.passed() ? kExitPass : kExitChecksFailed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const GuardError& e) {
    err << "guard tripped [" << e.guard() << "]: " << e.what() << '\n';
    return kExitGuardTripped;
  } catch (const InvalidArgument& e) {
    err << "config error: " << config_path << ": " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace qfall::cli
