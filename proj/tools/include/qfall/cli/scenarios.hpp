#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qfall/cli/config.hpp"
#include "qfall/cli/csv.hpp"

namespace qfall::cli {

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  ///< "<", "<=", ">=" or "==" against threshold
  double threshold = 0.0;
  bool passed = false;
};

struct RunReport {
  ScenarioKind kind = ScenarioKind::ep_a;
  std::string name;
  std::string version;
  nlohmann::json config;
  std::vector<Check> checks;
  nlohmann::json results = nlohmann::json::object();
  std::vector<CsvTable> tables;
  double wall_clock_seconds = 0.0;

  bool passed() const;
  /// JSON summary. Wall-clock time is left out so repeated runs are byte-identical.
  nlohmann::json summary() const;
};

struct RunOptions {
  unsigned threads = 1;
};

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options);

/// Writes every table plus <name>.json into `dir`, creating it if needed.
std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& dir);

struct ScenarioInfo {
  ScenarioKind kind;
  std::string_view summary;
  std::string_view columns;
};

std::span<const ScenarioInfo> scenario_catalog();

}  // namespace qfall::cli
