#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qfall/qfall.hpp"

namespace qfall::cli {

enum class ScenarioKind { ep_a, ep_b, dephase, echo, qubit_phase, wigner, evolve };

std::string_view scenario_name(ScenarioKind kind) noexcept;

/// Malformed or invalid config. `line` and `column` are 1-based; 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, std::size_t line, std::size_t column, std::string field,
              const std::string& message);

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string field_;
};

struct GridConfig {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n = 0;
};

enum class StateKind { gaussian, cat };

struct StateConfig {
  StateKind kind = StateKind::gaussian;
  std::vector<PacketSpec> packets;  ///< one packet for gaussian
};

enum class SpectrumKind { two_level, harmonic, explicit_levels };

struct SpectrumConfig {
  SpectrumKind kind = SpectrumKind::two_level;
  double omega = 0.0;  ///< omega_1 (two-level) or omega_bar (harmonic)
  std::size_t levels = 2;
  RealVector omegas;   ///< explicit levels, omegas[0] = 0
};

enum class AxisChoice { momentum, velocity };
enum class EvolveMethod { exact, free, split_step };

struct ScenarioConfig {
  std::string source;
  ScenarioKind kind = ScenarioKind::ep_a;
  std::string name;
  UnitMode units = UnitMode::natural;

  GridConfig grid;
  double mass = 1.0;
  StateConfig state;
  EvolutionParams evolution;

  double mass2 = 0.0;          // ep-b
  bool expect_violation = false;

  SpectrumConfig spectrum;     // dephase, echo
  double beta = 1.0;
  RealVector times;            // dephase, evolve
  RealVector delta_x;          // dephase
  double echo_delta_x = 0.0;   // echo
  std::size_t samples = 0;     // echo visibility samples, proper-time path samples

  RealVector omegas;           // qubit-phase
  double drop_height = 0.0;
  double sigma_x = 0.0;        // qubit-phase, optional (0 = absent)

  AxisChoice axis = AxisChoice::momentum;  // wigner
  std::size_t stride = 1;

  EvolveMethod method = EvolveMethod::exact;  // evolve
  std::size_t split_steps = 0;                // ep-a comparison, evolve split-step

  double tolerance = 0.0;
  double split_tolerance = 1e-6;
  std::string output_dir = ".";

  nlohmann::json echo;  ///< the parsed file, for the JSON summary
};

/// Parses and validates; every module precondition the scenario will hit is
/// checked here so `run` only fails on numerical guards.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text, const std::string& source);

/// Library objects built from a validated config.
Grid1D build_grid(const ScenarioConfig& config);
WaveFunction build_state(const ScenarioConfig& config, const Grid1D& grid);
InternalSpectrum build_spectrum(const ScenarioConfig& config);

}  // namespace qfall::cli
