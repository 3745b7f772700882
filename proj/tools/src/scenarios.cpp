#include "qfall/cli/scenarios.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>

#include "qfall/cli/parallel.hpp"

namespace qfall::cli {

namespace {

constexpr std::array<ScenarioInfo, 7> kCatalog{{
    {ScenarioKind::ep_a, "free fall equals a translated free evolution (densities, moments, optional split-step)",
     "<name>_density.csv: x, density_initial, density_free, density_gravity, density_free_shifted"},
    {ScenarioKind::ep_b, "velocity-space Wigner maps of two masses prepared with the same velocity wavefunction",
     "<name>_moments.csv: order, reference, observed, mismatch"},
    {ScenarioKind::dephase, "thermal dephasing factor of a composite particle over a (t, delta_x) sweep",
     "<name>.csv: t, delta_x, re_gamma, im_gamma, abs_gamma, gaussian_approx"},
    {ScenarioKind::echo, "reversed-field echo on a thermal composite particle",
     "<name>.csv: t, visibility, purity, abs_gamma"},
    {ScenarioKind::qubit_phase, "closed-form qubit phase and its classical proper-time reconstruction",
     "<name>.csv: omega, t_d, phi_g, u, classical_phase, relative_error"},
    {ScenarioKind::wigner, "Wigner map of an evolved state against the classically transported initial map",
     "<name>.csv: x, p (or v), w_initial, w_evolved, w_transported"},
    {ScenarioKind::evolve, "density snapshots under exact, free or split-step evolution",
     "<name>.csv: t, x, density; <name>_moments.csv: t, norm, mean_x, dispersion"},
}};

Check check_at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, "<=", threshold, value <= threshold};
}

Check check_below(std::string name, double value, double threshold) {
  return {std::move(name), value, "<", threshold, value < threshold};
}

Check check_at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, ">=", threshold, value >= threshold};
}

Check check_equal(std::string name, double value, double expected) {
  return {std::move(name), value, "==", expected, value == expected};
}

double max_density_gap(const RealVector& a, const RealVector& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

nlohmann::json moment_rows(const std::vector<MomentRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const MomentRow& r : rows) {
    out.push_back({{"order", r.order}, {"reference", r.reference}, {"observed", r.observed}, {"mismatch", r.mismatch}});
  }
  return out;
}

void run_ep_a(const ScenarioConfig& c, RunReport& report) {
  const Grid1D grid = build_grid(c);
  const WaveFunction psi = build_state(c, grid);
  const EPReport ep = check_version_a(psi, c.evolution, c.tolerance);

  const WaveFunction free = free_evolve(psi, c.evolution.t);
  const WaveFunction fallen = gravity_evolve(psi, c.evolution);
  const long cells = std::lround(ep.shift_applied / grid.dx());
  const WaveFunction shifted(grid, shift_cells(free.amplitudes(), -cells), psi.mass());

  double moment_gap = 0.0;
  for (const MomentRow& r : ep.moment_table) moment_gap = std::max(moment_gap, r.mismatch);
  const double shift_scale = std::max(std::abs(ep.shift_applied), grid.dx());

  report.checks.push_back(check_at_most("density_mismatch", ep.max_density_mismatch, c.tolerance));
  report.checks.push_back(check_at_most("central_moment_mismatch", moment_gap, kMomentTolerance));
  report.checks.push_back(check_at_most("shift_error", std::abs(ep.measured_shift - ep.shift_applied),
                                        kMomentTolerance * shift_scale));

  report.results["shift_applied"] = ep.shift_applied;
  report.results["measured_shift"] = ep.measured_shift;
  report.results["max_density_mismatch"] = ep.max_density_mismatch;
  report.results["moments"] = moment_rows(ep.moment_table);
  report.results["ep_violation"] = ep.ep_violation;

  if (c.split_steps > 0) {
    const double kappa = psi.mass() * c.evolution.g * c.evolution.mass_ratio;
    const WaveFunction split = split_step_evolve(psi, kappa, c.evolution.t, c.split_steps);
    const double gap = max_density_gap(split.density(), fallen.density());
    report.checks.push_back(check_below("split_step_density", gap, c.split_tolerance));
    report.results["split_step_density_mismatch"] = gap;
  }

  CsvTable table{c.name + "_density.csv",
                 {"x", "density_initial", "density_free", "density_gravity", "density_free_shifted"},
                 {}};
  const RealVector d0 = psi.density();
  const RealVector d_free = free.density();
  const RealVector d_fall = fallen.density();
  const RealVector d_shift = shifted.density();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    table.rows.push_back({grid.x(k), d0[k], d_free[k], d_fall[k], d_shift[k]});
  }
  report.tables.push_back(std::move(table));
}

void run_ep_b(const ScenarioConfig& c, RunReport& report) {
  const Grid1D grid = build_grid(c);
  const WaveFunction psi = build_state(c, grid);
  const EPReport ep = check_version_b(psi, c.mass2, c.evolution, c.tolerance);

  // With an injected violation the maps are meant to differ; only detection is checked.
  if (!c.expect_violation) {
    report.checks.push_back(check_at_most("velocity_wigner_mismatch", ep.velocity_wigner_mismatch, c.tolerance));
  }
  report.checks.push_back(
      check_equal("ep_violation_detected", ep.ep_violation ? 1.0 : 0.0, c.expect_violation ? 1.0 : 0.0));

  report.results["velocity_wigner_mismatch"] = ep.velocity_wigner_mismatch;
  report.results["velocity_shift_1"] = ep.velocity_shift_1;
  report.results["velocity_shift_2"] = ep.velocity_shift_2;
  report.results["measured_shift"] = ep.measured_shift;
  report.results["max_density_mismatch"] = ep.max_density_mismatch;
  report.results["flow_residual"] = std::isfinite(ep.flow_residual) ? nlohmann::json(ep.flow_residual) : nullptr;
  report.results["ep_violation"] = ep.ep_violation;
  report.results["moments"] = moment_rows(ep.moment_table);

  CsvTable table{c.name + "_moments.csv", {"order", "reference", "observed", "mismatch"}, {}};
  for (const MomentRow& r : ep.moment_table) {
    table.rows.push_back({static_cast<double>(r.order), r.reference, r.observed, r.mismatch});
  }
  report.tables.push_back(std::move(table));
}

void run_dephase(const ScenarioConfig& c, const RunOptions& options, RunReport& report) {
  const InternalSpectrum spectrum = build_spectrum(c);
  const RealVector weights = thermal_weights(spectrum, c.beta);
  const double g = c.evolution.g;

  struct Point {
    double t = 0.0;
    double delta_x = 0.0;
    Complex gamma;
    double gaussian = 0.0;
    double exact_gap = 0.0;
  };
  const std::size_t n_dx = c.delta_x.size();
  const std::vector<Point> points =
      parallel_map<Point>(c.times.size() * n_dx, options.threads, [&](std::size_t i) {
        Point p{c.times[i / n_dx], c.delta_x[i % n_dx], {}, 0.0, 0.0};
        p.gamma = gamma_thermal(spectrum, c.beta, g, p.t, p.delta_x);
        p.gaussian = gamma_gaussian(spectrum, c.beta, g, p.t, p.delta_x);
        p.exact_gap = std::abs(gamma_exact(weights, spectrum, g, p.t, p.delta_x) - p.gamma);
        return p;
      });

  double largest = 0.0;
  double gap = 0.0;
  CsvTable table{c.name + ".csv", {"t", "delta_x", "re_gamma", "im_gamma", "abs_gamma", "gaussian_approx"}, {}};
  for (const Point& p : points) {
    largest = std::max(largest, std::abs(p.gamma));
    gap = std::max(gap, p.exact_gap);
    table.rows.push_back({p.t, p.delta_x, p.gamma.real(), p.gamma.imag(), std::abs(p.gamma), p.gaussian});
  }
  report.tables.push_back(std::move(table));

  report.checks.push_back(check_at_most("abs_gamma_bound", largest, 1.0 + 1e-12));
  report.checks.push_back(check_at_most("thermal_vs_exact", gap, c.tolerance));

  const Thermodynamics th = mean_energy_and_heat_capacity(spectrum, c.beta);
  report.results["mean_energy"] = th.mean_energy;
  report.results["heat_capacity"] = th.heat_capacity;
  nlohmann::json tau = nlohmann::json::array();
  for (double dx : c.delta_x) {
    const double t_d = dephasing_time(c.beta, g, dx, th.heat_capacity);
    tau.push_back({{"delta_x", dx}, {"tau_d", std::isfinite(t_d) ? nlohmann::json(t_d) : nullptr}});
  }
  report.results["dephasing_time"] = tau;
}

void run_echo(const ScenarioConfig& c, const RunOptions& options, RunReport& report) {
  const Grid1D grid = build_grid(c);
  const WaveFunction psi0 = build_state(c, grid);
  const InternalSpectrum spectrum = build_spectrum(c);
  const CompositeState initial = CompositeState::thermal(spectrum, c.beta, psi0);
  const double g = c.evolution.g;
  const double T = c.evolution.t;
  const EchoResult echo = echo_protocol(initial, g, T, c.echo_delta_x);

  struct Sample {
    double t = 0.0;
    double visibility = 0.0;
    double purity = 0.0;
    double gamma = 0.0;
  };
  const std::size_t n = c.samples;
  const std::vector<Sample> samples = parallel_map<Sample>(n, options.threads, [&](std::size_t i) {
    const double t = 2.0 * T * static_cast<double>(i) / static_cast<double>(n - 1);
    // The reversed leg undoes the first, so the effective field time is 2T - t.
    const bool first_leg = t <= T;
    const CompositeState state =
        first_leg ? composite_evolve(initial, {g, t}) : composite_evolve(echo.at_T, {-g, t - T});
    const double effective = first_leg ? t : 2.0 * T - t;
    return Sample{t, visibility(state, c.echo_delta_x), reduced_purity(state),
                  std::abs(gamma_thermal(spectrum, c.beta, g, effective, echo.delta_x))};
  });

  CsvTable table{c.name + ".csv", {"t", "visibility", "purity", "abs_gamma"}, {}};
  for (const Sample& s : samples) table.rows.push_back({s.t, s.visibility, s.purity, s.gamma});
  report.tables.push_back(std::move(table));

  report.checks.push_back(check_at_least("visibility_after", echo.visibility_after, 1.0 - c.tolerance));
  report.checks.push_back(check_at_least("purity_after", echo.purity_after, 1.0 - c.tolerance));

  report.results["delta_x"] = echo.delta_x;
  report.results["visibility"] = {
      {"before", echo.visibility_before}, {"mid", echo.visibility_mid}, {"after", echo.visibility_after}};
  report.results["purity"] = {{"before", echo.purity_before}, {"mid", echo.purity_mid}, {"after", echo.purity_after}};
}

void run_qubit_phase(const ScenarioConfig& c, RunReport& report) {
  const double g = c.evolution.g;
  const double L = c.drop_height;
  const double t_d = std::sqrt(2.0 * L / g);
  const PathSample path = free_fall_path(g, t_d, c.samples);
  const ProperTime pt = proper_time(path, g, c.units);
  const double term = g * g * t_d * t_d * t_d / 6.0 * inverse_c2(c.units);
  const double term_error = std::max(std::abs(pt.term_grav - term), std::abs(pt.term_sr - term)) / term;

  const double u = relative_shift(g, L, c.units);
  double worst = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  CsvTable table{c.name + ".csv", {"omega", "t_d", "phi_g", "u", "classical_phase", "relative_error"}, {}};
  for (double omega : c.omegas) {
    const double phi = phase_shift(omega, g, L, c.units);
    const double classical = classical_phase(omega, path, g, c.units);
    const double error = std::abs(classical - phi) / phi;
    worst = std::max(worst, error);
    table.rows.push_back({omega, t_d, phi, u, classical, error});
    nlohmann::json row = {{"omega", omega}, {"phi_g", phi}, {"classical_phase", classical}};
    if (c.sigma_x > 0.0) {
      row["b_parameter"] = b_parameter(omega, g, L, c.sigma_x, c.units);
      row["b_ratio"] = b_ratio(omega, g, L, c.sigma_x, c.units);
    }
    rows.push_back(std::move(row));
  }
  report.tables.push_back(std::move(table));

  report.checks.push_back(check_at_most("proper_time_terms", term_error, c.tolerance));
  report.checks.push_back(check_at_most("classical_phase", worst, c.tolerance));

  report.results["units"] = c.units == UnitMode::si ? "si" : "natural";
  report.results["u"] = u;
  report.results["t_d"] = t_d;
  report.results["term_grav"] = pt.term_grav;
  report.results["term_sr"] = pt.term_sr;
  report.results["phases"] = rows;
}

void run_wigner(const ScenarioConfig& c, RunReport& report) {
  const Grid1D grid = build_grid(c);
  const WaveFunction psi = build_state(c, grid);
  const bool velocity = c.axis == AxisChoice::velocity;
  const auto map = [velocity](const WaveFunction& state) {
    return velocity ? to_velocity(wigner(state)) : wigner(state);
  };
  const WignerMap w0 = map(psi);
  const WignerMap evolved = map(gravity_evolve(psi, c.evolution));
  const WignerMap transported = liouville_shift(w0, c.evolution.flow());
  const double mismatch = std::max(max_abs_difference(evolved, transported), max_abs_difference(transported, evolved));

  report.checks.push_back(check_at_most("flow_mismatch", mismatch, c.tolerance));
  report.checks.push_back(check_at_most("normalization", std::abs(w0.total() - 1.0), kNormTolerance));

  report.results["flow_mismatch"] = mismatch;
  report.results["total"] = w0.total();
  report.results["min_value"] = w0.min_value();
  report.results["imag_residue"] = w0.imag_residue;

  CsvTable table{c.name + ".csv", {"x", velocity ? "v" : "p", "w_initial", "w_evolved", "w_transported"}, {}};
  for (std::size_t k = 0; k < grid.size(); k += c.stride) {
    for (std::size_t j = 0; j < w0.n_axis; j += c.stride) {
      table.rows.push_back({grid.x(k), w0.axis_value(j), w0.at(k, j), evolved.at(k, j), transported.at(k, j)});
    }
  }
  report.tables.push_back(std::move(table));
}

void run_evolve(const ScenarioConfig& c, const RunOptions& options, RunReport& report) {
  const Grid1D grid = build_grid(c);
  const WaveFunction psi = build_state(c, grid);
  const std::vector<WaveFunction> states =
      parallel_map<WaveFunction>(c.times.size(), options.threads, [&](std::size_t i) {
        const double t = c.times[i];
        if (t == 0.0) return psi;
        switch (c.method) {
          case EvolveMethod::free:
            return free_evolve(psi, t);
          case EvolveMethod::split_step:
            return split_step_evolve(psi, psi.mass() * c.evolution.g * c.evolution.mass_ratio, t, c.split_steps);
          case EvolveMethod::exact:
            break;
        }
        EvolutionParams p = c.evolution;
        p.t = t;
        return gravity_evolve(psi, p);
      });

  CsvTable densities{c.name + ".csv", {"t", "x", "density"}, {}};
  CsvTable moments{c.name + "_moments.csv", {"t", "norm", "mean_x", "dispersion"}, {}};
  double norm_error = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const RealVector d = states[i].density();
    for (std::size_t k = 0; k < grid.size(); ++k) densities.rows.push_back({c.times[i], grid.x(k), d[k]});
    const double norm = states[i].norm_squared();
    norm_error = std::max(norm_error, std::abs(norm - 1.0));
    moments.rows.push_back({c.times[i], norm, moment(states[i], 1), dispersion(states[i])});
  }
  report.tables.push_back(std::move(densities));
  report.tables.push_back(std::move(moments));
  report.checks.push_back(check_at_most("norm_error", norm_error, c.tolerance));
  report.results["max_norm_error"] = norm_error;
}

}  // namespace

std::span<const ScenarioInfo> scenario_catalog() { return kCatalog; }

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

nlohmann::json RunReport::summary() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const Check& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"value", c.value},
                           {"relation", c.relation},
                           {"threshold", c.threshold},
                           {"passed", c.passed}});
  }
  nlohmann::json files = nlohmann::json::array();
  for (const CsvTable& t : tables) files.push_back(t.file);
  return {{"scenario", scenario_name(kind)}, {"name", name},   {"version", version},  {"config", config},
          {"checks", checks_json},           {"passed", passed()}, {"results", results}, {"files", files}};
}

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.kind = config.kind;
  report.name = config.name;
  report.version = kVersion;
  report.config = config.echo;

  switch (config.kind) {
    case ScenarioKind::ep_a: run_ep_a(config, report); break;
    case ScenarioKind::ep_b: run_ep_b(config, report); break;
    case ScenarioKind::dephase: run_dephase(config, options, report); break;
    case ScenarioKind::echo: run_echo(config, options, report); break;
    case ScenarioKind::qubit_phase: run_qubit_phase(config, report); break;
    case ScenarioKind::wigner: run_wigner(config, report); break;
    case ScenarioKind::evolve: run_evolve(config, options, report); break;
  }

  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const CsvTable& table : report.tables) {
    const std::filesystem::path path = dir / table.file;
    std::ofstream out(path, std::ios::binary);
    write_csv(out, table);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
  }
  const std::filesystem::path json_path = dir / (report.name + ".json");
  std::ofstream out(json_path, std::ios::binary);
  out << report.summary().dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + json_path.string());
  written.push_back(json_path);
  return written;
}

}  // namespace qfall::cli
