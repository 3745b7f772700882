#include "qfall/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qfall/errors.hpp"

namespace qfall {
namespace {

void require_params(const EvolutionParams& params, const char* context) {
  if (!(params.t >= 0.0) || !std::isfinite(params.t)) {
    throw InvalidArgument(std::string(context) + ": t must be finite and non-negative");
  }
  if (!(params.mass_ratio > 0.0)) throw InvalidArgument(std::string(context) + ": mass ratio must be positive");
  if (!std::isfinite(params.g)) throw InvalidArgument(std::string(context) + ": g must be finite");
}

double mean_velocity(const WaveFunction& psi) {
  const VelocityWaveFunction phi = velocity_wavefunction(psi);
  double s = 0.0;
  for (std::size_t j = 0; j < phi.v.size(); ++j) s += phi.v[j] * std::norm(phi.phi[j]);
  return s * phi.dv;
}

double max_density_difference(const WaveFunction& a, std::span<const Complex> b) {
  double worst = 0.0;
  const auto av = a.amplitudes();
  for (std::size_t k = 0; k < av.size(); ++k) worst = std::max(worst, std::abs(std::norm(av[k]) - std::norm(b[k])));
  return worst;
}

std::vector<MomentRow> central_moment_table(const WaveFunction& reference, const WaveFunction& observed) {
  std::vector<MomentRow> rows;
  const double width = std::sqrt(std::max(central_moment(reference, 2), 0.0));
  for (int order = 2; order <= 4; ++order) {
    MomentRow row;
    row.order = order;
    row.reference = central_moment(reference, order);
    row.observed = central_moment(observed, order);
    const double scale = std::max(std::abs(row.reference), std::pow(width, order));
    row.mismatch = std::abs(row.observed - row.reference) / (scale > 0.0 ? scale : 1.0);
    rows.push_back(row);
  }
  return rows;
}

// The momentum density after a kick e^{i q x} is the old one moved by q; it
// must stay clear of the outer band of the momentum lattice.
void check_kick(const WaveFunction& psi, double kick, const char* context) {
  if (kick == 0.0) return;
  const Grid1D& grid = psi.grid();
  const ComplexVector spectrum = dft_forward(psi.amplitudes(), grid);
  const double band = std::ceil(0.5 * kBoundaryFraction * static_cast<double>(grid.size())) * grid.dp();
  double outside = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double p = grid.p(j) + kick;
    if (p < grid.p_min() + band || p > grid.p_max() - band) outside += std::norm(spectrum[j]);
  }
  outside *= grid.dp();
  if (outside > kLeakageThreshold) {
    throw AliasingError(std::string(context) + ": momentum kick " + std::to_string(kick) + " pushes probability " +
                        std::to_string(outside) + " past the momentum band (p_max = " +
                        std::to_string(grid.p_max()) + ")");
  }
}

}  // namespace

WaveFunction free_evolve(const WaveFunction& psi0, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("free_evolve: t must be finite and non-negative");
  require_normalized(psi0, "free_evolve");
  if (t == 0.0) return psi0;

  const Grid1D& grid = psi0.grid();
  const double m = psi0.mass();
  ComplexVector spectrum = dft_forward(psi0.amplitudes(), grid);
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double p = grid.p(j);
    spectrum[j] *= std::polar(1.0, -(m + p * p / (2.0 * m)) * t);
  }
  ComplexVector out = dft_inverse(spectrum, grid);
  check_leakage(out, grid, "free_evolve");
  return WaveFunction(grid, std::move(out), m);
}

WaveFunction gravity_evolve(const WaveFunction& psi0, const EvolutionParams& params) {
  require_params(params, "gravity_evolve");
  const Grid1D& grid = psi0.grid();
  const double m = psi0.mass();
  const double g = params.effective_g();
  const double t = params.t;
  const double drop = 0.5 * g * t * t;
  if (params.exactness_required && !is_grid_aligned(drop, grid.dx())) {
    throw InvalidArgument("gravity_evolve: g t^2/2 = " + std::to_string(drop) +
                          " is not a whole number of cells (dx = " + std::to_string(grid.dx()) + ")");
  }

  check_kick(psi0, -m * g * t, "gravity_evolve");
  const WaveFunction free = free_evolve(psi0, t);
  ComplexVector out = translate(free.amplitudes(), grid, -drop);
  const double global = -m * g * g * t * t * t / 6.0;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::polar(1.0, -m * g * t * grid.x(k) + global);
  check_leakage(out, grid, "gravity_evolve");
  return WaveFunction(grid, std::move(out), m);
}

WaveFunction weyl_translate(const WaveFunction& psi, double a, double b) {
  const Grid1D& grid = psi.grid();
  check_kick(psi, a, "weyl_translate");
  ComplexVector out = translate(psi.amplitudes(), grid, b);
  const double global = -0.5 * a * b;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::polar(1.0, a * grid.x(k) + global);
  check_leakage(out, grid, "weyl_translate");
  return WaveFunction(grid, std::move(out), psi.mass());
}

WaveFunction gravity_via_weyl(const WaveFunction& psi0, const EvolutionParams& params) {
  require_params(params, "gravity_via_weyl");
  const double m = psi0.mass();
  const double g = params.effective_g();
  const double t = params.t;
  const WaveFunction moved = weyl_translate(free_evolve(psi0, t), -m * g * t, -0.5 * g * t * t);
  const Complex prefactor = std::polar(1.0, m * g * g * t * t * t / 3.0);
  ComplexVector out(moved.values());
  for (Complex& a : out) a *= prefactor;
  return WaveFunction(psi0.grid(), std::move(out), m);
}

double weyl_phase_offset(double mass, const EvolutionParams& params) {
  const double g = params.effective_g();
  return mass * g * g * params.t * params.t * params.t / 4.0;
}

Complex energy_eigenfunction_p(double energy, double p, double mass, double g) {
  if (!(g > 0.0)) throw InvalidArgument("energy_eigenfunction_p: g must be positive");
  if (!(mass > 0.0)) throw InvalidArgument("energy_eigenfunction_p: mass must be positive");
  const double mg = mass * g;
  const double phase = -(energy * p - p * p * p / (6.0 * mass)) / mg;
  return std::polar(1.0 / std::sqrt(2.0 * std::numbers::pi * mg), phase);
}

Complex energy_overlap(double e1, double e2, double mass, double g, double p_half_width, std::size_t samples) {
  if (!(p_half_width > 0.0) || samples < 2) {
    throw InvalidArgument("energy_overlap: need a positive window and at least two samples");
  }
  const double h = 2.0 * p_half_width / static_cast<double>(samples);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < samples; ++i) {
    const double p = -p_half_width + (static_cast<double>(i) + 0.5) * h;
    const double c = std::cos(0.5 * std::numbers::pi * p / p_half_width);
    acc += c * c * std::conj(energy_eigenfunction_p(e1, p, mass, g)) * energy_eigenfunction_p(e2, p, mass, g);
  }
  return acc * h;
}

WaveFunction split_step_evolve(const WaveFunction& psi0, double kappa, double t, std::size_t n_steps) {
  if (n_steps < 1) throw InvalidArgument("split_step_evolve: n_steps must be >= 1");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("split_step_evolve: t must be finite and non-negative");
  require_normalized(psi0, "split_step_evolve");
  check_kick(psi0, -kappa * t, "split_step_evolve");

  const Grid1D& grid = psi0.grid();
  const std::size_t n = grid.size();
  const double m = psi0.mass();
  const double dt = t / static_cast<double>(n_steps);

  ComplexVector half_kick(n), full_kick(n), drift(n);
  for (std::size_t k = 0; k < n; ++k) {
    half_kick[k] = std::polar(1.0, -0.5 * kappa * grid.x(k) * dt);
    full_kick[k] = half_kick[k] * half_kick[k];
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double p = grid.p(j);
    drift[j] = std::polar(1.0, -(m + p * p / (2.0 * m)) * dt);
  }

  ComplexVector psi(psi0.values());
  for (std::size_t k = 0; k < n; ++k) psi[k] *= half_kick[k];
  for (std::size_t step = 0; step < n_steps; ++step) {
    ComplexVector spectrum = dft_forward(psi, grid);
    for (std::size_t j = 0; j < n; ++j) spectrum[j] *= drift[j];
    psi = dft_inverse(spectrum, grid);
    const ComplexVector& kick = (step + 1 == n_steps) ? half_kick : full_kick;
    for (std::size_t k = 0; k < n; ++k) psi[k] *= kick[k];
  }
  check_leakage(psi, grid, "split_step_evolve");
  return WaveFunction(grid, std::move(psi), m);
}

EPReport check_version_a(const WaveFunction& psi0, const EvolutionParams& params, double tolerance) {
  require_params(params, "check_version_a");
  const Grid1D& grid = psi0.grid();
  const double nominal = 0.5 * params.g * params.t * params.t;
  if (!is_grid_aligned(nominal, grid.dx())) {
    throw InvalidArgument("check_version_a: g t^2/2 = " + std::to_string(nominal) +
                          " must be a whole number of cells (dx = " + std::to_string(grid.dx()) + ")");
  }

  const WaveFunction free = free_evolve(psi0, params.t);
  const WaveFunction fallen = gravity_evolve(psi0, params);
  // |psi_free(x + shift)|^2 sampled on the lattice.
  const ComplexVector shifted = shift_cells(free.amplitudes(), -std::lround(nominal / grid.dx()));

  EPReport report;
  report.tolerance = tolerance;
  report.shift_applied = nominal;
  report.max_density_mismatch = max_density_difference(fallen, shifted);
  report.measured_shift = moment(free, 1) - moment(fallen, 1);
  report.moment_table = central_moment_table(free, fallen);

  const double shift_scale = std::max(std::abs(nominal), grid.dx());
  report.ep_violation = std::abs(report.measured_shift - nominal) > kMomentTolerance * shift_scale;
  const bool moments_ok = std::all_of(report.moment_table.begin(), report.moment_table.end(),
                                      [](const MomentRow& r) { return r.mismatch <= kMomentTolerance; });
  report.passed = report.max_density_mismatch <= tolerance && moments_ok && !report.ep_violation;
  return report;
}

EPReport check_version_b(const WaveFunction& psi1, double mass2, const EvolutionParams& params, double tolerance) {
  require_params(params, "check_version_b");
  const WaveFunction psi2 = rebase_mass(psi1, mass2);

  EvolutionParams obeying = params;
  obeying.mass_ratio = 1.0;
  const WaveFunction out1 = gravity_evolve(psi1, obeying);
  const WaveFunction out2 = gravity_evolve(psi2, params);

  const WignerMap w1 = to_velocity(wigner(out1));
  const WignerMap w2 = to_velocity(wigner(out2));

  EPReport report;
  report.tolerance = tolerance;
  report.velocity_wigner_mismatch = std::max(max_abs_difference(w1, w2), max_abs_difference(w2, w1));
  report.max_density_mismatch = max_density_difference(out1, out2.amplitudes());
  report.moment_table = central_moment_table(out1, out2);
  report.velocity_shift_1 = mean_velocity(out1) - mean_velocity(psi1);
  report.velocity_shift_2 = mean_velocity(out2) - mean_velocity(psi2);
  report.measured_shift = -0.5 * report.velocity_shift_2 * params.t;

  try {
    const double r1 = max_abs_difference(w1, liouville_shift(to_velocity(wigner(psi1)), obeying.flow()));
    const double r2 = max_abs_difference(w2, liouville_shift(to_velocity(wigner(psi2)), params.flow()));
    report.flow_residual = std::max(r1, r2);
  } catch (const SupportError&) {
    report.flow_residual = std::numeric_limits<double>::infinity();
  }

  const double kick_scale = std::max(std::abs(params.g * params.t), std::numeric_limits<double>::min());
  report.ep_violation =
      std::abs(report.velocity_shift_1 - report.velocity_shift_2) > kMomentTolerance * kick_scale;
  report.passed = report.velocity_wigner_mismatch <= tolerance && !report.ep_violation;
  return report;
}

}  // namespace qfall
