#include "qfall/composite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qfall/errors.hpp"

namespace qfall {
namespace {

constexpr double kAmplitudeNormTolerance = 1e-10;
constexpr double kEchoRegimeLimit = 0.1;

void require_beta(double beta, const char* context) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidArgument(std::string(context) + ": beta must be positive and finite");
  }
}

long cells_for(double delta_x, const Grid1D& grid) {
  const long cells = std::lround(std::abs(delta_x) / grid.dx());
  return std::max(cells, 1L);
}

}  // namespace

InternalSpectrum::InternalSpectrum(RealVector omega, double base_mass)
    : omega_(std::move(omega)), base_mass_(base_mass) {
  if (!(base_mass_ > 0.0) || !std::isfinite(base_mass_)) {
    throw InvalidArgument("InternalSpectrum: base mass must be positive");
  }
  if (omega_.empty() || omega_.front() != 0.0) {
    throw InvalidArgument("InternalSpectrum: the ground level must have omega_0 = 0");
  }
  for (std::size_t n = 1; n < omega_.size(); ++n) {
    if (!(omega_[n] >= omega_[n - 1]) || !std::isfinite(omega_[n])) {
      throw InvalidArgument("InternalSpectrum: excitation energies must be finite and non-decreasing");
    }
  }
  if (omega_.back() / base_mass_ >= kMaxExcitationRatio) {
    throw InvalidArgument("InternalSpectrum: omega_max / m0 = " + std::to_string(omega_.back() / base_mass_) +
                          " is not below " + std::to_string(kMaxExcitationRatio));
  }
}

InternalSpectrum two_level_spectrum(double omega1, double base_mass) {
  if (!(omega1 > 0.0)) throw InvalidArgument("two_level_spectrum: omega1 must be positive");
  return InternalSpectrum({0.0, omega1}, base_mass);
}

InternalSpectrum harmonic_spectrum(double omega_bar, std::size_t levels, double base_mass) {
  if (!(omega_bar > 0.0) || levels < 1) {
    throw InvalidArgument("harmonic_spectrum: need omega_bar > 0 and at least one level");
  }
  RealVector omega(levels);
  for (std::size_t n = 0; n < levels; ++n) omega[n] = static_cast<double>(n) * omega_bar;
  return InternalSpectrum(std::move(omega), base_mass);
}

InternalSpectrum explicit_spectrum(RealVector omega, double base_mass) {
  return InternalSpectrum(std::move(omega), base_mass);
}

RealVector thermal_weights(const InternalSpectrum& spectrum, double beta) {
  require_beta(beta, "thermal_weights");
  RealVector w(spectrum.levels());
  double z = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    w[n] = std::exp(-beta * spectrum.omega()[n]);
    z += w[n];
  }
  for (double& v : w) v /= z;
  return w;
}

Complex partition_function(const InternalSpectrum& spectrum, Complex beta) {
  Complex z{0.0, 0.0};
  for (double omega : spectrum.omega()) z += std::exp(-beta * omega);
  return z;
}

Thermodynamics mean_energy_and_heat_capacity(const InternalSpectrum& spectrum, double beta) {
  const RealVector w = thermal_weights(spectrum, beta);
  Thermodynamics out;
  for (std::size_t n = 0; n < w.size(); ++n) out.mean_energy += w[n] * spectrum.omega()[n];
  double variance = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    const double d = spectrum.omega()[n] - out.mean_energy;
    variance += w[n] * d * d;
  }
  out.heat_capacity = beta * beta * variance;
  return out;
}

CompositeState::CompositeState(InternalSpectrum spectrum, std::vector<Complex> amplitudes,
                               std::vector<WaveFunction> branches)
    : spectrum_(std::move(spectrum)), amplitudes_(std::move(amplitudes)), branches_(std::move(branches)) {
  const std::size_t levels = spectrum_.levels();
  if (amplitudes_.size() != levels || branches_.size() != levels) {
    throw InvalidArgument("CompositeState: need one amplitude and one branch per internal level");
  }
  double norm = 0.0;
  for (const Complex& c : amplitudes_) norm += std::norm(c);
  if (std::abs(norm - 1.0) > kAmplitudeNormTolerance) {
    throw InvalidArgument("CompositeState: sum |c_n|^2 = " + std::to_string(norm) + ", expected 1");
  }
  for (std::size_t n = 0; n < levels; ++n) {
    if (!(branches_[n].grid() == branches_.front().grid())) {
      throw InvalidArgument("CompositeState: branches live on different grids");
    }
    const double expected = spectrum_.branch_mass(n);
    if (std::abs(branches_[n].mass() - expected) > 1e-12 * expected) {
      throw InvalidArgument("CompositeState: branch " + std::to_string(n) + " has mass " +
                            std::to_string(branches_[n].mass()) + ", expected m0 + omega_n = " +
                            std::to_string(expected));
    }
    require_normalized(branches_[n], "CompositeState");
  }
}

CompositeState CompositeState::factorized(const InternalSpectrum& spectrum, std::vector<Complex> amplitudes,
                                          const WaveFunction& psi0) {
  std::vector<WaveFunction> branches;
  branches.reserve(spectrum.levels());
  for (std::size_t n = 0; n < spectrum.levels(); ++n) branches.push_back(psi0.with_mass(spectrum.branch_mass(n)));
  return CompositeState(spectrum, std::move(amplitudes), std::move(branches));
}

CompositeState CompositeState::thermal(const InternalSpectrum& spectrum, double beta, const WaveFunction& psi0) {
  const RealVector w = thermal_weights(spectrum, beta);
  std::vector<Complex> c(w.size());
  std::transform(w.begin(), w.end(), c.begin(), [](double v) { return Complex{std::sqrt(v), 0.0}; });
  return factorized(spectrum, std::move(c), psi0);
}

RealVector CompositeState::weights() const {
  RealVector w(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), w.begin(), [](const Complex& c) { return std::norm(c); });
  return w;
}

bool CompositeState::is_factorized(double tolerance) const {
  const auto reference = branches_.front().amplitudes();
  for (const WaveFunction& b : branches_) {
    const auto a = b.amplitudes();
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (std::abs(a[k] - reference[k]) > tolerance) return false;
    }
  }
  return true;
}

CompositeState composite_evolve(const CompositeState& state, const EvolutionParams& params) {
  std::vector<WaveFunction> evolved;
  evolved.reserve(state.branches().size());
  for (const WaveFunction& branch : state.branches()) evolved.push_back(gravity_evolve(branch, params));
  return CompositeState(state.spectrum(), state.amplitudes(), std::move(evolved));
}

Eigen::MatrixXcd reduced_translational(const CompositeState& state) {
  const std::size_t n = state.grid().size();
  if (n > kMaxDenseSize) {
    throw MemoryGuardError("reduced_translational: " + std::to_string(n) + "x" + std::to_string(n) +
                           " matrix exceeds the " + std::to_string(kMaxDenseSize) + " point limit");
  }
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(size, size);
  const RealVector w = state.weights();
  for (std::size_t b = 0; b < w.size(); ++b) {
    const ComplexVector& values = state.branches()[b].values();
    const Eigen::Map<const Eigen::VectorXcd> psi(values.data(), size);
    rho.noalias() += w[b] * (psi * psi.adjoint());
  }
  return rho;
}

RealVector reduced_position_density(const CompositeState& state) {
  RealVector rho(state.grid().size(), 0.0);
  const RealVector w = state.weights();
  for (std::size_t b = 0; b < w.size(); ++b) {
    const auto a = state.branches()[b].amplitudes();
    for (std::size_t k = 0; k < rho.size(); ++k) rho[k] += w[b] * std::norm(a[k]);
  }
  return rho;
}

double reduced_purity(const CompositeState& state) {
  const RealVector w = state.weights();
  double purity = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    purity += w[i] * w[i];
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      purity += 2.0 * w[i] * w[j] * std::norm(inner_product(state.branches()[i], state.branches()[j]));
    }
  }
  return purity;
}

Complex normalized_coherence(const CompositeState& state, std::size_t a, std::size_t b) {
  const std::size_t n = state.grid().size();
  if (a >= n || b >= n) throw InvalidArgument("normalized_coherence: index outside the grid");
  const RealVector w = state.weights();
  Complex off{0.0, 0.0};
  double diag_a = 0.0;
  double diag_b = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto psi = state.branches()[i].amplitudes();
    off += w[i] * psi[a] * std::conj(psi[b]);
    diag_a += w[i] * std::norm(psi[a]);
    diag_b += w[i] * std::norm(psi[b]);
  }
  const double denom = std::sqrt(diag_a * diag_b);
  if (!(denom > 0.0)) throw InvalidArgument("normalized_coherence: density vanishes at the probe points");
  return off / denom;
}

double visibility(const CompositeState& state, double delta_x) {
  const Grid1D& grid = state.grid();
  const RealVector rho = reduced_position_density(state);
  double mass = 0.0;
  double first = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    mass += rho[k];
    first += rho[k] * grid.x(k);
  }
  const double mean = first / mass;
  const long cells = cells_for(delta_x, grid);
  const long a = std::lround((mean - grid.x_min()) / grid.dx() - 0.5 * static_cast<double>(cells));
  const long b = a + cells;
  if (a < 0 || b >= static_cast<long>(grid.size())) {
    throw InvalidArgument("visibility: probe separation " + std::to_string(delta_x) + " does not fit on the grid");
  }
  return std::abs(normalized_coherence(state, static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
}

Complex gamma_exact(const RealVector& weights, const InternalSpectrum& spectrum, double g, double t,
                    double delta_x) {
  if (weights.size() != spectrum.levels()) throw InvalidArgument("gamma_exact: one weight per level required");
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0) > kAmplitudeNormTolerance) {
    throw InvalidArgument("gamma_exact: weights sum to " + std::to_string(total) + ", expected 1");
  }
  Complex gamma{0.0, 0.0};
  for (std::size_t n = 0; n < weights.size(); ++n) {
    gamma += weights[n] * std::polar(1.0, -spectrum.omega()[n] * t * g * delta_x);
  }
  return gamma;
}

Complex gamma_thermal(const InternalSpectrum& spectrum, double beta, double g, double t, double delta_x) {
  require_beta(beta, "gamma_thermal");
  return partition_function(spectrum, Complex{beta, g * t * delta_x}) / partition_function(spectrum, beta);
}

double gaussian_expansion_parameter(double beta, double g, double t, double delta_x) {
  require_beta(beta, "gaussian_expansion_parameter");
  return std::abs(g * t * delta_x / beta);
}

double gamma_gaussian(const InternalSpectrum& spectrum, double beta, double g, double t, double delta_x) {
  const double c_v = mean_energy_and_heat_capacity(spectrum, beta).heat_capacity;
  const double u = gaussian_expansion_parameter(beta, g, t, delta_x);
  return std::exp(-0.5 * c_v * u * u);
}

double dephasing_time(double beta, double g, double delta_x, double heat_capacity) {
  require_beta(beta, "dephasing_time");
  if (heat_capacity < 0.0) throw InvalidArgument("dephasing_time: heat capacity must be non-negative");
  if (heat_capacity == 0.0 || g == 0.0 || delta_x == 0.0) return std::numeric_limits<double>::infinity();
  return beta / (std::abs(g * delta_x) * std::sqrt(heat_capacity));
}

RegimeReport regime_check(const InternalSpectrum& spectrum, double sigma_x0, double t) {
  if (!(sigma_x0 > 0.0) || !(t >= 0.0)) throw InvalidArgument("regime_check: need sigma_x0 > 0 and t >= 0");
  const double m0 = spectrum.base_mass();
  RegimeReport report;
  for (std::size_t n = 1; n < spectrum.levels(); ++n) {
    const double omega = spectrum.omega()[n];
    if (omega <= 0.0) continue;
    const double mn = spectrum.branch_mass(n);
    RegimeRow row;
    row.level = n;
    row.omega = omega;
    row.delta_exact = t / (2.0 * sigma_x0) * std::sqrt(1.0 / (m0 * m0) - 1.0 / (mn * mn));
    row.delta_expanded = t * std::sqrt(omega / (2.0 * m0 * m0 * m0)) / sigma_x0;
    report.rows.push_back(row);
    report.margin = std::max(report.margin, t / (std::sqrt(m0 / omega) * m0 * sigma_x0 * sigma_x0));
  }
  return report;
}

DephasingReport dephasing_report(const InternalSpectrum& spectrum, double beta, double g, double t,
                                 double delta_x, double sigma_x0) {
  DephasingReport report;
  report.gamma = gamma_thermal(spectrum, beta, g, t, delta_x);
  report.visibility = std::abs(report.gamma);
  report.delta_x = delta_x;
  report.tau_d = dephasing_time(beta, g, delta_x, mean_energy_and_heat_capacity(spectrum, beta).heat_capacity);
  report.regime_margin = regime_check(spectrum, sigma_x0, t).margin;
  report.expansion_parameter = gaussian_expansion_parameter(beta, g, t, delta_x);
  return report;
}

EchoResult echo_protocol(const CompositeState& initial, double g, double T, double delta_x) {
  if (!initial.is_factorized()) throw InvalidArgument("echo_protocol: initial state must be factorized");
  if (!(T >= 0.0)) throw InvalidArgument("echo_protocol: T must be non-negative");

  const WaveFunction& psi0 = initial.branches().front();
  const double sigma = std::sqrt(dispersion(psi0));
  const double margin = regime_check(initial.spectrum(), sigma, 2.0 * T).margin;
  if (margin >= kEchoRegimeLimit) {
    throw InvalidArgument("echo_protocol: regime margin " + std::to_string(margin) + " at 2T is not below " +
                          std::to_string(kEchoRegimeLimit));
  }

  const CompositeState at_T = composite_evolve(initial, {g, T, 1.0, false});
  CompositeState at_2T = composite_evolve(at_T, {-g, T, 1.0, false});

  EchoResult result{at_T, std::move(at_2T)};
  result.delta_x = static_cast<double>(cells_for(delta_x, initial.grid())) * initial.grid().dx();
  result.visibility_before = visibility(initial, delta_x);
  result.visibility_mid = visibility(result.at_T, delta_x);
  result.visibility_after = visibility(result.at_2T, delta_x);
  result.purity_before = reduced_purity(initial);
  result.purity_mid = reduced_purity(result.at_T);
  result.purity_after = reduced_purity(result.at_2T);
  return result;
}

}  // namespace qfall
