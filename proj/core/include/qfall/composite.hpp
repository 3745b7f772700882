#pragma once

// Composite particles: a ladder of internal levels whose branch n carries mass
// m0 + omega_n. Joint evolution, partial traces, the dephasing factor Gamma in
// its exact, thermal and Gaussian forms, and the field-inversion echo.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "qfall/dynamics.hpp"
#include "qfall/states.hpp"

namespace qfall {

/// Excitation energies omega_0 = 0 <= omega_1 <= ... above the ground mass m0.
class InternalSpectrum {
 public:
  /// Throws InvalidArgument unless omega[0] == 0, omega is non-decreasing,
  /// m0 > 0 and omega_max / m0 < kMaxExcitationRatio.
  InternalSpectrum(RealVector omega, double base_mass);

  const RealVector& omega() const noexcept { return omega_; }
  double base_mass() const noexcept { return base_mass_; }
  std::size_t levels() const noexcept { return omega_.size(); }
  double branch_mass(std::size_t n) const { return base_mass_ + omega_.at(n); }

 private:
  RealVector omega_;
  double base_mass_;
};

inline constexpr double kMaxExcitationRatio = 0.01;

InternalSpectrum two_level_spectrum(double omega1, double base_mass);
/// omega_n = n * omega_bar for n < levels.
InternalSpectrum harmonic_spectrum(double omega_bar, std::size_t levels, double base_mass);
InternalSpectrum explicit_spectrum(RealVector omega, double base_mass);

/// e^{-beta omega_n} / Z(beta).
RealVector thermal_weights(const InternalSpectrum& spectrum, double beta);

/// Z(beta) = sum_n e^{-beta omega_n} for complex beta.
Complex partition_function(const InternalSpectrum& spectrum, Complex beta);

struct Thermodynamics {
  double mean_energy = 0.0;
  double heat_capacity = 0.0;  ///< beta^2 (<E^2> - <E>^2)
};

Thermodynamics mean_energy_and_heat_capacity(const InternalSpectrum& spectrum, double beta);

/// sum_n c_n |psi_n> (x) |n>, branch n of mass m0 + omega_n.
class CompositeState {
 public:
  /// Throws InvalidArgument unless sizes agree, sum |c_n|^2 = 1 to 1e-10, the
  /// branches share one grid and branch n has mass m0 + omega_n.
  CompositeState(InternalSpectrum spectrum, std::vector<Complex> amplitudes, std::vector<WaveFunction> branches);

  /// |psi0> (x) sum_n c_n |n>: every branch is psi0 relabelled with its mass.
  static CompositeState factorized(const InternalSpectrum& spectrum, std::vector<Complex> amplitudes,
                                   const WaveFunction& psi0);

  /// Factorized state with c_n = sqrt(thermal weight).
  static CompositeState thermal(const InternalSpectrum& spectrum, double beta, const WaveFunction& psi0);

  const InternalSpectrum& spectrum() const noexcept { return spectrum_; }
  const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
  const std::vector<WaveFunction>& branches() const noexcept { return branches_; }
  const Grid1D& grid() const noexcept { return branches_.front().grid(); }
  RealVector weights() const;

  /// True when all branches carry the same amplitudes to `tolerance`.
  bool is_factorized(double tolerance = 1e-12) const;

 private:
  InternalSpectrum spectrum_;
  std::vector<Complex> amplitudes_;
  std::vector<WaveFunction> branches_;
};

/// Branch-wise gravity_evolve with the branch mass; c_n unchanged.
CompositeState composite_evolve(const CompositeState& state, const EvolutionParams& params);

/// Largest grid for which the dense reduced matrix is built.
inline constexpr std::size_t kMaxDenseSize = 4096;

/// rho(x, x') = sum_n |c_n|^2 psi_n(x) psi_n*(x'), as a dense matrix of
/// point values (trace = sum rho_kk dx). MemoryGuardError above kMaxDenseSize.
Eigen::MatrixXcd reduced_translational(const CompositeState& state);

/// sum_n |c_n|^2 |psi_n(x)|^2.
RealVector reduced_position_density(const CompositeState& state);

/// Tr rho^2 = sum_nm w_n w_m |<psi_n|psi_m>|^2, without forming rho.
double reduced_purity(const CompositeState& state);

/// rho(x_a, x_b) / sqrt(rho(x_a, x_a) rho(x_b, x_b)) at lattice indices a, b.
Complex normalized_coherence(const CompositeState& state, std::size_t a, std::size_t b);

/// sum_n w_n e^{-i omega_n g t dx}.
Complex gamma_exact(const RealVector& weights, const InternalSpectrum& spectrum, double g, double t,
                    double delta_x);

/// Z(beta + i g t dx) / Z(beta).
Complex gamma_thermal(const InternalSpectrum& spectrum, double beta, double g, double t, double delta_x);

/// exp(-C_v (g t dx / beta)^2 / 2). Evaluated for any argument; check
/// gaussian_expansion_parameter against kGaussianValidityWarning to know
/// whether it can be trusted.
double gamma_gaussian(const InternalSpectrum& spectrum, double beta, double g, double t, double delta_x);

/// |g t dx / beta|.
double gaussian_expansion_parameter(double beta, double g, double t, double delta_x);

inline constexpr double kGaussianValidityWarning = 0.3;

/// beta / (g |dx| sqrt(C_v)); +infinity when C_v = 0.
double dephasing_time(double beta, double g, double delta_x, double heat_capacity);

struct RegimeRow {
  std::size_t level = 0;
  double omega = 0.0;
  double delta_exact = 0.0;     ///< t/(2 sigma) sqrt(m0^-2 - m_n^-2)
  double delta_expanded = 0.0;  ///< t sqrt(omega_n / (2 m0^3)) / sigma
};

struct RegimeReport {
  /// max_n t / (sqrt(m0/omega_n) m0 sigma^2); 0 when no level is excited.
  double margin = 0.0;
  std::vector<RegimeRow> rows;
};

RegimeReport regime_check(const InternalSpectrum& spectrum, double sigma_x0, double t);

struct DephasingReport {
  Complex gamma{1.0, 0.0};
  double visibility = 1.0;
  double delta_x = 0.0;
  double tau_d = 0.0;
  double regime_margin = 0.0;
  double expansion_parameter = 0.0;
};

DephasingReport dephasing_report(const InternalSpectrum& spectrum, double beta, double g, double t,
                                 double delta_x, double sigma_x0);

struct EchoResult {
  CompositeState at_T;
  CompositeState at_2T;
  /// Separation actually used (nearest whole number of cells).
  double delta_x = 0.0;
  double visibility_before = 1.0;
  double visibility_mid = 1.0;
  double visibility_after = 1.0;
  double purity_before = 1.0;
  double purity_mid = 1.0;
  double purity_after = 1.0;
};

/// Evolve a factorized state for T under +g, then for T under -g. Visibility is
/// the normalized coherence at separation delta_x around the mean position.
/// Throws InvalidArgument for non-factorized input or when regime_check at 2T
/// gives a margin of 0.1 or more.
EchoResult echo_protocol(const CompositeState& initial, double g, double T, double delta_x);

/// Visibility at separation delta_x around the mean of the reduced density.
double visibility(const CompositeState& state, double delta_x);

}  // namespace qfall
