#pragma once

// The internal two-level (qubit) state of a falling particle: the visibility
// integral zeta, the gravitational phase phi_g and its classical proper-time
// counterpart.

#include <Eigen/Dense>

#include "qfall/composite.hpp"
#include "qfall/states.hpp"
#include "qfall/units.hpp"

namespace qfall {

/// zeta = Int dx |psi(x)|^2 e^{-i omega g t x}, for the freely evolved state.
/// Throws UndersamplingError when the ramp wavelength 2 pi/(omega g t) is
/// shorter than four cells.
Complex zeta(const WaveFunction& psi_free_t, double omega, double g, double t);

/// 2x2 reduced internal state with the parameters it was built for.
struct QubitState {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Identity() * 0.5;
  double omega = 0.0;
  double g = 0.0;
  double t = 0.0;

  Complex coherence() const { return rho(0, 1); }
  double phase() const { return std::arg(rho(0, 1)); }
  double magnitude() const { return std::abs(rho(0, 1)); }

  /// Hermitian to 1e-12, trace 1 to 1e-12, eigenvalues >= -1e-12.
  bool is_physical() const;
};

/// rho_01 = c0 c1* e^{i omega t - i omega g^2 t^3/3} zeta. The composite
/// pipeline (qubit_from_composite) produces this with conj(zeta) in place of
/// zeta; the two agree whenever zeta is real.
QubitState qubit_reduced(Complex c0, Complex c1, double omega, double g, double t, Complex zeta_value);

/// rho_ij = c_i c_j* <psi_j|psi_i> for a two-level composite state.
QubitState qubit_from_composite(const CompositeState& state, double g, double t);

/// omega g^2 t_d^3 / 3 (divided by c^2 in SI).
double phase_shift_t(double omega, double g, double t_d, UnitMode mode = UnitMode::natural);

/// (2 sqrt 2 / 3) omega g^{1/2} L^{3/2}, i.e. phase_shift_t at t_d = sqrt(2L/g).
double phase_shift(double omega, double g, double L, UnitMode mode = UnitMode::natural);

/// phi_g / (omega t_d) = 2 g L / 3 (divided by c^2 in SI).
double relative_shift(double g, double L, UnitMode mode = UnitMode::natural);

/// b = omega g sqrt(2L/g) sigma_x (divided by c^2 in SI).
double b_parameter(double omega, double g, double L, double sigma_x, UnitMode mode = UnitMode::natural);

/// (b / phi_g) / (sigma_x / L); identically 3/2.
double b_ratio(double omega, double g, double L, double sigma_x, UnitMode mode = UnitMode::natural);

/// A sampled worldline. positions are measured downward from the release
/// point at radius R (free fall: x = g s^2 / 2). gm is G M.
struct PathSample {
  RealVector times;
  RealVector positions;
  double gm = 0.0;
  double radius = 1.0;
};

struct ProperTime {
  double tau = 0.0;
  double tau_static = 0.0;  ///< (1 - GM/R) t, the static observer at R
  double term_grav = 0.0;   ///< g Int x ds
  double term_sr = 0.0;     ///< (1/2) Int xdot^2 ds
};

/// tau = (1 - GM/R) t - g Int x ds - (1/2) Int xdot^2 ds, with composite
/// Simpson quadrature and three-point velocities (both exact for quadratic
/// paths). Throws InvalidArgument for non-increasing times, fewer than three
/// samples, GM/R >= 1e-3 or |xdot| >= 1e-2 (in units of c).
ProperTime proper_time(const PathSample& path, double g_local, UnitMode mode = UnitMode::natural);

/// omega (tau_static - tau).
double classical_phase(double omega, const PathSample& path, double g_local, UnitMode mode = UnitMode::natural);

/// Free-fall path x = g s^2/2 on `samples` uniform times in [0, t].
PathSample free_fall_path(double g, double t, std::size_t samples, double gm = 0.0, double radius = 1.0);

/// e^{-(i/2) g omega (v1 + v2) t^2} cos[(1/2) g omega t (ell + (v1 - v2) t)]
/// for two non-overlapping packets at +-ell/2 with velocities v1, v2.
Complex cat_zeta(double omega, double g, double t, double ell, double v1, double v2);

}  // namespace qfall
