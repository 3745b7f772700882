#pragma once

// Translational quantum states on a Grid1D: Gaussian packets, cat states,
// position moments and the velocity representation.

#include <span>
#include <vector>

#include "qfall/lattice.hpp"

namespace qfall {

/// Tolerance used when an operation requires a normalized input.
inline constexpr double kNormTolerance = 1e-8;

/// Complex amplitudes psi(x_k) on a grid, for a particle of the given mass.
/// The amplitudes are normalized by every constructor in this library;
/// operations that rely on it check |norm^2 - 1| < kNormTolerance.
class WaveFunction {
 public:
  WaveFunction(Grid1D grid, ComplexVector amplitudes, double mass);

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  const ComplexVector& values() const noexcept { return amplitudes_; }
  double mass() const noexcept { return mass_; }

  RealVector density() const;
  double norm_squared() const;

  /// Same amplitudes, different mass label (no resampling).
  WaveFunction with_mass(double mass) const { return WaveFunction(grid_, amplitudes_, mass); }

 private:
  Grid1D grid_;
  ComplexVector amplitudes_;
  double mass_;
};

/// A localized component: mean position, mean velocity, position spread and
/// a complex weight (used by cat_state; only its phase matters for a single packet).
struct PacketSpec {
  double mean_x = 0.0;
  double mean_v = 0.0;
  double sigma_x = 1.0;
  Complex weight{1.0, 0.0};
};

/// Minimum-uncertainty Gaussian: <x> = mean_x, <p> = m*mean_v, dx = sigma_x,
/// dp = 1/(2 sigma_x). Throws InvalidArgument if +-6 sigma does not fit on the
/// grid in x or p, LeakageError if the boundary guard trips.
WaveFunction gaussian_packet(const Grid1D& grid, double mass, const PacketSpec& spec);

/// Normalized weighted superposition of Gaussian components. When every
/// pairwise overlap is below kCatOverlapCutoff the cross terms are ignored in
/// the normalization; otherwise the exact norm is used.
WaveFunction cat_state(const Grid1D& grid, double mass, std::span<const PacketSpec> specs);

inline constexpr double kCatOverlapCutoff = 1e-8;

/// max_{i<j} |<g_i|g_j>| over the unit-norm components of a cat state.
double max_pairwise_overlap(const Grid1D& grid, double mass, std::span<const PacketSpec> specs);

/// <psi|phi> by lattice quadrature.
Complex inner_product(const WaveFunction& psi, const WaveFunction& phi);

/// <x^order>, order in [0, 4]. Runs the boundary guard first.
double moment(const WaveFunction& psi, int order);

/// <(x - <x>)^order>, order in [0, 4].
double central_moment(const WaveFunction& psi, int order);

/// <x^2> - <x>^2.
double dispersion(const WaveFunction& psi);

/// phi(v) = sqrt(m) psi~(m v) on v_j = p_j / m.
struct VelocityWaveFunction {
  RealVector v;
  ComplexVector phi;
  double dv = 0.0;
};

VelocityWaveFunction velocity_wavefunction(const WaveFunction& psi);

/// A state of mass m2 on the same lattice whose velocity wave function equals
/// that of psi. Band-limited resampling in momentum space. Throws
/// AliasingError if the resampled state loses norm or reaches the grid edge.
WaveFunction rebase_mass(const WaveFunction& psi, double target_mass);

/// Throws InvalidArgument unless |norm^2 - 1| < kNormTolerance.
void require_normalized(const WaveFunction& psi, const char* context);

}  // namespace qfall
