#pragma once

// Wigner and velocity-Wigner maps of pure states and the classical
// (Liouville) flow that transports them under a uniform field.

#include <cstddef>
#include <vector>

#include "qfall/lattice.hpp"
#include "qfall/states.hpp"

namespace qfall {

enum class AxisKind { momentum, velocity };

/// W[x_k][a_j] sampled on the state's x-lattice and a second axis
/// a_j = axis_min + j*d_axis (momentum or velocity). Row-major.
struct WignerMap {
  Grid1D grid;
  double axis_min = 0.0;
  double d_axis = 0.0;
  std::size_t n_axis = 0;
  AxisKind axis = AxisKind::momentum;
  double mass = 1.0;
  std::vector<double> values;
  /// Largest |Im| discarded by the transform.
  double imag_residue = 0.0;

  double at(std::size_t k, std::size_t j) const { return values[k * n_axis + j]; }
  double axis_value(std::size_t j) const { return axis_min + static_cast<double>(j) * d_axis; }

  double total() const;
  RealVector x_marginal() const;
  RealVector axis_marginal() const;
  double min_value() const;
};

/// Largest grid for which wigner() will build the dense n-by-n map.
inline constexpr std::size_t kMaxWignerSize = 4096;

/// W(x,p) = (1/2 pi) Int dxi e^{-i p xi} psi(x + xi/2) psi*(x - xi/2).
/// The half-cell samples come from band-limited upsampling, so the p-axis is
/// the state's own momentum lattice. The xi-range is half the grid span, so
/// the state's support has to fit in half the grid for the map to be accurate
/// away from its centre. Throws LeakageError via the boundary
/// guard and MemoryGuardError above kMaxWignerSize.
WignerMap wigner(const WaveFunction& psi);

/// Relabel p -> v = p/m and scale values by m, keeping the integral fixed.
WignerMap to_velocity(const WignerMap& w);

/// Field and time for a phase-space flow: x'' = -g_eff, with g_eff = g * mass_ratio.
struct FlowParams {
  double g = 0.0;
  double t = 0.0;
  double mass_ratio = 1.0;
};

/// W_t(x,p) = W_0(x - p t/m - g t^2/2, p + m g t)  (momentum axis)
/// W_t(x,v) = W_0(x - v t - g t^2/2, v + g t)      (velocity axis)
/// Bilinear resampling; fractional indices within 1e-9 of an integer are
/// snapped. Throws SupportError if more than 1e-8 of the integral is carried
/// off the lattice.
WignerMap liouville_shift(const WignerMap& w0, const FlowParams& params);

/// Max |a - b| after resampling b onto a's lattices (linear in both axes).
/// Points of a outside b's coverage compare against zero.
double max_abs_difference(const WignerMap& a, const WignerMap& b);

}  // namespace qfall
