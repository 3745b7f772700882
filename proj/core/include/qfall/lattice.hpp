#pragma once

// Uniform 1-D lattices, the unitary DFT that maps between the x- and
// p-lattices, quadrature and the boundary-leakage guard.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qfall {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Uniform periodic lattice x_k = x_min + k*dx, k = 0..n-1, together with the
/// conjugate momentum lattice p_j = (j - n/2)*dp, dp = 2*pi/(n*dx).
class Grid1D {
 public:
  /// Throws InvalidArgument unless n is a power of two >= 16 and dx > 0.
  Grid1D(double x_min, double dx, std::size_t n);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_min_ + static_cast<double>(n_) * dx_; }
  double dx() const noexcept { return dx_; }
  double span() const noexcept { return static_cast<double>(n_) * dx_; }
  std::size_t size() const noexcept { return n_; }

  double dp() const noexcept { return dp_; }
  double p_min() const noexcept { return -static_cast<double>(n_ / 2) * dp_; }
  /// Largest |p| on the lattice (the Nyquist momentum pi/dx).
  double p_max() const noexcept { return static_cast<double>(n_ / 2) * dp_; }

  double x(std::size_t k) const noexcept { return x_min_ + static_cast<double>(k) * dx_; }
  double p(std::size_t j) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * dp_;
  }

  RealVector x_values() const;
  RealVector p_values() const;

  /// Same lattice, every length multiplied by `factor` (momenta divided by it).
  Grid1D scaled(double factor) const;

  friend bool operator==(const Grid1D& a, const Grid1D& b) noexcept {
    return a.x_min_ == b.x_min_ && a.dx_ == b.dx_ && a.n_ == b.n_;
  }

 private:
  double x_min_;
  double dx_;
  std::size_t n_;
  double dp_;
};

/// dx = (x_max - x_min)/n; x_max itself is the first point of the next period.
Grid1D make_grid(double x_min, double x_max, std::size_t n);

bool is_power_of_two(std::size_t n) noexcept;

/// psi~(p_j) ~ (1/sqrt(2 pi)) * sum_k dx * exp(-i p_j x_k) psi(x_k).
/// Unitary in the sense sum |psi~|^2 dp == sum |psi|^2 dx.
ComplexVector dft_forward(std::span<const Complex> values, const Grid1D& grid);

/// Inverse of dft_forward.
ComplexVector dft_inverse(std::span<const Complex> values, const Grid1D& grid);

/// Periodic trapezoidal rule on a uniform lattice (identical to the Riemann sum
/// dx * sum f_k, spectrally accurate for smooth integrands that vanish at the
/// lattice edges).
double quad(std::span<const double> values, double dx);
Complex quad(std::span<const Complex> values, double dx);

/// Composite Simpson rule on possibly non-uniform nodes, with a three-point
/// quadratic correction for the final interval when the interval count is odd.
/// Exact for quadratics.
double simpson(std::span<const double> nodes, std::span<const double> values);

/// Derivative of the interpolating quadratic through each point and its
/// neighbours (one-sided three-point stencils at the ends). Exact for
/// quadratics.
RealVector three_point_derivative(std::span<const double> nodes, std::span<const double> values);

// Boundary guard: every evolved state must keep its probability out of the
// outer band of the periodic lattice.
inline constexpr double kBoundaryFraction = 0.05;
inline constexpr double kLeakageThreshold = 1e-10;

/// Probability (sum |f|^2 dx) inside the outer kBoundaryFraction of the grid,
/// counted at each end.
double boundary_probability(std::span<const Complex> amplitudes, const Grid1D& grid);

/// Throws LeakageError if boundary_probability exceeds kLeakageThreshold.
void check_leakage(std::span<const Complex> amplitudes, const Grid1D& grid, std::string_view context);

/// True when `shift` is an integer number of cells (to 1e-9 of a cell).
bool is_grid_aligned(double shift, double dx) noexcept;

/// Returns g with g(x) = f(x - shift). Exact circular index shift when the
/// shift is grid-aligned, band-limited phase-ramp shift otherwise.
ComplexVector translate(std::span<const Complex> values, const Grid1D& grid, double shift);

/// Circular index shift: out[k] = in[(k - cells) mod n].
ComplexVector shift_cells(std::span<const Complex> values, long cells);

/// Band-limited interpolation onto the lattice with half the spacing
/// (x_min, dx/2, 2n). The Nyquist bin is dropped.
ComplexVector upsample2(std::span<const Complex> values, const Grid1D& grid);

namespace detail {
/// In-place unnormalized radix-2 FFT. forward: exp(-2 pi i jk/n).
void fft_inplace(std::span<Complex> data, bool forward);
}  // namespace detail

}  // namespace qfall
