#include "qfall/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qfall/errors.hpp"

namespace qfall {
namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;  // 1/sqrt(2 pi)

void require_length(std::size_t got, const Grid1D& grid, const char* what) {
  if (got != grid.size()) {
    throw InvalidArgument(std::string(what) + ": length " + std::to_string(got) +
                          " does not match grid size " + std::to_string(grid.size()));
  }
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

Grid1D::Grid1D(double x_min, double dx, std::size_t n) : x_min_(x_min), dx_(dx), n_(n) {
  if (!is_power_of_two(n) || n < 16) {
    throw InvalidArgument("Grid1D: n must be a power of two >= 16, got " + std::to_string(n));
  }
  if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x_min)) {
    throw InvalidArgument("Grid1D: dx must be positive and finite");
  }
  dp_ = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
}

RealVector Grid1D::x_values() const {
  RealVector xs(n_);
  for (std::size_t k = 0; k < n_; ++k) xs[k] = x(k);
  return xs;
}

RealVector Grid1D::p_values() const {
  RealVector ps(n_);
  for (std::size_t j = 0; j < n_; ++j) ps[j] = p(j);
  return ps;
}

Grid1D Grid1D::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("Grid1D::scaled: factor must be positive");
  return Grid1D(x_min_ * factor, dx_ * factor, n_);
}

Grid1D make_grid(double x_min, double x_max, std::size_t n) {
  if (!(x_max > x_min)) throw InvalidArgument("make_grid: degenerate interval (x_max <= x_min)");
  if (!is_power_of_two(n) || n < 16) {
    throw InvalidArgument("make_grid: n must be a power of two >= 16, got " + std::to_string(n));
  }
  return Grid1D(x_min, (x_max - x_min) / static_cast<double>(n), n);
}

ComplexVector dft_forward(std::span<const Complex> values, const Grid1D& grid) {
  require_length(values.size(), grid, "dft_forward");
  const std::size_t n = grid.size();
  ComplexVector out(values.begin(), values.end());
  for (std::size_t k = 1; k < n; k += 2) out[k] = -out[k];
  detail::fft_inplace(out, /*forward=*/true);
  const double scale = grid.dx() * kInvSqrt2Pi;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] *= scale * std::polar(1.0, -grid.p(j) * grid.x_min());
  }
  return out;
}

ComplexVector dft_inverse(std::span<const Complex> values, const Grid1D& grid) {
  require_length(values.size(), grid, "dft_inverse");
  const std::size_t n = grid.size();
  ComplexVector out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = values[j] * std::polar(1.0, grid.p(j) * grid.x_min());
  detail::fft_inplace(out, /*forward=*/false);
  const double scale = grid.dp() * kInvSqrt2Pi;
  for (std::size_t k = 0; k < n; ++k) out[k] *= (k % 2 == 0) ? scale : -scale;
  return out;
}

double quad(std::span<const double> values, double dx) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * dx;
}

Complex quad(std::span<const Complex> values, double dx) {
  Complex sum{0.0, 0.0};
  for (const Complex& v : values) sum += v;
  return sum * dx;
}

double simpson(std::span<const double> nodes, std::span<const double> values) {
  if (nodes.size() != values.size()) throw InvalidArgument("simpson: nodes/values length mismatch");
  const std::size_t count = nodes.size();
  if (count < 2) return 0.0;
  if (count == 2) return 0.5 * (nodes[1] - nodes[0]) * (values[0] + values[1]);

  const std::size_t intervals = count - 1;
  const std::size_t paired = intervals - intervals % 2;
  double total = 0.0;
  for (std::size_t i = 0; i + 2 <= paired; i += 2) {
    const double h0 = nodes[i + 1] - nodes[i];
    const double h1 = nodes[i + 2] - nodes[i + 1];
    const double hs = h0 + h1;
    total += hs / 6.0 *
             ((2.0 - h1 / h0) * values[i] + hs * hs / (h0 * h1) * values[i + 1] +
              (2.0 - h0 / h1) * values[i + 2]);
  }
  if (intervals % 2 == 1) {
    const std::size_t m = count - 1;
    const double h = nodes[m] - nodes[m - 1];
    const double hp = nodes[m - 1] - nodes[m - 2];
    const double alpha = (2.0 * h * h + 3.0 * h * hp) / (6.0 * (hp + h));
    const double beta = (h * h + 3.0 * h * hp) / (6.0 * hp);
    const double eta = h * h * h / (6.0 * hp * (hp + h));
    total += alpha * values[m] + beta * values[m - 1] - eta * values[m - 2];
  }
  return total;
}

RealVector three_point_derivative(std::span<const double> nodes, std::span<const double> values) {
  if (nodes.size() != values.size()) {
    throw InvalidArgument("three_point_derivative: nodes/values length mismatch");
  }
  const std::size_t count = nodes.size();
  if (count < 3) throw InvalidArgument("three_point_derivative: need at least three nodes");

  // d/dx of the Lagrange quadratic through (a, b, c), evaluated at x.
  auto stencil = [&](std::size_t a, std::size_t b, std::size_t c, double x) {
    const double xa = nodes[a], xb = nodes[b], xc = nodes[c];
    return values[a] * ((x - xb) + (x - xc)) / ((xa - xb) * (xa - xc)) +
           values[b] * ((x - xa) + (x - xc)) / ((xb - xa) * (xb - xc)) +
           values[c] * ((x - xa) + (x - xb)) / ((xc - xa) * (xc - xb));
  };

  RealVector out(count);
  out[0] = stencil(0, 1, 2, nodes[0]);
  for (std::size_t i = 1; i + 1 < count; ++i) out[i] = stencil(i - 1, i, i + 1, nodes[i]);
  out[count - 1] = stencil(count - 3, count - 2, count - 1, nodes[count - 1]);
  return out;
}

double boundary_probability(std::span<const Complex> amplitudes, const Grid1D& grid) {
  require_length(amplitudes.size(), grid, "boundary_probability");
  const std::size_t n = grid.size();
  // kBoundaryFraction of the lattice in total, split between the two ends.
  const std::size_t band = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(0.5 * kBoundaryFraction * static_cast<double>(n))));
  double outer = 0.0;
  for (std::size_t k = 0; k < band; ++k) {
    outer += std::norm(amplitudes[k]) + std::norm(amplitudes[n - 1 - k]);
  }
  return outer * grid.dx();
}

void check_leakage(std::span<const Complex> amplitudes, const Grid1D& grid, std::string_view context) {
  const double outer = boundary_probability(amplitudes, grid);
  if (outer > kLeakageThreshold) {
    throw LeakageError(std::string(context) + ": probability " + std::to_string(outer) +
                       " in the outer band of the grid exceeds " + std::to_string(kLeakageThreshold));
  }
}

bool is_grid_aligned(double shift, double dx) noexcept {
  const double cells = shift / dx;
  return std::abs(cells - std::round(cells)) < 1e-9;
}

ComplexVector shift_cells(std::span<const Complex> values, long cells) {
  const long n = static_cast<long>(values.size());
  ComplexVector out(values.size());
  const long offset = ((cells % n) + n) % n;
  for (long k = 0; k < n; ++k) out[static_cast<std::size_t>((k + offset) % n)] = values[static_cast<std::size_t>(k)];
  return out;
}

ComplexVector translate(std::span<const Complex> values, const Grid1D& grid, double shift) {
  require_length(values.size(), grid, "translate");
  if (shift == 0.0) return ComplexVector(values.begin(), values.end());
  if (is_grid_aligned(shift, grid.dx())) {
    return shift_cells(values, std::lround(shift / grid.dx()));
  }
  ComplexVector spectrum = dft_forward(values, grid);
  for (std::size_t j = 0; j < spectrum.size(); ++j) spectrum[j] *= std::polar(1.0, -grid.p(j) * shift);
  return dft_inverse(spectrum, grid);
}

ComplexVector upsample2(std::span<const Complex> values, const Grid1D& grid) {
  require_length(values.size(), grid, "upsample2");
  const std::size_t n = grid.size();
  const Grid1D fine(grid.x_min(), 0.5 * grid.dx(), 2 * n);
  const ComplexVector coarse = dft_forward(values, grid);
  ComplexVector padded(2 * n, Complex{0.0, 0.0});
  // Coarse bin j (p = (j - n/2) dp) sits at fine bin j + n/2; bin 0 is Nyquist.
  for (std::size_t j = 1; j < n; ++j) padded[j + n / 2] = coarse[j];
  return dft_inverse(padded, fine);
}

}  // namespace qfall
