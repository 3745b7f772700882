#include "qfall/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qfall/errors.hpp"

namespace qfall {
namespace {

constexpr double kSnap = 1e-9;
constexpr double kFlowIntegralTolerance = 1e-8;

double snap(double index) {
  const double r = std::round(index);
  return std::abs(index - r) < kSnap ? r : index;
}

// Bilinear sample at fractional indices; zero off the lattice.
double sample(const WignerMap& w, double fk, double fj) {
  fk = snap(fk);
  fj = snap(fj);
  const double last_k = static_cast<double>(w.grid.size() - 1);
  const double last_j = static_cast<double>(w.n_axis - 1);
  if (fk < 0.0 || fj < 0.0 || fk > last_k || fj > last_j) return 0.0;

  const auto k0 = static_cast<std::size_t>(std::floor(fk));
  const auto j0 = static_cast<std::size_t>(std::floor(fj));
  const double tk = fk - static_cast<double>(k0);
  const double tj = fj - static_cast<double>(j0);
  const std::size_t k1 = std::min(k0 + 1, w.grid.size() - 1);
  const std::size_t j1 = std::min(j0 + 1, w.n_axis - 1);
  return (1.0 - tk) * ((1.0 - tj) * w.at(k0, j0) + tj * w.at(k0, j1)) +
         tk * ((1.0 - tj) * w.at(k1, j0) + tj * w.at(k1, j1));
}

}  // namespace

double WignerMap::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.dx() * d_axis;
}

RealVector WignerMap::x_marginal() const {
  RealVector out(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_axis; ++j) s += at(k, j);
    out[k] = s * d_axis;
  }
  return out;
}

RealVector WignerMap::axis_marginal() const {
  RealVector out(n_axis, 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t j = 0; j < n_axis; ++j) out[j] += at(k, j);
  }
  for (double& v : out) v *= grid.dx();
  return out;
}

double WignerMap::min_value() const { return *std::min_element(values.begin(), values.end()); }

WignerMap wigner(const WaveFunction& psi) {
  const Grid1D& grid = psi.grid();
  const std::size_t n = grid.size();
  if (n > kMaxWignerSize) {
    throw MemoryGuardError("wigner: grid of " + std::to_string(n) + " points exceeds " +
                           std::to_string(kMaxWignerSize));
  }
  require_normalized(psi, "wigner");
  check_leakage(psi.amplitudes(), grid, "wigner");

  // fine[2k + l] = psi(x_k + l dx/2), periodic in 2n.
  const ComplexVector fine = upsample2(psi.amplitudes(), grid);
  const std::size_t fine_n = 2 * n;
  const long half = static_cast<long>(n / 2);

  WignerMap w{grid, grid.p_min(), grid.dp(), n, AxisKind::momentum, psi.mass(),
              std::vector<double>(n * n, 0.0), 0.0};
  const double scale = grid.dx() / (2.0 * std::numbers::pi);
  ComplexVector row(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::fill(row.begin(), row.end(), Complex{0.0, 0.0});
    // l = -n/2 has no mirror partner and is left out so the row stays Hermitian.
    for (long l = -half + 1; l < half; ++l) {
      const long centre = 2 * static_cast<long>(k);
      const auto plus = static_cast<std::size_t>(((centre + l) % static_cast<long>(fine_n) + static_cast<long>(fine_n)) %
                                                 static_cast<long>(fine_n));
      const auto minus = static_cast<std::size_t>(((centre - l) % static_cast<long>(fine_n) + static_cast<long>(fine_n)) %
                                                  static_cast<long>(fine_n));
      const Complex f = fine[plus] * std::conj(fine[minus]);
      const auto slot = static_cast<std::size_t>((l + static_cast<long>(n)) % static_cast<long>(n));
      row[slot] = (l % 2 == 0) ? f : -f;
    }
    detail::fft_inplace(row, /*forward=*/true);
    for (std::size_t j = 0; j < n; ++j) {
      w.values[k * n + j] = scale * row[j].real();
      w.imag_residue = std::max(w.imag_residue, scale * std::abs(row[j].imag()));
    }
  }
  return w;
}

WignerMap to_velocity(const WignerMap& w) {
  if (w.axis != AxisKind::momentum) throw InvalidArgument("to_velocity: map already has a velocity axis");
  WignerMap out = w;
  out.axis = AxisKind::velocity;
  out.axis_min = w.axis_min / w.mass;
  out.d_axis = w.d_axis / w.mass;
  for (double& v : out.values) v *= w.mass;
  out.imag_residue = w.imag_residue * w.mass;
  return out;
}

WignerMap liouville_shift(const WignerMap& w0, const FlowParams& params) {
  if (!(params.t >= 0.0)) throw InvalidArgument("liouville_shift: t must be non-negative");
  if (!(params.mass_ratio > 0.0)) throw InvalidArgument("liouville_shift: mass ratio must be positive");
  if (params.t == 0.0) return w0;

  const double g = params.g * params.mass_ratio;
  const double t = params.t;
  const bool momentum = w0.axis == AxisKind::momentum;
  // Axis value a carries velocity a/m (momentum) or a (velocity).
  const double per_axis = momentum ? 1.0 / w0.mass : 1.0;
  const double axis_kick = momentum ? w0.mass * g * t : g * t;
  const double drop = 0.5 * g * t * t;

  WignerMap out = w0;
  const std::size_t n = w0.grid.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < w0.n_axis; ++j) {
      const double a = w0.axis_value(j);
      const double xs = w0.grid.x(k) - a * per_axis * t - drop;
      const double as = a + axis_kick;
      out.values[k * w0.n_axis + j] =
          sample(w0, (xs - w0.grid.x_min()) / w0.grid.dx(), (as - w0.axis_min) / w0.d_axis);
    }
  }
  const double lost = std::abs(out.total() - w0.total());
  if (lost > kFlowIntegralTolerance) {
    throw SupportError("liouville_shift: characteristic leaves the lattice (integral changed by " +
                       std::to_string(lost) + ")");
  }
  return out;
}

double max_abs_difference(const WignerMap& a, const WignerMap& b) {
  if (a.axis != b.axis) throw InvalidArgument("max_abs_difference: maps have different axis kinds");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.grid.size(); ++k) {
    const double fk = (a.grid.x(k) - b.grid.x_min()) / b.grid.dx();
    for (std::size_t j = 0; j < a.n_axis; ++j) {
      const double fj = (a.axis_value(j) - b.axis_min) / b.d_axis;
      worst = std::max(worst, std::abs(a.at(k, j) - sample(b, fk, fj)));
    }
  }
  return worst;
}

}  // namespace qfall
