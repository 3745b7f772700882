#include "qfall/qubitphase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qfall/errors.hpp"

namespace qfall {
namespace {

constexpr double kWeakField = 1e-3;
constexpr double kSlowMotion = 1e-2;
constexpr double kPhysicalTolerance = 1e-12;

void require_positive(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be finite and non-negative");
  }
}

}  // namespace

Complex zeta(const WaveFunction& psi_free_t, double omega, double g, double t) {
  require_normalized(psi_free_t, "zeta");
  const Grid1D& grid = psi_free_t.grid();
  const double k = omega * g * t;
  if (k != 0.0 && 2.0 * std::numbers::pi / std::abs(k) < 4.0 * grid.dx()) {
    throw UndersamplingError("zeta: ramp wavelength " + std::to_string(2.0 * std::numbers::pi / std::abs(k)) +
                             " is shorter than four cells (dx = " + std::to_string(grid.dx()) + ")");
  }
  Complex acc{0.0, 0.0};
  const auto a = psi_free_t.amplitudes();
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::norm(a[j]) * std::polar(1.0, -k * grid.x(j));
  return acc * grid.dx();
}

bool QubitState::is_physical() const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kPhysicalTolerance) return false;
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > kPhysicalTolerance) return false;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(rho);
  return solver.eigenvalues().minCoeff() >= -kPhysicalTolerance;
}

QubitState qubit_reduced(Complex c0, Complex c1, double omega, double g, double t, Complex zeta_value) {
  const double norm = std::norm(c0) + std::norm(c1);
  if (std::abs(norm - 1.0) > 1e-10) {
    throw InvalidArgument("qubit_reduced: |c0|^2 + |c1|^2 = " + std::to_string(norm) + ", expected 1");
  }
  QubitState q;
  q.omega = omega;
  q.g = g;
  q.t = t;
  const Complex off = c0 * std::conj(c1) * std::polar(1.0, omega * t - omega * g * g * t * t * t / 3.0) * zeta_value;
  q.rho << std::norm(c0), off, std::conj(off), std::norm(c1);
  return q;
}

QubitState qubit_from_composite(const CompositeState& state, double g, double t) {
  if (state.spectrum().levels() != 2) throw InvalidArgument("qubit_from_composite: need a two-level spectrum");
  const auto& c = state.amplitudes();
  const auto& psi = state.branches();
  QubitState q;
  q.omega = state.spectrum().omega()[1];
  q.g = g;
  q.t = t;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      q.rho(i, j) = c[i] * std::conj(c[j]) * inner_product(psi[j], psi[i]);
    }
  }
  return q;
}

double phase_shift_t(double omega, double g, double t_d, UnitMode mode) {
  return omega * g * g * t_d * t_d * t_d / 3.0 * inverse_c2(mode);
}

double phase_shift(double omega, double g, double L, UnitMode mode) {
  require_positive(g, "phase_shift: g");
  require_positive(L, "phase_shift: L");
  return 2.0 * std::numbers::sqrt2 / 3.0 * omega * std::sqrt(g) * std::pow(L, 1.5) * inverse_c2(mode);
}

double relative_shift(double g, double L, UnitMode mode) { return 2.0 * g * L / 3.0 * inverse_c2(mode); }

double b_parameter(double omega, double g, double L, double sigma_x, UnitMode mode) {
  require_positive(g, "b_parameter: g");
  require_positive(L, "b_parameter: L");
  if (g == 0.0) return 0.0;
  return omega * g * std::sqrt(2.0 * L / g) * sigma_x * inverse_c2(mode);
}

double b_ratio(double omega, double g, double L, double sigma_x, UnitMode mode) {
  return (b_parameter(omega, g, L, sigma_x, mode) / phase_shift(omega, g, L, mode)) / (sigma_x / L);
}

ProperTime proper_time(const PathSample& path, double g_local, UnitMode mode) {
  const std::size_t count = path.times.size();
  if (count != path.positions.size()) throw InvalidArgument("proper_time: times/positions length mismatch");
  if (count < 3) throw InvalidArgument("proper_time: need at least three samples");
  for (std::size_t i = 1; i < count; ++i) {
    if (!(path.times[i] > path.times[i - 1])) {
      throw InvalidArgument("proper_time: times must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
  if (!(path.radius > 0.0) || path.gm < 0.0) throw InvalidArgument("proper_time: need R > 0 and GM >= 0");
  const double inv_c2 = inverse_c2(mode);
  const double potential = path.gm / path.radius * inv_c2;
  if (potential >= kWeakField) {
    throw InvalidArgument("proper_time: GM/R = " + std::to_string(potential) + " is outside the weak-field regime");
  }

  const RealVector velocity = three_point_derivative(path.times, path.positions);
  RealVector v2(count);
  double fastest = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    v2[i] = velocity[i] * velocity[i];
    fastest = std::max(fastest, std::abs(velocity[i]) * std::sqrt(inv_c2));
  }
  if (fastest >= kSlowMotion) {
    throw InvalidArgument("proper_time: |xdot| reaches " + std::to_string(fastest) + " c");
  }

  ProperTime out;
  const double duration = path.times.back() - path.times.front();
  out.tau_static = (1.0 - potential) * duration;
  out.term_grav = g_local * simpson(path.times, path.positions) * inv_c2;
  out.term_sr = 0.5 * simpson(path.times, v2) * inv_c2;
  out.tau = out.tau_static - out.term_grav - out.term_sr;
  return out;
}

double classical_phase(double omega, const PathSample& path, double g_local, UnitMode mode) {
  const ProperTime pt = proper_time(path, g_local, mode);
  return omega * (pt.term_grav + pt.term_sr);
}

PathSample free_fall_path(double g, double t, std::size_t samples, double gm, double radius) {
  if (samples < 3 || !(t > 0.0)) throw InvalidArgument("free_fall_path: need t > 0 and at least three samples");
  PathSample path;
  path.gm = gm;
  path.radius = radius;
  path.times.resize(samples);
  path.positions.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = t * static_cast<double>(i) / static_cast<double>(samples - 1);
    path.times[i] = s;
    path.positions[i] = 0.5 * g * s * s;
  }
  return path;
}

Complex cat_zeta(double omega, double g, double t, double ell, double v1, double v2) {
  const Complex envelope = std::polar(1.0, -0.5 * g * omega * (v1 + v2) * t * t);
  return envelope * std::cos(0.5 * g * omega * t * (ell + (v1 - v2) * t));
}

}  // namespace qfall
