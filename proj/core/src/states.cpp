#include "qfall/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qfall/errors.hpp"

namespace qfall {
namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kSupportSigmas = 6.0;

void require_mass(double mass, const char* context) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw InvalidArgument(std::string(context) + ": mass must be positive");
  }
}

double sum_norm(std::span<const Complex> values, double dx) {
  double s = 0.0;
  for (const Complex& a : values) s += std::norm(a);
  return s * dx;
}

// Unit-norm Gaussian component (phase of the weight excluded).
ComplexVector gaussian_component(const Grid1D& grid, double mass, const PacketSpec& spec) {
  if (!(spec.sigma_x > 0.0)) throw InvalidArgument("gaussian_packet: sigma_x must be positive");
  const double lo = spec.mean_x - kSupportSigmas * spec.sigma_x;
  const double hi = spec.mean_x + kSupportSigmas * spec.sigma_x;
  if (lo < grid.x_min() || hi > grid.x_max()) {
    throw InvalidArgument("gaussian_packet: support outside grid (mean_x +- 6 sigma_x not inside [" +
                          std::to_string(grid.x_min()) + ", " + std::to_string(grid.x_max()) + "))");
  }
  const double p_mean = mass * spec.mean_v;
  const double sigma_p = 0.5 / spec.sigma_x;
  if (std::abs(p_mean) + kSupportSigmas * sigma_p > grid.p_max()) {
    throw InvalidArgument("gaussian_packet: momentum support outside grid (|m v| + 6 sigma_p > p_max = " +
                          std::to_string(grid.p_max()) + ")");
  }

  const double prefactor = std::pow(2.0 * std::numbers::pi * spec.sigma_x * spec.sigma_x, -0.25);
  const double inv4s2 = 0.25 / (spec.sigma_x * spec.sigma_x);
  ComplexVector out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = grid.x(k) - spec.mean_x;
    out[k] = prefactor * std::exp(-d * d * inv4s2) * std::polar(1.0, p_mean * d);
  }
  const double norm = std::sqrt(sum_norm(out, grid.dx()));
  for (Complex& a : out) a /= norm;
  return out;
}

Complex phase_of(Complex weight) {
  const double magnitude = std::abs(weight);
  if (!(magnitude > 0.0)) throw InvalidArgument("PacketSpec: weight must be non-zero");
  return weight / magnitude;
}

}  // namespace

WaveFunction::WaveFunction(Grid1D grid, ComplexVector amplitudes, double mass)
    : grid_(grid), amplitudes_(std::move(amplitudes)), mass_(mass) {
  require_mass(mass, "WaveFunction");
  if (amplitudes_.size() != grid_.size()) {
    throw InvalidArgument("WaveFunction: amplitude count " + std::to_string(amplitudes_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
  }
}

RealVector WaveFunction::density() const {
  RealVector rho(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), rho.begin(),
                 [](const Complex& a) { return std::norm(a); });
  return rho;
}

double WaveFunction::norm_squared() const { return sum_norm(amplitudes_, grid_.dx()); }

void require_normalized(const WaveFunction& psi, const char* context) {
  const double n2 = psi.norm_squared();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw InvalidArgument(std::string(context) + ": state is not normalized (norm^2 = " +
                          std::to_string(n2) + ")");
  }
}

WaveFunction gaussian_packet(const Grid1D& grid, double mass, const PacketSpec& spec) {
  require_mass(mass, "gaussian_packet");
  ComplexVector amps = gaussian_component(grid, mass, spec);
  const Complex phase = phase_of(spec.weight);
  for (Complex& a : amps) a *= phase;
  check_leakage(amps, grid, "gaussian_packet");
  return WaveFunction(grid, std::move(amps), mass);
}

double max_pairwise_overlap(const Grid1D& grid, double mass, std::span<const PacketSpec> specs) {
  std::vector<ComplexVector> parts;
  parts.reserve(specs.size());
  for (const PacketSpec& s : specs) parts.push_back(gaussian_component(grid, mass, s));
  double worst = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t k = 0; k < grid.size(); ++k) acc += std::conj(parts[i][k]) * parts[j][k];
      worst = std::max(worst, std::abs(acc) * grid.dx());
    }
  }
  return worst;
}

WaveFunction cat_state(const Grid1D& grid, double mass, std::span<const PacketSpec> specs) {
  require_mass(mass, "cat_state");
  if (specs.empty()) throw InvalidArgument("cat_state: need at least one component");

  ComplexVector amps(grid.size(), Complex{0.0, 0.0});
  double weight_norm = 0.0;
  for (const PacketSpec& s : specs) {
    if (!(std::abs(s.weight) > 0.0)) throw InvalidArgument("cat_state: component weight must be non-zero");
    const ComplexVector part = gaussian_component(grid, mass, s);
    for (std::size_t k = 0; k < amps.size(); ++k) amps[k] += s.weight * part[k];
    weight_norm += std::norm(s.weight);
  }

  const bool disjoint = specs.size() == 1 || max_pairwise_overlap(grid, mass, specs) < kCatOverlapCutoff;
  const double norm2 = disjoint ? weight_norm : sum_norm(amps, grid.dx());
  const double scale = 1.0 / std::sqrt(norm2);
  for (Complex& a : amps) a *= scale;
  check_leakage(amps, grid, "cat_state");
  return WaveFunction(grid, std::move(amps), mass);
}

Complex inner_product(const WaveFunction& psi, const WaveFunction& phi) {
  if (!(psi.grid() == phi.grid())) throw InvalidArgument("inner_product: states live on different grids");
  Complex acc{0.0, 0.0};
  const auto a = psi.amplitudes();
  const auto b = phi.amplitudes();
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
  return acc * psi.grid().dx();
}

double moment(const WaveFunction& psi, int order) {
  if (order < 0 || order > 4) throw InvalidArgument("moment: order must be in [0, 4]");
  check_leakage(psi.amplitudes(), psi.grid(), "moment");
  const Grid1D& grid = psi.grid();
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    acc += std::pow(grid.x(k), order) * std::norm(psi.amplitudes()[k]);
  }
  return acc * grid.dx();
}

double central_moment(const WaveFunction& psi, int order) {
  if (order < 0 || order > 4) throw InvalidArgument("central_moment: order must be in [0, 4]");
  const double mean = moment(psi, 1) / moment(psi, 0);
  const Grid1D& grid = psi.grid();
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    acc += std::pow(grid.x(k) - mean, order) * std::norm(psi.amplitudes()[k]);
  }
  return acc * grid.dx();
}

double dispersion(const WaveFunction& psi) {
  const double m1 = moment(psi, 1);
  return moment(psi, 2) - m1 * m1;
}

VelocityWaveFunction velocity_wavefunction(const WaveFunction& psi) {
  const Grid1D& grid = psi.grid();
  const double m = psi.mass();
  VelocityWaveFunction out;
  out.phi = dft_forward(psi.amplitudes(), grid);
  const double root_m = std::sqrt(m);
  for (Complex& a : out.phi) a *= root_m;
  out.v.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out.v[j] = grid.p(j) / m;
  out.dv = grid.dp() / m;
  return out;
}

WaveFunction rebase_mass(const WaveFunction& psi, double target_mass) {
  require_mass(target_mass, "rebase_mass");
  const double source_mass = psi.mass();
  if (target_mass == source_mass) return psi;

  const Grid1D& grid = psi.grid();
  const std::size_t n = grid.size();
  const double s = target_mass / source_mass;
  const auto amps = psi.amplitudes();

  // psi2~(p) = s^{-1/2} psi1~(p/s), with psi1~ evaluated off-lattice from the
  // samples (its band-limited continuation). Queries outside the band are zero.
  ComplexVector spectrum(n, Complex{0.0, 0.0});
  const double scale = grid.dx() * kInvSqrt2Pi / std::sqrt(s);
  for (std::size_t j = 0; j < n; ++j) {
    const double q = grid.p(j) / s;
    if (std::abs(q) >= grid.p_max()) continue;
    const Complex step = std::polar(1.0, -q * grid.dx());
    Complex rotor = std::polar(1.0, -q * grid.x_min());
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      acc += rotor * amps[k];
      rotor *= step;
      if ((k & 255u) == 255u) rotor /= std::abs(rotor);
    }
    spectrum[j] = acc * scale;
  }

  ComplexVector out = dft_inverse(spectrum, grid);
  const double n2 = sum_norm(out, grid.dx());
  if (std::abs(n2 - 1.0) > 1e-9) {
    throw AliasingError("rebase_mass: resampled state has norm^2 " + std::to_string(n2) +
                        " (mass ratio " + std::to_string(s) + " pushes support off the lattice)");
  }
  if (boundary_probability(out, grid) > kLeakageThreshold) {
    throw AliasingError("rebase_mass: resampled state reaches the grid edge (mass ratio " +
                        std::to_string(s) + ")");
  }
  return WaveFunction(grid, std::move(out), target_mass);
}

}  // namespace qfall
