#include <gtest/gtest.h>

#include "test_support.hpp"

namespace qfall {
namespace {

TEST(InternalSpectrum, Validation) {
  EXPECT_NO_THROW(explicit_spectrum({0.0, 0.1, 0.1, 0.3}, 100.0));
  EXPECT_THROW(explicit_spectrum({0.1, 0.2}, 100.0), InvalidArgument);
  EXPECT_THROW(explicit_spectrum({0.0, 0.2, 0.1}, 100.0), InvalidArgument);
  EXPECT_THROW(explicit_spectrum({0.0, 2.0}, 100.0), InvalidArgument);
  EXPECT_THROW(explicit_spectrum({0.0, 0.1}, 0.0), InvalidArgument);
  const InternalSpectrum h = harmonic_spectrum(0.2, 5, 100.0);
  EXPECT_EQ(h.levels(), 5u);
  EXPECT_DOUBLE_EQ(h.omega()[4], 0.8);
  EXPECT_DOUBLE_EQ(h.branch_mass(3), 100.6);
}

TEST(Thermal, TwoLevelClosedForms) {
  const double omega = 0.3;
  const double beta = 2.0;
  const InternalSpectrum s = two_level_spectrum(omega, 100.0);
  const RealVector w = thermal_weights(s, beta);
  EXPECT_NEAR(w[0] + w[1], 1.0, 1e-15);
  EXPECT_NEAR(w[1] / w[0], std::exp(-beta * omega), 1e-15);
  const double x = std::exp(-beta * omega);
  const Thermodynamics th = mean_energy_and_heat_capacity(s, beta);
  EXPECT_NEAR(th.mean_energy, omega * x / (1.0 + x), 1e-15);
  EXPECT_NEAR(th.heat_capacity, beta * beta * omega * omega * x / ((1.0 + x) * (1.0 + x)), 1e-15);
  EXPECT_NEAR(std::abs(partition_function(s, {beta, 0.0}) - Complex{1.0 + x, 0.0}), 0.0, 1e-15);
  EXPECT_THROW(thermal_weights(s, 0.0), InvalidArgument);
}

TEST(Thermal, LongHarmonicLadderMatchesOscillator) {
  const double omega = 0.01;
  const double beta = 100.0;
  const InternalSpectrum s = harmonic_spectrum(omega, 200, 1e6);
  const Thermodynamics th = mean_energy_and_heat_capacity(s, beta);
  const double bw = beta * omega;
  EXPECT_NEAR(th.mean_energy, omega / std::expm1(bw), 1e-12);
  const double sh = std::sinh(bw / 2.0);
  EXPECT_NEAR(th.heat_capacity, bw * bw / (4.0 * sh * sh), 1e-12);
}

TEST(Gamma, ThermalEqualsExactWithThermalWeights) {
  const InternalSpectrum s = harmonic_spectrum(0.05, 12, 100.0);
  for (double beta : {0.5, 3.0, 20.0}) {
    for (double gt : {0.1, 1.0, 7.0}) {
      const Complex exact = gamma_exact(thermal_weights(s, beta), s, gt, 1.0, 2.0);
      const Complex thermal = gamma_thermal(s, beta, gt, 1.0, 2.0);
      EXPECT_LT(std::abs(exact - thermal), 1e-14);
      EXPECT_LE(std::abs(exact), 1.0 + 1e-15);
    }
  }
}

TEST(Gamma, ZeroArgumentIsUnity) {
  const InternalSpectrum s = two_level_spectrum(0.3, 100.0);
  EXPECT_EQ(gamma_thermal(s, 1.0, 0.0, 1.0, 1.0), Complex(1.0, 0.0));
  EXPECT_EQ(gamma_exact({0.5, 0.5}, s, 1.0, 1.0, 0.0), Complex(1.0, 0.0));
  EXPECT_DOUBLE_EQ(gamma_gaussian(s, 1.0, 0.0, 1.0, 1.0), 1.0);
}

TEST(Gamma, GaussianFormIsTheSmallArgumentLimit) {
  const InternalSpectrum s = harmonic_spectrum(0.1, 60, 1e4);
  const double beta = 10.0;
  for (double y : {0.05, 0.1, 0.2}) {
    const double gt = y * beta;
    EXPECT_NEAR(gaussian_expansion_parameter(beta, gt, 1.0, 1.0), y, 1e-15);
    const double exact = std::abs(gamma_thermal(s, beta, gt, 1.0, 1.0));
    EXPECT_LT(testing::relative(gamma_gaussian(s, beta, gt, 1.0, 1.0), exact), 5.0 * std::pow(y, 4)) << y;
  }
}

TEST(Gamma, DephasingTimeIsTheGaussianEFoldingPoint) {
  const InternalSpectrum s = harmonic_spectrum(0.1, 60, 1e4);
  const double beta = 10.0;
  const double g = 0.3;
  const double dx = 2.0;
  const double cv = mean_energy_and_heat_capacity(s, beta).heat_capacity;
  const double tau = dephasing_time(beta, g, dx, cv);
  EXPECT_NEAR(gamma_gaussian(s, beta, g, tau, dx), std::exp(-0.5), 1e-14);
  EXPECT_TRUE(std::isinf(dephasing_time(beta, 0.0, dx, cv)));
  EXPECT_TRUE(std::isinf(dephasing_time(beta, g, 0.0, cv)));
  EXPECT_TRUE(std::isinf(dephasing_time(beta, g, dx, 0.0)));
}

TEST(Regime, ExpandedDeltaTracksExact) {
  const InternalSpectrum s = two_level_spectrum(0.9, 100.0);
  const RegimeReport r = regime_check(s, 1.0, 2.0);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].level, 1u);
  EXPECT_LT(testing::relative(r.rows[0].delta_expanded, r.rows[0].delta_exact), 0.01);
  EXPECT_NEAR(r.margin, 2.0 / (std::sqrt(100.0 / 0.9) * 100.0), 1e-15);
  EXPECT_EQ(regime_check(explicit_spectrum({0.0}, 100.0), 1.0, 2.0).margin, 0.0);
}

class CompositeFixture : public ::testing::Test {
 protected:
  // p_max = 201 leaves room for the kick m0 g T = 50 pi.
  Grid1D grid = make_grid(-16.0, 16.0, 2048);
  InternalSpectrum spectrum = two_level_spectrum(0.5, 100.0);
  WaveFunction psi0 = gaussian_packet(grid, 100.0, {0.0, 0.0, 1.0});
};

TEST_F(CompositeFixture, FactorizedConstruction) {
  const double r = 1.0 / std::sqrt(2.0);
  const CompositeState s = CompositeState::factorized(spectrum, {r, {0.0, r}}, psi0);
  EXPECT_TRUE(s.is_factorized());
  EXPECT_DOUBLE_EQ(s.branches()[1].mass(), 100.5);
  EXPECT_NEAR(reduced_purity(s), 1.0, 1e-12);
  EXPECT_THROW(CompositeState::factorized(spectrum, {1.0, 1.0}, psi0), InvalidArgument);
  EXPECT_THROW(CompositeState(spectrum, {1.0, 0.0}, {psi0, psi0}), InvalidArgument);
}

TEST_F(CompositeFixture, EvolutionIsBranchwise) {
  const CompositeState s = CompositeState::thermal(spectrum, 1.0, psi0);
  const EvolutionParams p{0.7, 1.0};
  const CompositeState out = composite_evolve(s, p);
  for (std::size_t n = 0; n < 2; ++n) {
    const WaveFunction want = gravity_evolve(psi0.with_mass(spectrum.branch_mass(n)), p);
    EXPECT_LT(testing::max_abs_diff(out.branches()[n].amplitudes(), want.amplitudes()), 1e-14);
  }
  EXPECT_FALSE(out.is_factorized());
}

TEST_F(CompositeFixture, ReducedMatrixIdentities) {
  const CompositeState s = composite_evolve(CompositeState::thermal(spectrum, 1.0, psi0), {0.5, 1.0});
  const Eigen::MatrixXcd rho = reduced_translational(s);
  const double dx = grid.dx();
  EXPECT_NEAR(rho.trace().real() * dx, 1.0, 1e-10);
  EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(rho.cwiseAbs2().sum() * dx * dx, reduced_purity(s), 1e-10);
  const RealVector diag = reduced_position_density(s);
  for (std::size_t k = 0; k < grid.size(); k += 31) EXPECT_NEAR(rho(k, k).real(), diag[k], 1e-14);
}

TEST_F(CompositeFixture, VisibilityFollowsGamma) {
  const double beta = 1.0;
  const double g = std::numbers::pi / 2;
  const double delta_x = 4.0;
  const CompositeState s = composite_evolve(CompositeState::thermal(spectrum, beta, psi0), {g, 1.0});
  EXPECT_NEAR(visibility(s, delta_x), std::abs(gamma_thermal(spectrum, beta, g, 1.0, delta_x)), 1e-6);
  EXPECT_NEAR(visibility(CompositeState::thermal(spectrum, beta, psi0), delta_x), 1.0, 1e-12);
}

TEST_F(CompositeFixture, EchoRestoresCoherence) {
  const CompositeState s = CompositeState::thermal(spectrum, 1.0, psi0);
  const EchoResult echo = echo_protocol(s, std::numbers::pi / 2, 1.0, 4.0);
  EXPECT_NEAR(echo.visibility_before, 1.0, 1e-12);
  EXPECT_LT(echo.visibility_mid, 0.5);
  EXPECT_NEAR(echo.visibility_after, 1.0, 1e-10);
  EXPECT_LT(echo.purity_mid, 0.9);
  EXPECT_NEAR(echo.purity_after, 1.0, 1e-8);
  EXPECT_NEAR(echo.delta_x, 4.0, grid.dx());
}

TEST_F(CompositeFixture, EchoRejectsBadInput) {
  const CompositeState s = CompositeState::thermal(spectrum, 1.0, psi0);
  EXPECT_THROW(echo_protocol(composite_evolve(s, {1.0, 1.0}), -1.0, 1.0, 4.0), InvalidArgument);
  EXPECT_THROW(echo_protocol(s, 1.0, 2000.0, 4.0), InvalidArgument);
}

TEST(Composite, DenseMatrixGuard) {
  const Grid1D g = make_grid(-200.0, 200.0, 8192);
  const CompositeState s = CompositeState::thermal(two_level_spectrum(0.1, 100.0), 1.0,
                                                   gaussian_packet(g, 100.0, {0.0, 0.0, 2.0}));
  EXPECT_THROW(reduced_translational(s), MemoryGuardError);
  EXPECT_NO_THROW(reduced_purity(s));
}

TEST(Composite, RandomSpectraKeepGammaInsideUnitDisk) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    RealVector omega{0.0};
    const int levels = 2 + static_cast<int>(6 * u(rng));
    for (int i = 1; i < levels; ++i) omega.push_back(omega.back() + 0.1 * u(rng));
    const InternalSpectrum s = explicit_spectrum(omega, 100.0);
    const Complex gamma = gamma_thermal(s, 0.1 + 5.0 * u(rng), 10.0 * u(rng), 1.0 + u(rng), 5.0 * u(rng));
    EXPECT_LE(std::abs(gamma), 1.0 + 1e-14);
  }
}

}  // namespace
}  // namespace qfall
