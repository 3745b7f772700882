#include <gtest/gtest.h>

#include "test_support.hpp"

namespace qfall {
namespace {

using testing::max_abs_diff;
using testing::max_density_diff;

// dx = 80/1024 = 0.078125; g = 0.625, t = 1 drops by exactly four cells.
Grid1D aligned_grid() { return make_grid(-40.0, 40.0, 1024); }
constexpr double kAlignedG = 0.625;

TEST(FreeEvolve, ZeroTimeIsIdentity) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.2, 1.0});
  EXPECT_LT(max_abs_diff(free_evolve(psi, 0.0).amplitudes(), psi.amplitudes()), 1e-15);
}

TEST(FreeEvolve, DispersionLaw) {
  const Grid1D g = make_grid(-30.0, 30.0, 1024);
  for (double mass : {1.0, 2.5}) {
    const double sigma = 1.2;
    const WaveFunction psi = gaussian_packet(g, mass, {0.0, 0.0, sigma});
    for (double scale : {0.1, 1.0, 3.0}) {
      const double t = scale * mass * sigma * sigma;
      const double want = sigma * sigma + t * t / (4.0 * sigma * sigma * mass * mass);
      EXPECT_LT(testing::relative(dispersion(free_evolve(psi, t)), want), 1e-8) << "m=" << mass << " t=" << t;
    }
  }
}

TEST(FreeEvolve, EhrenfestMean) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 2.0, {-3.0, 1.5, 1.0});
  for (double t : {0.5, 2.0, 4.0}) EXPECT_NEAR(moment(free_evolve(psi, t), 1), -3.0 + 1.5 * t, 1e-8);
}

TEST(FreeEvolve, UnitarityAndLeakage) {
  const Grid1D g = make_grid(-12.0, 12.0, 256);
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 3.0, 1.0});
  EXPECT_NEAR(free_evolve(psi, 1.0).norm_squared(), 1.0, 1e-12);
  EXPECT_THROW(free_evolve(psi, 3.0), LeakageError);
}

TEST(GravityEvolve, ZeroFieldEqualsFreeEvolution) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {1.0, -0.5, 1.3});
  EXPECT_LT(max_abs_diff(gravity_evolve(psi, {0.0, 2.0}).amplitudes(), free_evolve(psi, 2.0).amplitudes()), 1e-14);
}

TEST(GravityEvolve, FallsTowardNegativeX) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 1.0});
  EXPECT_NEAR(moment(gravity_evolve(psi, {1.0, 1.0}), 1), -0.5, 1e-8);
}

TEST(GravityEvolve, AlignedDensityIsShiftedFreeDensity) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.3, 1.0});
  const EvolutionParams p{kAlignedG, 1.0, 1.0, true};
  const WaveFunction fallen = gravity_evolve(psi, p);
  const WaveFunction free = free_evolve(psi, 1.0);
  const ComplexVector shifted = shift_cells(free.amplitudes(), -4);
  EXPECT_LT(max_abs_diff(fallen.density(), WaveFunction(g, shifted, 1.0).density()), 1e-12);
  EXPECT_NEAR(fallen.norm_squared(), 1.0, 1e-12);
}

TEST(GravityEvolve, KickPastMomentumBandIsRejected) {
  // p_max = 40: a kick of m g t = 50 cannot be represented.
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 100.0, {0.0, 0.0, 1.0});
  EXPECT_THROW(gravity_evolve(psi, {0.5, 1.0}), AliasingError);
  EXPECT_NO_THROW(gravity_evolve(psi, {0.3, 1.0}));
  EXPECT_THROW(weyl_translate(psi, 45.0, 0.0), AliasingError);
  EXPECT_THROW(split_step_evolve(psi, 50.0, 1.0, 16), AliasingError);
}

TEST(GravityEvolve, ExactnessRequiresAlignedDrop) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 1.0});
  EXPECT_THROW(gravity_evolve(psi, {0.5, 1.0, 1.0, true}), InvalidArgument);
  EXPECT_NO_THROW(gravity_evolve(psi, {0.5, 1.0, 1.0, false}));
}

TEST(GravityEvolve, DispersionMatchesFreeEvolution) {
  const Grid1D g = aligned_grid();
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const WaveFunction psi = testing::random_state(rng, g, 1.0);
    for (double gv : {0.3, kAlignedG, 1.1}) {
      EXPECT_NEAR(dispersion(gravity_evolve(psi, {gv, 1.0})), dispersion(free_evolve(psi, 1.0)), 1e-10);
    }
  }
}

TEST(GravityEvolve, ShortTimeLooksLikeRigidTranslation) {
  // t = 0.1 m sigma^2 with an aligned drop of one cell.
  const Grid1D g = aligned_grid();
  const double t = 0.1;
  const double gv = 2.0 * g.dx() / (t * t);
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 1.0});
  const RealVector evolved = gravity_evolve(psi, {gv, t}).density();
  const RealVector rigid = WaveFunction(g, shift_cells(psi.amplitudes(), -1), 1.0).density();
  const double peak = *std::max_element(rigid.begin(), rigid.end());
  EXPECT_LT(testing::max_abs_diff(evolved, rigid) / peak, 0.01);
}

TEST(GravityEvolve, MassRatioScalesTheFall) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 1.0});
  EXPECT_NEAR(moment(gravity_evolve(psi, {1.0, 1.0, 1.1}), 1), -0.55, 1e-8);
}

TEST(Weyl, IdentityAndCellShift) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.4, 1.0});
  EXPECT_LT(max_abs_diff(weyl_translate(psi, 0.0, 0.0).amplitudes(), psi.amplitudes()), 1e-15);
  const WaveFunction moved = weyl_translate(psi, 0.0, 5.0 * g.dx());
  EXPECT_LT(max_abs_diff(moved.amplitudes(), shift_cells(psi.amplitudes(), 5)), 1e-15);
}

TEST(Weyl, Unitary) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.4, 1.0});
  EXPECT_NEAR(weyl_translate(psi, 1.7, 2.3).norm_squared(), 1.0, 1e-12);
}

TEST(Weyl, SymmetricOrderingMatchesDefinition) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 1.0});
  const double a = 0.8;
  const double b = 3.0 * g.dx();
  const WaveFunction out = weyl_translate(psi, a, b);
  for (std::size_t k = 10; k < g.size(); k += 97) {
    const Complex want = std::polar(1.0, -a * b / 2.0 + a * g.x(k)) * psi.amplitudes()[k - 3];
    EXPECT_NEAR(std::abs(out.amplitudes()[k] - want), 0.0, 1e-15);
  }
}

TEST(Weyl, GravityCompositionDiffersByGlobalPhaseOnly) {
  const Grid1D g = aligned_grid();
  std::mt19937_64 rng(3);
  const WaveFunction psi = testing::random_state(rng, g, 1.3);
  const EvolutionParams p{kAlignedG, 1.0};
  const WaveFunction direct = gravity_evolve(psi, p);
  const WaveFunction composed = gravity_via_weyl(psi, p);
  EXPECT_LT(max_density_diff(direct, composed), 1e-12);

  const Complex offset = std::polar(1.0, weyl_phase_offset(1.3, p));
  ComplexVector rotated(direct.values());
  for (Complex& a : rotated) a *= offset;
  EXPECT_LT(max_abs_diff(rotated, composed.amplitudes()), 1e-12);
}

TEST(EnergyEigenfunction, PurePhaseWithFixedModulus) {
  const double m = 2.0;
  const double gv = 0.7;
  for (double p : {-3.0, -0.1, 0.0, 2.5}) {
    EXPECT_NEAR(std::norm(energy_eigenfunction_p(1.3, p, m, gv)), 1.0 / (2.0 * std::numbers::pi * m * gv), 1e-14);
  }
  EXPECT_THROW(energy_eigenfunction_p(1.0, 0.0, 1.0, 0.0), InvalidArgument);
}

TEST(EnergyEigenfunction, SatisfiesMomentumSpaceEigenvalueEquation) {
  const double m = 1.5;
  const double gv = 0.8;
  const double e = 0.6;
  const double h = 1e-4;
  for (double p = -2.0; p <= 2.0; p += 0.25) {
    const Complex u = energy_eigenfunction_p(e, p, m, gv);
    const Complex du = (energy_eigenfunction_p(e, p + h, m, gv) - energy_eigenfunction_p(e, p - h, m, gv)) / (2.0 * h);
    const Complex residual = (m + p * p / (2.0 * m)) * u + Complex{0.0, m * gv} * du - (m + e) * u;
    EXPECT_LT(std::abs(residual), 1e-6 * std::abs(u)) << "p=" << p;
  }
}

TEST(EnergyEigenfunction, WindowedOverlapPeaksOnTheDiagonal) {
  const double m = 1.0;
  const double gv = 1.0;
  const double width = 20.0;
  const Complex diagonal = energy_overlap(0.4, 0.4, m, gv, width);
  // Hann window integrates to the half-width.
  EXPECT_NEAR(diagonal.real(), width / (2.0 * std::numbers::pi * m * gv), 1e-6);
  EXPECT_NEAR(diagonal.imag(), 0.0, 1e-12);
  double previous = std::abs(diagonal);
  for (double de : {0.05, 0.1, 0.2}) {
    const double off = std::abs(energy_overlap(0.4, 0.4 + de, m, gv, width));
    EXPECT_LT(off, previous);
    previous = off;
  }
  EXPECT_LT(std::abs(energy_overlap(0.4, 0.4 + 5.0, m, gv, width)), 1e-2 * std::abs(diagonal));
}

TEST(SplitStep, ZeroForceMatchesFreeEvolution) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.5, 1.0});
  EXPECT_LT(max_abs_diff(split_step_evolve(psi, 0.0, 2.0, 256).amplitudes(), free_evolve(psi, 2.0).amplitudes()),
            1e-10);
}

TEST(SplitStep, LinearPotentialMatchesAnalyticDensity) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 1.0});
  const WaveFunction exact = gravity_evolve(psi, {kAlignedG, 1.0});
  const WaveFunction split = split_step_evolve(psi, kAlignedG, 1.0, 1024);
  EXPECT_LT(max_density_diff(exact, split), 1e-6);
  EXPECT_NEAR(split.norm_squared(), 1.0, 1e-12);
}

TEST(SplitStep, SecondOrderConvergence) {
  const Grid1D g = aligned_grid();
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 1.0});
  const WaveFunction exact = gravity_evolve(psi, {kAlignedG, 1.0});
  double previous = 0.0;
  for (std::size_t steps : {64, 128, 256}) {
    const double err = max_abs_diff(split_step_evolve(psi, kAlignedG, 1.0, steps).amplitudes(), exact.amplitudes());
    if (previous > 0.0) EXPECT_NEAR(previous / err, 4.0, 0.2) << steps;
    previous = err;
  }
}

TEST(SplitStep, CouplingConstantActsAsGravitationalMass) {
  // (lambda/m) U(x) with U = g x is a field g on a gravitational mass lambda/m.
  const Grid1D g = aligned_grid();
  const double m = 2.0;
  const double lambda = 4.4;
  const WaveFunction psi = gaussian_packet(g, m, {0.0, 0.0, 1.0});
  const WaveFunction split = split_step_evolve(psi, appendix_kappa(lambda, kAlignedG, m), 1.0, 1024);
  const WaveFunction exact = gravity_evolve(psi, {kAlignedG, 1.0, lambda / (m * m)});
  EXPECT_LT(max_density_diff(exact, split), 1e-6);
}

TEST(VersionA, GaussianAndCatPass) {
  const Grid1D g = aligned_grid();
  const EvolutionParams p{kAlignedG, 1.0};
  const EPReport gauss = check_version_a(gaussian_packet(g, 1.0, {0.0, 0.3, 1.0}), p, 1e-12);
  EXPECT_TRUE(gauss.passed);
  EXPECT_LT(gauss.max_density_mismatch, 1e-12);
  EXPECT_NEAR(gauss.measured_shift, 0.3125, 1e-12);

  const std::vector<PacketSpec> specs{{5.0, 0.0, 1.0, {1.0, 0.0}}, {-5.0, 0.0, 1.0, {1.0, 0.0}}};
  const EPReport cat = check_version_a(cat_state(g, 1.0, specs), p, 1e-12);
  EXPECT_TRUE(cat.passed);
  EXPECT_LT(cat.max_density_mismatch, 1e-12);
  ASSERT_EQ(cat.moment_table.size(), 3u);
  for (const MomentRow& row : cat.moment_table) EXPECT_LT(row.mismatch, 1e-9);
}

TEST(VersionA, ViolationIsFlagged) {
  const Grid1D g = aligned_grid();
  const EPReport r = check_version_a(gaussian_packet(g, 1.0, {0.0, 0.0, 1.0}), {kAlignedG, 1.0, 1.1}, 1e-12);
  EXPECT_TRUE(r.ep_violation);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.measured_shift, 1.1 * 0.3125, 1e-8);
}

TEST(VersionA, RequiresAlignedShift) {
  const Grid1D g = aligned_grid();
  EXPECT_THROW(check_version_a(gaussian_packet(g, 1.0, {0.0, 0.0, 1.0}), {0.5, 1.0}, 1e-12), InvalidArgument);
}

TEST(VersionA, MeasuredShiftIsMassIndependent) {
  const Grid1D g = aligned_grid();
  const EvolutionParams p{kAlignedG, 2.0};
  std::vector<double> shifts;
  // The kick m g t must stay inside the momentum band (p_max = 40).
  for (double m : {1.0, 5.0, 20.0}) {
    shifts.push_back(check_version_a(gaussian_packet(g, m, {0.0, 0.0, 1.5}), p, 1e-12).measured_shift);
  }
  for (double s : shifts) EXPECT_LT(testing::relative(s, shifts.front()), 1e-12);
}

TEST(VersionB, EqualMassIsIdentical) {
  const Grid1D g = make_grid(-20.0, 20.0, 256);
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 1.5});
  const EPReport r = check_version_b(psi, 1.0, {0.5, 1.0}, 1e-8);
  EXPECT_LT(r.velocity_wigner_mismatch, 1e-14);
  EXPECT_LT(r.max_density_mismatch, 1e-14);
  EXPECT_FALSE(r.ep_violation);
  EXPECT_TRUE(r.passed);
}

TEST(VersionB, VelocityShiftIsMassIndependent) {
  const Grid1D g = make_grid(-30.0, 30.0, 512);
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 2.0});
  const EPReport r = check_version_b(psi, 10.0, {0.5, 1.0}, 1e-8);
  EXPECT_NEAR(r.velocity_shift_1, -0.5, 1e-10);
  EXPECT_NEAR(r.velocity_shift_2, -0.5, 1e-10);
  EXPECT_FALSE(r.ep_violation);
}

TEST(VersionB, ViolationModeIsFlagged) {
  const Grid1D g = make_grid(-30.0, 30.0, 512);
  const WaveFunction psi = gaussian_packet(g, 1.0, {0.0, 0.0, 2.0});
  const EPReport r = check_version_b(psi, 10.0, {0.5, 1.0, 1.1}, 1e-8);
  EXPECT_TRUE(r.ep_violation);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.velocity_shift_2, -0.55, 1e-10);
}

}  // namespace
}  // namespace qfall
