#include <gtest/gtest.h>

#include "test_support.hpp"

namespace qfall {
namespace {

using testing::direct_dft;
using testing::max_abs_diff;

TEST(Grid, MakeGridArithmetic) {
  const Grid1D g = make_grid(-10.0, 10.0, 1024);
  EXPECT_DOUBLE_EQ(g.dx(), 20.0 / 1024.0);
  EXPECT_NEAR(g.dp(), 2.0 * std::numbers::pi / 20.0, 1e-15);
  EXPECT_NEAR(g.dx() * g.dp() * 1024.0, 2.0 * std::numbers::pi, 1e-13);
  EXPECT_DOUBLE_EQ(make_grid(0.0, 1.0, 16).dx(), 1.0 / 16.0);
}

TEST(Grid, MomentumLatticeIsCentred) {
  const Grid1D g = make_grid(0.0, 8.0, 64);
  EXPECT_DOUBLE_EQ(g.p(32), 0.0);
  EXPECT_DOUBLE_EQ(g.p(0), -g.p_max());
  EXPECT_NEAR(g.p_max(), std::numbers::pi / g.dx(), 1e-12);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(make_grid(0.0, 1.0, 17), InvalidArgument);
  EXPECT_THROW(make_grid(0.0, 1.0, 8), InvalidArgument);
  EXPECT_THROW(make_grid(1.0, 1.0, 16), InvalidArgument);
  EXPECT_THROW(Grid1D(0.0, -1.0, 16), InvalidArgument);
}

TEST(Dft, RoundTripIsIdentity) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  const Grid1D g = make_grid(-3.0, 5.0, 256);
  ComplexVector f(g.size());
  for (Complex& v : f) v = {normal(rng), normal(rng)};
  EXPECT_LT(max_abs_diff(dft_inverse(dft_forward(f, g), g), f), 1e-12);
}

TEST(Dft, MatchesDirectSummationOnOffsetGrid) {
  const Grid1D g(-7.3, 0.21, 64);
  ComplexVector f(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = testing::gaussian_value(g.x(k), -1.0, 2.0, 0.9);
  const ComplexVector fast = dft_forward(f, g);
  EXPECT_LT(max_abs_diff(fast, direct_dft(f, g)), 1e-13);

  double norm_p = 0.0;
  for (const Complex& a : fast) norm_p += std::norm(a);
  EXPECT_NEAR(norm_p * g.dp(), 1.0, 1e-10);
}

TEST(Dft, GaussianMapsToAnalyticMomentumGaussian) {
  const Grid1D g = make_grid(-20.0, 20.0, 512);
  const double sigma = 1.3;
  const double p0 = 0.7;
  ComplexVector f(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = testing::gaussian_value(g.x(k), 0.0, p0, sigma);
  const ComplexVector spectrum = dft_forward(f, g);
  const double sigma_p = 0.5 / sigma;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d = g.p(j) - p0;
    const double want = std::pow(2.0 * std::numbers::pi * sigma_p * sigma_p, -0.25) *
                        std::exp(-d * d / (4.0 * sigma_p * sigma_p));
    EXPECT_NEAR(std::abs(spectrum[j]), want, 1e-12);
  }
}

TEST(Dft, ConstantMapsToZeroMomentumBin) {
  const Grid1D g = make_grid(-4.0, 4.0, 32);
  const ComplexVector spectrum = dft_forward(ComplexVector(g.size(), Complex{1.0, 0.0}), g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j == g.size() / 2) {
      EXPECT_GT(std::abs(spectrum[j]), 1.0);
    } else {
      EXPECT_LT(std::abs(spectrum[j]), 1e-13);
    }
  }
}

TEST(Dft, ParsevalOnRandomInput) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  const Grid1D g = make_grid(-1.0, 3.0, 128);
  ComplexVector f(g.size());
  for (Complex& v : f) v = {normal(rng), normal(rng)};
  double nx = 0.0;
  double np = 0.0;
  for (const Complex& v : f) nx += std::norm(v);
  for (const Complex& v : dft_forward(f, g)) np += std::norm(v);
  EXPECT_NEAR(nx * g.dx(), np * g.dp(), 1e-12 * nx * g.dx());
}

TEST(Dft, LengthMismatchThrows) {
  const Grid1D g = make_grid(0.0, 1.0, 16);
  EXPECT_THROW(dft_forward(ComplexVector(8), g), InvalidArgument);
}

TEST(Quad, Examples) {
  EXPECT_DOUBLE_EQ(quad(RealVector(16, 1.0), 1.0 / 16.0), 1.0);
  EXPECT_EQ(quad(RealVector(16, 0.0), 0.1), 0.0);

  const Grid1D g = make_grid(-12.0, 12.0, 256);
  RealVector rho(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) rho[k] = std::norm(testing::gaussian_value(g.x(k), 0.3, 0.0, 1.1));
  EXPECT_NEAR(quad(rho, g.dx()), 1.0, 1e-10);
}

TEST(Simpson, ExactForQuadraticsOnNonUniformNodes) {
  RealVector nodes{0.0, 0.1, 0.35, 0.4, 0.8, 1.3, 1.31, 2.0};  // odd interval count
  RealVector values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = 3.0 * nodes[i] * nodes[i] - nodes[i] + 2.0;
  // Int_0^2 (3x^2 - x + 2) dx = 8 - 2 + 4
  EXPECT_NEAR(simpson(nodes, values), 10.0, 1e-13);
  nodes.pop_back();
  values.pop_back();
  const double b = nodes.back();
  EXPECT_NEAR(simpson(nodes, values), b * b * b - 0.5 * b * b + 2.0 * b, 1e-13);
}

TEST(ThreePointDerivative, ExactForQuadratics) {
  const RealVector nodes{0.0, 0.2, 0.25, 0.9, 1.0, 1.7};
  RealVector values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = 0.5 * 9.81 * nodes[i] * nodes[i];
  const RealVector d = three_point_derivative(nodes, values);
  for (std::size_t i = 0; i < nodes.size(); ++i) EXPECT_NEAR(d[i], 9.81 * nodes[i], 1e-12);
}

TEST(Leakage, GuardTripsNearTheEdge) {
  const Grid1D g = make_grid(-10.0, 10.0, 256);
  ComplexVector f(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = testing::gaussian_value(g.x(k), 9.5, 0.0, 0.5);
  EXPECT_GT(boundary_probability(f, g), 1e-10);
  EXPECT_THROW(check_leakage(f, g, "test"), LeakageError);

  for (std::size_t k = 0; k < g.size(); ++k) f[k] = testing::gaussian_value(g.x(k), 0.0, 0.0, 0.5);
  EXPECT_NO_THROW(check_leakage(f, g, "test"));
}

TEST(Translate, AlignedShiftIsIndexShift) {
  const Grid1D g = make_grid(-8.0, 8.0, 64);
  ComplexVector f(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = {static_cast<double>(k), 0.0};
  const ComplexVector out = translate(f, g, 3.0 * g.dx());
  for (std::size_t k = 3; k < g.size(); ++k) EXPECT_EQ(out[k], f[k - 3]);
}

TEST(Translate, FractionalShiftMatchesAnalyticGaussian) {
  const Grid1D g = make_grid(-20.0, 20.0, 256);
  ComplexVector f(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = testing::gaussian_value(g.x(k), 0.0, 0.4, 1.0);
  const double shift = 0.37 * g.dx() + 1.0;
  const ComplexVector out = translate(f, g, shift);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(std::abs(out[k] - testing::gaussian_value(g.x(k), shift, 0.4, 1.0)), 0.0, 1e-12);
  }
}

TEST(Upsample, HalfCellSamplesMatchAnalyticFunction) {
  const Grid1D g = make_grid(-15.0, 15.0, 128);
  ComplexVector f(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) f[k] = testing::gaussian_value(g.x(k), 1.0, -0.8, 1.2);
  const ComplexVector fine = upsample2(f, g);
  ASSERT_EQ(fine.size(), 2 * g.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const double x = g.x_min() + 0.5 * g.dx() * static_cast<double>(i);
    EXPECT_NEAR(std::abs(fine[i] - testing::gaussian_value(x, 1.0, -0.8, 1.2)), 0.0, 1e-12);
  }
}

TEST(Fft, RejectsNonPowerOfTwo) {
  ComplexVector data(12);
  EXPECT_THROW(detail::fft_inplace(data, true), InvalidArgument);
}

}  // namespace
}  // namespace qfall
