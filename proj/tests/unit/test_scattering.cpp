#include <cmath>

#include <gtest/gtest.h>

#include "bfmix/error.hpp"
#include "bfmix/scattering.hpp"
#include "helpers.hpp"

using namespace bfmix;
using oracle::kPi;

TEST(Scattering, SquareBarrierClosedForm) {
    // u'' = (1/2) w u with w = 2 on r <= 1: a = 1 - tanh(1)
    const auto r = scattering::scattering_length(RadialPotential::indicator(1.0, 2.0));
    EXPECT_NEAR(r.a, 1.0 - std::tanh(1.0), 1e-6);
    EXPECT_NEAR(r.a_integral, r.a, 1e-6);
    EXPECT_FALSE(r.bound_state_crossing);
}

TEST(Scattering, BarrierOfRadiusTwo) {
    const double h = 0.5;  // w = 2 h on r <= 2: a = 2 - tanh(2 sqrt(h)) / sqrt(h)
    const auto r = scattering::scattering_length(RadialPotential::indicator(2.0, 2.0 * h));
    EXPECT_NEAR(r.a, 2.0 - std::tanh(2.0 * std::sqrt(h)) / std::sqrt(h), 1e-6);
}

TEST(Scattering, BornLimit) {
    const double t = 1e-3;
    const auto w = RadialPotential::indicator(1.0, 2.0 * t);
    const auto r = scattering::scattering_length(w);
    // a ~ (1 / 8 pi) int w = t / 3
    EXPECT_NEAR(r.a / (w.integral_3d() / (8.0 * kPi)), 1.0, 1e-3);
}

TEST(Scattering, ZeroPotential) {
    EXPECT_EQ(scattering::scattering_length(RadialPotential::indicator(1.0, 0.0)).a, 0.0);
}

TEST(Scattering, AttractiveWellReportsBoundStateCrossing) {
    // deep well past the first zero-energy resonance
    const auto r = scattering::scattering_length(RadialPotential::indicator(1.0, -2.0 * 16.0));
    EXPECT_TRUE(r.bound_state_crossing);
}

TEST(Scattering, RadialConvolutionAtOriginIsL2Norm) {
    const auto v = RadialPotential::sample([](double r) { return 1.0 - r; }, 1.0, 65);
    EXPECT_NEAR(scattering::radial_convolution_at(v, v, 0.0), v.l2_norm_sq(), 1e-10);
    const auto vv = scattering::radial_convolution(v, v);
    EXPECT_NEAR(vv(0.0), v.l2_norm_sq(), 1e-9);
    EXPECT_NEAR(vv.r_max(), 2.0, 1e-15);
}

TEST(Scattering, IndicatorSelfConvolutionClosedForm) {
    // overlap volume of two unit balls at distance r: pi (4 + r)(2 - r)^2 / 12
    const auto v = RadialPotential::indicator(1.0);
    for (double r : {0.0, 0.3, 1.0, 1.7})
        EXPECT_NEAR(scattering::radial_convolution_at(v, v, r), kPi * (4.0 + r) * (2.0 - r) * (2.0 - r) / 12.0, 1e-9);
}

TEST(Scattering, CriticalCouplingsForScaledSelfConvolution) {
    const auto v = RadialPotential::indicator(1.0);
    const auto vv = scattering::radial_convolution(v, v);
    for (double alpha : {0.5, 2.0}) {
        const auto c = scattering::critical_couplings(vv.scaled(alpha), v, vv);
        EXPECT_NEAR(c.g0, std::sqrt(alpha), 1e-6);
        EXPECT_NEAR(c.g_star, alpha, 1e-9);
        EXPECT_LE(c.g0, c.g_star_sqrt + 1e-12);
    }
}

TEST(Scattering, EnergyCurveFlagsAndEg2) {
    const auto w = RadialPotential::indicator(1.0, 2.0);
    const auto v = RadialPotential::indicator(0.5, 1.0);
    const auto pd = scattering::energy_curve(w, v, {0.0, 0.5, 1.0});
    ASSERT_EQ(pd.points.size(), 3u);
    EXPECT_NEAR(pd.points[0].a, 1.0 - std::tanh(1.0), 1e-6);
    const double iw = w.integral_3d(), iv = v.integral_3d();
    EXPECT_NEAR(pd.points[1].eg2, 4.0 * kPi * (iw - 0.25 * iv * iv), 1e-12);
    // a is nonincreasing in g below g0
    for (std::size_t i = 1; i < pd.points.size(); ++i)
        if (!pd.points[i].above_g0) EXPECT_LE(pd.points[i].a, pd.points[i - 1].a + 1e-9);
}

TEST(Scattering, CollapseNonnegativeWithoutCoupling) {
    const auto psi = RadialPotential::sample([](double r) { return std::exp(-r * r); }, 3.0, 61);
    const auto w = RadialPotential::indicator(1.0, 1.0);
    const auto v = RadialPotential::indicator(1.0, 1.0);
    const auto t = scattering::collapse_energy(psi, w, v, 0.0, {8, 16, 32, 64});
    for (double e : t.energy_per_particle) EXPECT_GE(e, 0.0);
    EXPECT_TRUE(std::isnan(t.slope));
}

TEST(Scattering, CollapseIsQuadraticInCoupling) {
    const auto psi = RadialPotential::sample([](double r) { return std::exp(-r * r); }, 3.0, 61);
    const auto w = RadialPotential::indicator(1.0, 1.0);
    const auto v = RadialPotential::indicator(1.0, 1.0);
    const double p0 = scattering::collapse_energy(psi, w, v, 0.0, {8}).pair_integral;
    const double p1 = scattering::collapse_energy(psi, w, v, 1.0, {8}).pair_integral;
    const double p2 = scattering::collapse_energy(psi, w, v, 2.0, {8}).pair_integral;
    // second difference in g^2 vanishes: p(g^2 = 4) - p0 = 4 (p(g^2 = 1) - p0)
    EXPECT_NEAR(p2 - p0, 4.0 * (p1 - p0), 1e-12 * std::abs(p2));
}

TEST(Scattering, CollapseEnergyMatchesProductStateFormula) {
    const auto psi = RadialPotential::sample([](double r) { return std::exp(-r * r); }, 3.0, 61);
    const auto w = RadialPotential::indicator(1.0, 1.0);
    const auto v = RadialPotential::indicator(1.0, 1.0);
    const auto t = scattering::collapse_energy(psi, w, v, 3.0, {8, 16});
    for (std::size_t i = 0; i < t.N.size(); ++i) {
        const double n = t.N[i];
        EXPECT_NEAR(t.energy_per_particle[i], n * n * t.kinetic + 0.5 * n * n * (n - 1.0) * t.pair_integral,
                    1e-12 * std::abs(t.energy_per_particle[i]));
    }
}

TEST(Scattering, LogLogSlope) {
    EXPECT_NEAR(scattering::fit_loglog_slope({1, 2, 4, 8}, {3, 24, 192, 1536}), 3.0, 1e-12);
    EXPECT_TRUE(std::isnan(scattering::fit_loglog_slope({1, 2}, {1, -1})));
    EXPECT_THROW(scattering::fit_loglog_slope({1}, {1}), InvalidParameter);
}
