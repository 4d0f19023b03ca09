#include <cmath>

#include <gtest/gtest.h>

#include "bfmix/error.hpp"
#include "bfmix/lattice.hpp"
#include "bfmix/potential_io.hpp"
#include "bfmix/potentials.hpp"
#include "helpers.hpp"

using namespace bfmix;
using oracle::kPi;

namespace {

const double kTwoPi32 = std::pow(2.0 * kPi, 1.5);

// Trapezoidal torus integral of f(x) * g(x) on an n^3 grid.
double grid_inner(const std::vector<double>& f, const std::vector<double>& g, int n) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return s * std::pow(2.0 * kPi / n, 3);
}

std::vector<double> cos_x_grid(int n) {
    std::vector<double> out;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) out.push_back(std::cos(2.0 * kPi * x / n));
    return out;
}

}  // namespace

TEST(Potentials, SymmetrizationAndValidation) {
    const auto V = FourierPotential::from_coefficients({{{1, 0, 0}, 0.5}}, 1);
    EXPECT_EQ(V.coefficient({1, 0, 0}), 0.5);
    EXPECT_EQ(V.coefficient({-1, 0, 0}), 0.5);
    EXPECT_TRUE(FourierPotential::from_coefficients({}, 2).is_zero());
    EXPECT_THROW(FourierPotential::from_coefficients({{{1, 0, 0}, 1.0}, {{-1, 0, 0}, 3.0}}, 1), ValidationError);
    EXPECT_THROW(FourierPotential::from_coefficients({{{2, 0, 0}, 1.0}}, 1), ValidationError);
}

TEST(Potentials, ValueAtUsesTorusNormalization) {
    const auto V = oracle::cos_mode(0.7);
    // (2 pi)^{-3/2} * 2 * 0.7 * cos(x)
    EXPECT_NEAR(V.value_at(0.3, 1.0, 2.0), 2.0 * 0.7 * std::cos(0.3) / kTwoPi32, 1e-15);
}

TEST(Potentials, MediatedPotentialCosAmplitudeByQuadrature) {
    // W_kF for V(+-e1) = c at kF^2 = 1 is A cos(x) with A = 13 c^2 / (3 pi); recovered by grid quadrature.
    const double c = 0.9;
    const auto W = potentials::effective_potential_kF(oracle::cos_mode(c), FermiRadius::from_squared(1)).base;
    const int n = 8;
    const double amplitude = grid_inner(potentials::evaluate_on_grid(W, n), cos_x_grid(n), n) / (4.0 * std::pow(kPi, 3));
    EXPECT_NEAR(amplitude, 13.0 * c * c / (3.0 * kPi), 1e-13);
    EXPECT_EQ(W.zero_mode(), 0.0);
}

TEST(Potentials, MediatedValueAtZero) {
    const double c = 0.9;
    const auto V = oracle::cos_mode(c);
    const auto kF = FermiRadius::from_squared(1);
    EXPECT_NEAR(potentials::effective_value_at_zero(V, kF), 2.0 * c * c * (13.0 / 3.0) / (2.0 * kPi), 1e-14);
    const auto W = potentials::effective_potential_kF(V, kF).base;
    EXPECT_NEAR(W.value_at(0, 0, 0), potentials::effective_value_at_zero(V, kF), 1e-14);
}

TEST(Potentials, ZeroPotentialGivesZeroMediated) {
    const auto W = potentials::effective_potential_kF(FourierPotential::zero(2), FermiRadius::from_squared(4)).base;
    EXPECT_TRUE(W.is_zero());
    EXPECT_EQ(potentials::sup_difference(FourierPotential::zero(2), FermiRadius::from_squared(4)).upper, 0.0);
}

TEST(Potentials, SupDifferenceSingleModeFormula) {
    const double c = 0.6;
    for (std::int64_t n : {1, 4, 9}) {
        const auto kF = FermiRadius::from_squared(n);
        const double D1 = oracle::brute_lune_sum(1, {1, 0, 0}, n);
        const auto s = potentials::sup_difference(oracle::cos_mode(c), kF);
        EXPECT_NEAR(s.upper, 2.0 * c * c * std::abs(D1 / (2.0 * kPi * kF.value()) - 1.0), 1e-13);
        EXPECT_LE(s.grid_lower, s.upper + 1e-14);
    }
}

TEST(Potentials, ConvolutionTheoremOnGrid) {
    const auto V = FourierPotential::from_coefficients({{{1, 0, 0}, 0.4}, {{0, 1, 1}, -0.3}, {{0, 0, 0}, 0.2}}, 1);
    const auto U = FourierPotential::from_coefficients({{{1, 0, 0}, 1.1}, {{0, 1, 1}, 0.5}, {{1, 1, 0}, 0.7}}, 1);
    const int n = 6;
    const auto gv = potentials::evaluate_on_grid(V, n), gu = potentials::evaluate_on_grid(U, n);
    const auto gc = potentials::evaluate_on_grid(potentials::convolve(V, U), n);
    auto at = [n](int x, int y, int z) { return (((x + n) % n) * n + (y + n) % n) * n + (z + n) % n; };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                double s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int d = 0; d < n; ++d) s += gv[at(x - a, y - b, z - d)] * gu[at(a, b, d)];
                EXPECT_NEAR(s * std::pow(2.0 * kPi / n, 3), gc[at(x, y, z)], 1e-12);
            }
}

TEST(Potentials, PlancherelIdentity) {
    const auto V = FourierPotential::from_coefficients({{{1, 0, 0}, 0.4}, {{2, 1, 0}, -0.3}, {{0, 0, 0}, 0.2}}, 2);
    const int n = 8;
    const auto g = potentials::evaluate_on_grid(V, n);
    double coeff = 0.0;
    for (const auto& [k, v] : V.entries()) coeff += v * v;
    EXPECT_NEAR(grid_inner(g, g, n), coeff, 1e-12);
}

TEST(Potentials, LimitIsWMinusSelfConvolution) {
    const auto V = oracle::cos_mode(0.5);
    const auto W = oracle::cos_mode(1.0);
    const auto eff = potentials::effective_potential_limit(W, V);
    EXPECT_FALSE(eff.kF.has_value());
    EXPECT_NEAR(eff.base.coefficient({1, 0, 0}), 1.0 - kTwoPi32 * 0.25, 1e-14);
}

TEST(Potentials, RadialProfileIndicatorClosedForm) {
    const double R = 1.0, g = 0.8;
    const auto P = potentials::from_radial_profile(RadialPotential::indicator(R), 2, g, 2);
    for (const Vec3i& k : {Vec3i{0, 0, 0}, Vec3i{1, 0, 0}, Vec3i{1, 1, 0}, Vec3i{2, 1, 1}}) {
        const double rho = std::sqrt(double(k.norm2())) / 2.0;
        const double vt = rho == 0.0 ? 4.0 * kPi * R * R * R / 3.0
                                     : 4.0 * kPi / (rho * rho * rho) * (std::sin(rho * R) - rho * R * std::cos(rho * R));
        EXPECT_NEAR(P.coefficient(k), g * vt / kTwoPi32, 1e-9);
    }
    EXPECT_THROW(potentials::from_radial_profile(RadialPotential::indicator(4.0), 1, 1.0, 1), OutOfRange);
    EXPECT_TRUE(potentials::from_radial_profile(RadialPotential::indicator(1.0), 1, 0.0, 1).is_zero());
}

TEST(Potentials, RadialProfileLinearInG) {
    const auto v = RadialPotential::sample([](double r) { return 1.0 - r * r; }, 1.0, 33);
    const auto a = potentials::from_radial_profile(v, 3, 1.0, 2);
    const auto b = potentials::from_radial_profile(v, 3, 2.5, 2);
    for (const auto& [k, x] : a.entries()) EXPECT_NEAR(b.coefficient(k), 2.5 * x, 1e-14);
}

TEST(Potentials, NormsAndQ) {
    const auto V = oracle::cos_mode(0.5);
    EXPECT_NEAR(potentials::sobolev_norm_sq(V, 2.0), 2.0 * 0.25 * 4.0, 1e-15);
    EXPECT_NEAR(potentials::l1_coefficients(V), 1.0, 1e-15);
    const auto inf = potentials::lp_norm(V, std::numeric_limits<double>::infinity());
    EXPECT_NEAR(inf.value, 1.0 / kTwoPi32, 1e-15);
    const double Q = potentials::q_parameter(V, V, std::numeric_limits<double>::infinity());
    EXPECT_NEAR(Q, 1.0 + 1.0 / kTwoPi32 + 2.0 * 0.25 * 16.0, 1e-14);
    const auto c = FourierPotential::from_coefficients({{{0, 0, 0}, kTwoPi32}}, 0);  // V = 1
    EXPECT_NEAR(potentials::lp_norm(c, 2.0).value, std::pow(2.0 * kPi, 1.5), 1e-10);
}

TEST(Potentials, LambdaCoupling) {
    EXPECT_NEAR(potentials::lambda_coupling(2, FermiRadius::from_squared(4)), 1.0 / std::sqrt(16.0 * kPi), 1e-15);
    EXPECT_THROW(potentials::lambda_coupling(0, FermiRadius::from_squared(4)), InvalidParameter);
}

TEST(PotentialIo, FourierRoundTripIsByteStable) {
    const auto V = FourierPotential::from_coefficients({{{1, 0, 0}, 0.25}, {{0, 2, 1}, -1.5}}, 2, "demo");
    const std::string text = io::fourier_to_json(V);
    const auto back = io::parse_fourier(text);
    EXPECT_EQ(io::fourier_to_json(back), text);
    EXPECT_EQ(back.coefficient({0, -2, -1}), -1.5);
}

TEST(PotentialIo, SchemaErrorsNameTheField) {
    try {
        io::parse_fourier(R"({"type":"fourier","coeffs":[]})");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "cutoff");
    }
    try {
        io::parse_fourier(R"({"type":"fourier","cutoff":1,"coeffs":[[1,0,0]]})");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "coeffs");
    }
    EXPECT_THROW(io::parse_radial(R"({"type":"radial","samples":[1,0]})"), ValidationError);
    EXPECT_THROW(io::parse_fourier("not json"), ValidationError);
}

TEST(PotentialIo, RadialNodesWithJump) {
    const auto w = io::parse_radial(R"({"type":"radial","grid":"nodes","r":[0,1,1],"samples":[2,2,0]})");
    EXPECT_EQ(w(0.5), 2.0);
    EXPECT_EQ(w(1.0), 2.0);
    EXPECT_EQ(w(1.5), 0.0);
    EXPECT_NEAR(w.integral_3d(), 8.0 * kPi / 3.0, 1e-14);
}
