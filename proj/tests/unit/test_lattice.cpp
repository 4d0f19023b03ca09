#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "bfmix/error.hpp"
#include "bfmix/lattice.hpp"
#include "bfmix/lune_cache.hpp"
#include "helpers.hpp"

using namespace bfmix;
using bfmix::lattice::Rational;

namespace {

FermiRadius kf(std::int64_t n) { return FermiRadius::from_squared(n); }

}  // namespace

TEST(Lattice, ExactRationalValues) {
    EXPECT_EQ(lattice::resolvent_sum_exact(1, {1, 0, 0}, kf(1)), Rational(13, 3));
    EXPECT_EQ(lattice::resolvent_sum_exact(2, {1, 0, 0}, kf(1)), Rational(37, 9));
    EXPECT_EQ(lattice::resolvent_sum_exact(1, {1, 1, 0}, kf(2)), Rational(11, 3));
    EXPECT_EQ(lattice::resolvent_sum_exact(2, {1, 1, 0}, kf(2)), Rational(101, 72));
    EXPECT_EQ(lattice::resolvent_sum_exact(1, {2, 0, 0}, kf(5)), Rational(145, 24));
    EXPECT_EQ(lattice::resolvent_sum_exact(1, {1, 2, 3}, kf(10)), Rational(77689121, 8168160));
    EXPECT_EQ(lattice::resolvent_sum_exact(3, {1, 0, 0}, kf(3)), Rational(1, 3));
}

TEST(Lattice, FloatMatchesExact) {
    EXPECT_NEAR(lattice::resolvent_sum(1.0, {1, 0, 0}, kf(1)), 13.0 / 3.0, 1e-12);
    EXPECT_NEAR(lattice::resolvent_sum(2.0, {1, 0, 0}, kf(1)), 37.0 / 9.0, 1e-12);
    EXPECT_NEAR(lattice::resolvent_sum(1.0, {1, 2, 3}, kf(10)), 9.511214398346752, 1e-12);
}

TEST(Lattice, ZeroMomentumGivesZero) {
    EXPECT_EQ(lattice::resolvent_sum(1.0, {0, 0, 0}, kf(25)), 0.0);
    EXPECT_EQ(lattice::resolvent_sum_exact(1, {0, 0, 0}, kf(25)), Rational(0));
    EXPECT_TRUE(lattice::lune_points({0, 0, 0}, kf(25)).empty());
}

TEST(Lattice, AgreesWithBruteForceBox) {
    for (std::int64_t n : {1, 2, 3, 7, 12, 30})
        for (const Vec3i& k : {Vec3i{1, 0, 0}, Vec3i{1, 1, 0}, Vec3i{2, 1, 0}, Vec3i{1, 1, 1}, Vec3i{3, 0, 1}})
            for (int alpha : {1, 2}) {
                const double ref = oracle::brute_lune_sum(alpha, k, n);
                EXPECT_NEAR(lattice::resolvent_sum_direct(alpha, k, kf(n)).value, ref, 1e-12 * std::max(1.0, ref))
                    << "k=" << k.x << k.y << k.z << " kf2=" << n << " alpha=" << alpha;
            }
}

TEST(Lattice, CubicSymmetryProperty) {
    const auto K = kf(41);
    const Vec3i k{3, 1, 2};
    const double d = lattice::resolvent_sum_direct(1.0, k, K).value;
    const Vec3i images[] = {{-3, -1, -2}, {1, 3, 2}, {2, 1, 3}, {-3, 1, 2}, {3, -1, -2}, {-1, -2, -3}};
    for (const auto& g : images) EXPECT_NEAR(lattice::resolvent_sum(1.0, g, K), d, 1e-12 * d);
}

TEST(Lattice, LunePointsSatisfyDefinition) {
    const auto K = kf(10);
    const Vec3i k{2, 1, 0};
    const auto pts = lattice::lune_points(k, K);
    ASSERT_FALSE(pts.empty());
    for (const auto& p : pts) {
        EXPECT_GT(p.norm2(), 10);
        EXPECT_LE((p - k).norm2(), 10);
    }
    EXPECT_EQ(std::int64_t(pts.size()), lattice::resolvent_sum_entry(1.0, k, K).count);
}

TEST(Lattice, FermiBallCountsAndEnergy) {
    const auto ball = lattice::fermi_ball(kf(1));
    EXPECT_EQ(ball.M, 7);
    EXPECT_EQ(ball.E_F, 6);
    EXPECT_EQ(lattice::fermi_ball(kf(2)).M, 19);
}

TEST(Lattice, NonIntegerFermiRadius) {
    const auto K = FermiRadius::from_value(1.5);
    EXPECT_FALSE(K.exact());
    // |p|^2 <= 2.25 is the same shell as k_F^2 = 2
    EXPECT_NEAR(lattice::resolvent_sum(1.0, {1, 0, 0}, K), lattice::resolvent_sum(1.0, {1, 0, 0}, kf(2)), 1e-12);
}

TEST(Lattice, CacheDirectoryRoundTrip) {
    auto& table = lattice::LuneSumTable::global();
    const auto dir = std::filesystem::temp_directory_path() / "bfmix_lune_cache_test";
    std::filesystem::remove_all(dir);
    table.set_directory(dir);
    table.clear();
    const double cold = lattice::resolvent_sum(1.0, {2, 1, 1}, kf(17));
    const auto key = lattice::make_lune_key(1.0, {2, 1, 1}, kf(17));
    const auto file = dir / lattice::LuneSumTable::file_name(key);
    ASSERT_TRUE(std::filesystem::exists(file));
    std::ifstream in(file);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "alpha,kx,ky,kz,kF_squared,value,count");

    table.clear();
    const auto before = table.stats().disk_hits;
    const double warm = lattice::resolvent_sum(1.0, {-1, -2, 1}, kf(17));  // same canonical key
    EXPECT_EQ(table.stats().disk_hits, before + 1);
    EXPECT_EQ(cold, warm);
    table.set_directory(std::nullopt);
    table.clear();
    std::filesystem::remove_all(dir);
}

TEST(Lattice, SummationFormulaWithinErrorScale) {
    for (std::int64_t n : {100, 400})
        for (const Vec3i& k : {Vec3i{1, 0, 0}, Vec3i{1, 1, 0}, Vec3i{1, 1, 1}, Vec3i{2, 0, 0}})
            for (double alpha : {1.0, 2.0}) {
                const auto f = lattice::summation_formula(k, kf(n), alpha);
                EXPECT_LE(std::abs(f.main_term + f.boundary_term - lattice::resolvent_sum(alpha, k, kf(n))),
                          f.error_scale);
            }
}

TEST(Lattice, SummationFormulaParams) {
    const auto p = lattice::summation_formula_params({2, 2, 0}, kf(100));
    EXPECT_EQ(p.gcd, 2);
    EXPECT_NEAR(p.ell, 2.0 / std::sqrt(8.0), 1e-15);
    EXPECT_EQ(p.m_star, 3);
    EXPECT_EQ(p.M, 14);  // floor(sqrt(800)) / 2
    EXPECT_THROW(lattice::summation_formula_params({0, 0, 0}, kf(100)), OutOfRange);
}

TEST(Lattice, AsymptoticsReportColumns) {
    const auto rows = lattice::asymptotics_report({{1, 0, 0}}, {kf(100)});
    ASSERT_EQ(rows.size(), 1u);
    const auto& r = rows[0];
    EXPECT_NEAR(r.ratio, r.D1 / (2.0 * oracle::kPi * 10.0), 1e-15);
    EXPECT_NEAR(r.normalized_deviation, std::abs(r.ratio - 1.0) * std::pow(10.0, 1.0 / 3.0) /
                                            std::pow(std::log(10.0), 5.0 / 3.0), 1e-12);
    EXPECT_FALSE(r.large_k);
}
