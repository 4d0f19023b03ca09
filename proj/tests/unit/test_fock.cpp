#include <cmath>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bfmix/dense_fock.hpp"
#include "bfmix/error.hpp"
#include "bfmix/fock_basis.hpp"
#include "bfmix/hashing.hpp"
#include "bfmix/operators.hpp"
#include "bfmix/potentials.hpp"
#include "helpers.hpp"

using namespace bfmix;

namespace {

FermiRadius kf1() { return FermiRadius::from_squared(1); }

ModeSet six_modes() { return ModeSet({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {2, 0, 0}, {-2, 0, 0}, {0, 2, 0}}, kf1()); }

ModeSet three_bosons() { return ModeSet({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}}, std::nullopt); }

FourierPotential demo_V() {
    return FourierPotential::from_coefficients(
        {{{1, 0, 0}, 0.7}, {{0, 0, 0}, 0.3}, {{2, 0, 0}, 0.2}}, 2);
}

FourierPotential demo_W() { return FourierPotential::from_coefficients({{{1, 0, 0}, 0.5}, {{0, 0, 0}, 1.1}}, 2); }

FourierPotential random_sparse(std::uint64_t seed) {
    std::vector<FourierPotential::Entry> e;
    const Vec3i pool[] = {{1, 0, 0}, {2, 0, 0}, {1, 2, 0}, {3, 0, 0}, {0, 2, 0}, {2, 2, 0}};
    for (int i = 0; i < 6; ++i)
        if (counter_uniform(seed, std::uint64_t(i)) < 0.5) e.emplace_back(pool[i], counter_normal(seed, 10 + i));
    e.emplace_back(Vec3i{0, 0, 0}, counter_normal(seed, 20));
    return FourierPotential::from_coefficients(e, 3);
}

}  // namespace

TEST(FockBasis, Dimensions) {
    EXPECT_EQ(FockBasis(ModeSet{}, ModeSet::ball(1), {2, 0, std::nullopt}).dim(), 28u);
    EXPECT_EQ(FockBasis(ModeSet::ball(4, kf1()), ModeSet::ball(0), {1, 1, std::nullopt}).dim(), 183u);
}

TEST(FockBasis, StatesAreFoundAgain) {
    const FockBasis b(ModeSet::ball(4, kf1()), ModeSet::ball(1), {2, 1, Vec3i{0, 0, 0}});
    ASSERT_GT(b.dim(), 0u);
    for (std::size_t s = 0; s < b.dim(); ++s) {
        const auto bi = b.state_boson(s), fi = b.state_fermion(s);
        EXPECT_EQ(b.find_state(bi, fi), std::int64_t(s));
        EXPECT_EQ(b.find(b.boson_config(bi), b.fermion_config(fi), b.fermion_size(fi)), std::int64_t(s));
        EXPECT_EQ(b.total_momentum(s), (Vec3i{0, 0, 0}));
    }
}

TEST(FockBasis, SectorRestrictionPartitionsFullSpace) {
    const ModeSet modes = ModeSet::ball(2, kf1());
    const FockBasis full(modes, ModeSet::ball(1), {1, 1, std::nullopt});
    std::size_t total = 0;
    for (int x = -3; x <= 3; ++x)
        for (int y = -3; y <= 3; ++y)
            for (int z = -3; z <= 3; ++z) total += FockBasis(modes, ModeSet::ball(1), {1, 1, Vec3i{x, y, z}}).dim();
    EXPECT_EQ(total, full.dim());
}

TEST(FockBasis, CapacityError) {
    EXPECT_THROW(FockBasis(ModeSet::ball(9, kf1()), ModeSet::ball(4), {4, 2, std::nullopt, 1000}), CapacityError);
}

TEST(FockBasis, MetadataIsJson) {
    const FockBasis b(six_modes(), three_bosons(), {1, 3, std::nullopt});
    const auto j = nlohmann::json::parse(b.metadata_json());
    EXPECT_EQ(j["dimension"].get<std::size_t>(), b.dim());
}

TEST(Operators, NamesAndAdjoints) {
    for (auto k : {OpKind::HKinetic, OpKind::HW, OpKind::T, OpKind::VPlus, OpKind::VMinus, OpKind::VDiag,
                   OpKind::NPlus, OpKind::NMinus, OpKind::H})
        EXPECT_EQ(parse_op_kind(op_name(k)), k);
    EXPECT_EQ(adjoint(OpKind::VPlus), OpKind::VMinus);
    EXPECT_EQ(adjoint(OpKind::H), OpKind::H);
    EXPECT_FALSE(parse_op_kind("nope").has_value());
}

TEST(Operators, ApplyRejectsWrongShape) {
    const FockBasis b(six_modes(), three_bosons(), {1, 1, std::nullopt});
    const OperatorHandle H(b, OpKind::H, {demo_V(), demo_W(), 0.3});
    EXPECT_THROW(H.apply(Eigen::VectorXd::Zero(3)), ShapeError);
}

TEST(Operators, KineticOnVacuum) {
    const FockBasis b(ModeSet::ball(4, kf1()), ModeSet::ball(1), {1, 1, std::nullopt});
    const OperatorHandle T(b, OpKind::T, {FourierPotential::zero(), FourierPotential::zero(), 0.0});
    const auto d = T.diagonal();
    for (std::size_t s = 0; s < b.dim(); ++s) {
        const auto f = b.state_fermion(s);
        if (b.fermion_size(f) == 0) {
            EXPECT_EQ(d(Eigen::Index(s)), 0.0);
        } else {
            // one pair: |p|^2 - |h|^2 > 0
            EXPECT_GT(d(Eigen::Index(s)), 0.0);
        }
    }
}

TEST(FockCheck, CanonicalAnticommutators) {
    EXPECT_LE(fockcheck::car_check(six_modes()).max(), 1e-12);
    EXPECT_LE(fockcheck::car_check(ModeSet::ball(1, kf1())).max(), 1e-12);
}

TEST(FockCheck, PullThrough) {
    const auto modes = ModeSet::ball(4, kf1());
    EXPECT_LE(fockcheck::pull_through_check(modes, 1, [](double t) { return 1.0 / (1.0 + t); }, 3), 1e-10);
    EXPECT_LE(fockcheck::pull_through_check(modes, 2, [](double t) { return std::sqrt(t); }, 5), 1e-10);
}

TEST(FockCheck, AdjointAndMomentum) {
    const FockBasis b(six_modes(), three_bosons(), {2, 3, std::nullopt});
    const Couplings c{demo_V(), demo_W(), 0.37};
    const auto r = fockcheck::adjoint_check(b, c, 1);
    EXPECT_LE(r.v_adjoint, 1e-12);
    EXPECT_LE(r.h_symmetry, 1e-12);
    EXPECT_LE(r.apply_vs_dense, 1e-12);
    EXPECT_LE(fockcheck::momentum_check(b, c), 1e-14);
}

TEST(FockCheck, ParticleHoleIdentityDenseInstances) {
    const auto a = fockcheck::particle_hole_check(six_modes(), three_bosons(), 1, demo_V(), demo_W(), 0.37);
    EXPECT_EQ(a.dimension, 60u);
    EXPECT_LE(a.residual, 1e-10);
    const auto b = fockcheck::particle_hole_check(six_modes(), three_bosons(), 2, demo_V(), demo_W(), 0.37);
    EXPECT_EQ(b.dimension, 120u);
    EXPECT_LE(b.residual, 1e-10);
}

TEST(FockCheck, ParticleHoleIdentityRandomDraws) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r =
            fockcheck::particle_hole_check(six_modes(), three_bosons(), 1, random_sparse(seed), random_sparse(seed + 50), 0.2);
        EXPECT_LE(r.residual, 1e-10) << "seed " << seed;
    }
}

TEST(FockCheck, Inequalities) {
    const FockBasis b(ModeSet::ball(4, kf1()), ModeSet::ball(1), {2, 1, Vec3i{0, 0, 0}});
    const auto r = fockcheck::inequality_suite(b, demo_V(), 100, 9);
    EXPECT_EQ(r.kinetic_violations, 0);
    EXPECT_EQ(r.diagonal_violations, 0);
    EXPECT_GE(r.kinetic_margin, 0.0);
}

TEST(FockCheck, RandomVectorIsDeterministic) {
    EXPECT_EQ(fockcheck::random_vector(10, 4), fockcheck::random_vector(10, 4));
    EXPECT_NE(fockcheck::random_vector(10, 4), fockcheck::random_vector(10, 5));
}
