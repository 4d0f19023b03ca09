#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "bfmix/dense_fock.hpp"
#include "bfmix/error.hpp"
#include "bfmix/hashing.hpp"
#include "bfmix/lattice.hpp"
#include "bfmix/potentials.hpp"
#include "bfmix/scattering.hpp"
#include "bfmix/spectra.hpp"
#include "bfmix_cli/cli.hpp"
#include "commands.hpp"

namespace bfmix::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Seeded even potential with a few random modes on |k|_inf <= cutoff.
FourierPotential random_potential(std::uint64_t seed, int cutoff, int modes, bool zero_mode) {
    std::vector<FourierPotential::Entry> e;
    std::uint64_t idx = 0;
    for (int i = 0; i < modes; ++i) {
        const int span = 2 * cutoff + 1;
        Vec3i k{int(counter_uniform(seed, idx) * span) - cutoff, int(counter_uniform(seed, idx + 1) * span) - cutoff,
                int(counter_uniform(seed, idx + 2) * span) - cutoff};
        const double v = counter_normal(seed, idx + 3);
        idx += 4;
        if (k.is_zero()) continue;
        bool seen = false;
        for (const auto& [q, x] : e) seen = seen || q == k || q == -k;
        if (seen) continue;
        e.emplace_back(k, v);
        e.emplace_back(-k, v);
    }
    if (zero_mode) e.emplace_back(Vec3i{0, 0, 0}, counter_normal(seed, idx));
    return FourierPotential::from_coefficients(e, cutoff);
}

SuiteResult check(std::string name, double worst, double tol, std::string detail = {}) {
    return {std::move(name), worst <= tol, worst, tol, std::move(detail)};
}

SuiteResult lattice_suite(std::uint64_t) {
    const auto kF1 = FermiRadius::from_squared(1);
    double worst = 0.0;
    const auto exact1 = lattice::resolvent_sum_exact(1, {1, 0, 0}, kF1);
    const auto exact2 = lattice::resolvent_sum_exact(2, {1, 0, 0}, kF1);
    const bool rationals = exact1 == lattice::Rational(13, 3) && exact2 == lattice::Rational(37, 9);
    worst = std::max(worst, std::abs(lattice::resolvent_sum(1.0, {1, 0, 0}, kF1) - 13.0 / 3.0));
    worst = std::max(worst, std::abs(lattice::resolvent_sum(2.0, {1, 0, 0}, kF1) - 37.0 / 9.0));
    worst = std::max(worst, std::abs(lattice::resolvent_sum(1.0, {0, 0, 0}, FermiRadius::from_squared(25))));
    // cubic symmetry and direct vs cached agreement
    const auto kF = FermiRadius::from_squared(30);
    const Vec3i k{2, 1, 0};
    const double d = lattice::resolvent_sum_direct(1.0, k, kF).value;
    for (const Vec3i& g : {Vec3i{-2, -1, 0}, Vec3i{1, 2, 0}, Vec3i{0, -1, 2}, Vec3i{-1, 0, -2}})
        worst = std::max(worst, std::abs(lattice::resolvent_sum(1.0, g, kF) - d) / d);
    auto r = check("lattice", worst, 1e-12, "13/3, 37/9, D(0) = 0, cubic symmetry");
    if (!rationals) {
        r.pass = false;
        r.detail = "exact rationals differ from 13/3, 37/9";
    }
    return r;
}

SuiteResult summation_suite(std::uint64_t) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::int64_t kf2 : {100, 400})
        for (const Vec3i& k : {Vec3i{1, 0, 0}, Vec3i{1, 1, 0}, Vec3i{1, 1, 1}, Vec3i{2, 0, 0}})
            for (double alpha : {1.0, 2.0}) {
                const auto kF = FermiRadius::from_squared(kf2);
                const auto f = lattice::summation_formula(k, kF, alpha);
                const double D = lattice::resolvent_sum(alpha, k, kF);
                worst = std::max(worst, std::abs(f.main_term + f.boundary_term - D) / f.error_scale);
            }
    return check("summation", worst, 1.0, "|main + boundary - D| / error_scale");
}

SuiteResult convolution_suite(std::uint64_t seed) {
    const int n = 8;
    const auto V = random_potential(seed, 2, 4, true);
    const auto U = random_potential(seed + 1, 2, 4, true);
    const auto gv = potentials::evaluate_on_grid(V, n), gu = potentials::evaluate_on_grid(U, n);
    const auto gc = potentials::evaluate_on_grid(potentials::convolve(V, U), n);
    const double cell = std::pow(2.0 * kPi / n, 3);
    auto at = [n](int x, int y, int z) { return (((x + n) % n) * n + (y + n) % n) * n + (z + n) % n; };
    double worst = 0.0, scale = 1e-300;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                double s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int c = 0; c < n; ++c) s += gv[at(x - a, y - b, z - c)] * gu[at(a, b, c)];
                s *= cell;
                worst = std::max(worst, std::abs(s - gc[at(x, y, z)]));
                scale = std::max(scale, std::abs(s));
            }
    return check("convolution", worst / scale, 1e-12, "grid convolution against coefficient product");
}

ModeSet six_modes() {
    return ModeSet({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {2, 0, 0}, {-2, 0, 0}, {0, 2, 0}}, FermiRadius::from_squared(1));
}

SuiteResult car_suite(std::uint64_t) {
    return check("car", fockcheck::car_check(six_modes()).max(), 1e-12, "6 modes, full Fock space");
}

SuiteResult pull_through_suite(std::uint64_t seed) {
    const auto modes = ModeSet::ball(4, FermiRadius::from_squared(1));
    double worst = 0.0;
    const std::function<double(double)> fs[] = {[](double t) { return 1.0 / (1.0 + t); },
                                                [](double t) { return std::exp(-0.1 * t); },
                                                [](double t) { return t; }};
    for (const auto& f : fs) worst = std::max(worst, fockcheck::pull_through_check(modes, 1, f, seed));
    return check("pull_through", worst, 1e-10, "kF^2 = 1, Lambda^2 = 4, one pair");
}

SuiteResult operators_suite(std::uint64_t seed) {
    const auto modes = six_modes();
    const ModeSet bosons({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}}, std::nullopt);
    const FockBasis basis(modes, bosons, {2, 3, std::nullopt});
    const Couplings c{random_potential(seed, 2, 3, true), random_potential(seed + 7, 1, 2, true), 0.37};
    const auto a = fockcheck::adjoint_check(basis, c, seed);
    const double worst = std::max({a.v_adjoint, a.h_symmetry, a.apply_vs_dense, fockcheck::momentum_check(basis, c)});
    return check("operators", worst, 1e-10, "V- = V+^*, H symmetric, apply = dense, [H, P] = 0");
}

SuiteResult particle_hole_suite(std::uint64_t seed) {
    const auto modes = six_modes();
    const ModeSet bosons({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}}, std::nullopt);
    double worst = 0.0;
    for (int draw = 0; draw < 5; ++draw)
        for (int N : {1, 2}) {
            const auto V = random_potential(seed + 100 + draw, 2, 3, true);
            const auto W = random_potential(seed + 200 + draw, 2, 2, true);
            worst = std::max(worst, fockcheck::particle_hole_check(modes, bosons, N, V, W, 0.37).residual);
        }
    return check("particle_hole", worst, 1e-10, "5 seeded (V, W) draws, N = 1, 2");
}

SuiteResult inequalities_suite(std::uint64_t seed) {
    const auto kF = FermiRadius::from_squared(1);
    double margin = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int N : {1, 2}) {
        const FockBasis basis(ModeSet::ball(4, kF), ModeSet::ball(1), {N, 1, Vec3i{0, 0, 0}});
        const auto r = fockcheck::inequality_suite(basis, random_potential(seed + N, 2, 4, true), 200, seed);
        violations += r.kinetic_violations + r.diagonal_violations;
        margin = std::min({margin, r.kinetic_margin, r.diagonal_margin});
    }
    auto res = check("inequalities", double(violations), 0.0, "violations over 400 random states");
    res.detail += ", smallest margin " + format_double(margin);
    return res;
}

SuiteResult trial_suite(std::uint64_t seed) {
    const auto kF = FermiRadius::from_squared(1);
    const auto modes = ModeSet::ball(9, kF);
    const auto bosons = spectra::boson_basis(2, 2);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto V = random_potential(seed + 300 + i, 1, 3, true);
        const auto W = random_potential(seed + 400 + i, 1, 2, true);
        const Eigen::VectorXd phi = fockcheck::random_vector(bosons.dim(), seed + i);
        const auto a = spectra::trial_state_energy(bosons, phi, V, W, kF, modes);
        const auto b = spectra::trial_state_energy_fock(bosons, phi, V, W, kF, modes);
        worst = std::max(worst, std::abs(a.rayleigh - b.rayleigh) / std::max(1.0, std::abs(a.rayleigh)));
    }
    return check("trial", worst, 1e-10, "closed form against explicit Fock state");
}

SuiteResult scattering_suite(std::uint64_t) {
    double worst = 0.0;
    const auto barrier = scattering::scattering_length(RadialPotential::indicator(1.0, 2.0));
    worst = std::max(worst, std::abs(barrier.a - (1.0 - std::tanh(1.0))));
    worst = std::max(worst, std::abs(barrier.a - barrier.a_integral));
    const double t = 1e-3;
    const auto born = scattering::scattering_length(RadialPotential::indicator(1.0, 2.0 * t));
    worst = std::max(worst, 1e-3 * std::abs(born.a / (t / 3.0) - 1.0));
    const auto v = RadialPotential::indicator(1.0, 1.0);
    const auto vv = scattering::radial_convolution(v, v);
    const double alpha = 2.0;
    const auto c = scattering::critical_couplings(vv.scaled(alpha), v, vv);
    worst = std::max({worst, std::abs(c.g0 - std::sqrt(alpha)), std::abs(c.g_star - alpha) * 1e3});
    return check("scattering", worst, 1e-6, "barrier, Born limit, integral form, critical couplings");
}

const std::map<std::string, std::function<SuiteResult(std::uint64_t)>>& registry() {
    static const std::map<std::string, std::function<SuiteResult(std::uint64_t)>> r{
        {"lattice", lattice_suite},           {"summation", summation_suite},
        {"convolution", convolution_suite},   {"car", car_suite},
        {"pull_through", pull_through_suite}, {"operators", operators_suite},
        {"particle_hole", particle_hole_suite}, {"inequalities", inequalities_suite},
        {"trial", trial_suite},               {"scattering", scattering_suite}};
    return r;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
    return {"lattice", "summation", "convolution", "car", "pull_through", "operators", "particle_hole",
            "inequalities", "trial", "scattering"};
}

SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw UsageError("unknown suite '" + name + "'");
    try {
        return it->second(seed);
    } catch (const Error& e) {
        return {name, false, std::numeric_limits<double>::infinity(), 0.0, e.what()};
    }
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream&) {
    auto names = a.suites.empty() ? verify_suite_names() : a.suites;
    for (const auto& n : names)
        if (!registry().count(n)) throw UsageError("unknown suite '" + n + "'");
    bool ok = true;
    for (const auto& n : names) {
        const auto r = run_verify_suite(n, a.seed);
        ok = ok && r.pass;
        out << (r.pass ? "PASS " : "FAIL ") << r.name << " worst=" << format_double(r.worst)
            << " tol=" << format_double(r.tolerance) << " (" << r.detail << ")\n";
    }
    out << (ok ? "all suites passed" : "verification failed") << "\n";
    return ok ? kSuccess : kVerificationFailure;
}

}  // namespace bfmix::cli
