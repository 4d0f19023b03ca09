// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "bfmix/dense_fock.hpp"
#include "bfmix/hashing.hpp"
#include "bfmix/lattice.hpp"
#include "bfmix/lune_cache.hpp"
#include "bfmix/potentials.hpp"
#include "bfmix/scattering.hpp"
#include "bfmix/spectra.hpp"
#include "bfmix_cli/cli.hpp"

using namespace bfmix;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

FermiRadius kf(std::int64_t n) { return FermiRadius::from_squared(n); }

FourierPotential cos_mode(double c) { return FourierPotential::from_coefficients({{{1, 0, 0}, c}, {{-1, 0, 0}, c}}, 1); }

ModeSet six_modes() { return ModeSet({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {2, 0, 0}, {-2, 0, 0}, {0, 2, 0}}, kf(1)); }

ModeSet three_bosons() { return ModeSet({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}}, std::nullopt); }

// Sparse even potential drawn from a fixed pool of modes.
FourierPotential sparse_draw(std::uint64_t seed, const std::vector<Vec3i>& pool) {
    std::vector<FourierPotential::Entry> e;
    int cutoff = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (counter_uniform(seed, i) < 0.4) continue;
        e.emplace_back(pool[i], counter_normal(seed, 100 + i));
        cutoff = std::max(cutoff, pool[i].max_abs());
    }
    e.emplace_back(Vec3i{0, 0, 0}, counter_normal(seed, 999));
    return FourierPotential::from_coefficients(e, cutoff);
}

// ---------------------------------------------------------------------------------------------

Outcome lattice_exactness() {
    lattice::LuneSumTable::global().clear();
    const auto t0 = std::chrono::steady_clock::now();
    const auto d1 = lattice::resolvent_sum_exact(1, {1, 0, 0}, kf(1));
    const auto d2 = lattice::resolvent_sum_exact(2, {1, 0, 0}, kf(1));
    const double f1 = lattice::resolvent_sum(1.0, {1, 0, 0}, kf(1));
    const double f2 = lattice::resolvent_sum(2.0, {1, 0, 0}, kf(1));
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const double err = std::max(std::abs(f1 - 13.0 / 3.0), std::abs(f2 - 37.0 / 9.0));
    const bool ok = d1 == lattice::Rational(13, 3) && d2 == lattice::Rational(37, 9) && err <= 1e-12 && ms < 1.0;
    return {ok, "D1 = " + d1.str() + ", D2 = " + d2.str() + ", float error " + fmt(err) + ", " + fmt(ms) + " ms"};
}

const std::vector<Vec3i> kAsymptoticKs{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {2, 0, 0}};
const std::vector<std::int64_t> kAsymptoticKf2{100, 400, 1600, 6400, 40000};

Outcome asymptotics_envelope() {
    std::vector<FermiRadius> kFs;
    for (auto n : kAsymptoticKf2) kFs.push_back(kf(n));
    const auto rows = lattice::asymptotics_report(kAsymptoticKs, kFs);
    bool envelope = true;
    double worst_growth = 0.0, ratio_e1 = 0.0;
    std::ostringstream devs;
    for (std::size_t ki = 0; ki < kAsymptoticKs.size(); ++ki) {
        const double first = rows[ki * kFs.size()].normalized_deviation;
        for (std::size_t j = 0; j < kFs.size(); ++j) {
            const auto& r = rows[ki * kFs.size() + j];
            const double growth = r.normalized_deviation / first;
            worst_growth = std::max(worst_growth, growth);
            if (growth > 1.5) envelope = false;
        }
    }
    ratio_e1 = rows[kFs.size() - 1].ratio;  // k = e1 at the largest kF
    const bool near_one = std::abs(ratio_e1 - 1.0) <= 0.25;
    return {envelope && near_one, "worst deviation growth " + fmt(worst_growth) + " (limit 1.5); D1/(2 pi kF) at k = e1, kF^2 = 40000: " +
                                      fmt(ratio_e1) + " (needs |. - 1| <= 0.25)"};
}

Outcome summation_formula() {
    double worst = 0.0;
    int failures = 0, checks = 0;
    for (const auto& k : kAsymptoticKs)
        for (auto n : kAsymptoticKf2)
            for (double alpha : {1.0, 2.0}) {
                const auto f = lattice::summation_formula(k, kf(n), alpha);
                const double gap = std::abs(f.main_term + f.boundary_term - lattice::resolvent_sum(alpha, k, kf(n)));
                worst = std::max(worst, gap / f.error_scale);
                ++checks;
                if (gap > f.error_scale) ++failures;
            }
    return {failures == 0, std::to_string(checks) + " checks, worst |main + boundary - D| / error_scale = " + fmt(worst)};
}

FourierPotential band_limited() {
    return FourierPotential::from_coefficients({{{1, 0, 0}, 1.0},
                                                {{0, 1, 0}, 1.0},
                                                {{1, 1, 0}, 0.5},
                                                {{1, 1, 1}, 0.25},
                                                {{2, 0, 0}, 0.2},
                                                {{3, 0, 0}, 0.1}},
                                               3);
}

Outcome effective_convergence() {
    const auto V = band_limited();
    const double h2 = potentials::sobolev_norm_sq(V, 2.0);
    std::vector<double> sup, ratio;
    for (std::int64_t n : {100, 400, 1600}) {
        const auto K = kf(n);
        sup.push_back(potentials::sup_difference(V, K).upper);
        ratio.push_back(sup.back() / (std::pow(lattice::log_floor(K.value()), 5.0 / 3.0) * std::pow(K.value(), -1.0 / 3.0) * h2));
    }
    const bool decreasing = sup[1] < sup[0] && sup[2] < sup[1];
    const bool bounded = ratio[1] <= 1.5 * ratio[0] && ratio[2] <= 1.5 * ratio[0];
    return {decreasing && bounded, "sup_difference " + fmt(sup[0]) + ", " + fmt(sup[1]) + ", " + fmt(sup[2]) +
                                       "; normalized ratio " + fmt(ratio[0]) + ", " + fmt(ratio[1]) + ", " + fmt(ratio[2])};
}

Outcome particle_hole() {
    const auto V = FourierPotential::from_coefficients({{{1, 0, 0}, 0.7}, {{0, 0, 0}, 0.3}, {{2, 0, 0}, 0.2}}, 2);
    const auto W = FourierPotential::from_coefficients({{{1, 0, 0}, 0.5}, {{0, 0, 0}, 1.1}}, 2);
    const auto a = fockcheck::particle_hole_check(six_modes(), three_bosons(), 1, V, W, 0.37);
    const auto b = fockcheck::particle_hole_check(six_modes(), three_bosons(), 2, V, W, 0.37);
    const std::vector<Vec3i> pool{{1, 0, 0}, {2, 0, 0}, {0, 2, 0}, {1, 2, 0}, {2, 2, 0}, {3, 0, 0}, {4, 0, 0}};
    double worst_random = 0.0;
    for (std::uint64_t draw = 0; draw < 20; ++draw) {
        const auto r = fockcheck::particle_hole_check(six_modes(), three_bosons(), 1 + int(draw % 2),
                                                      sparse_draw(4000 + draw, pool), sparse_draw(5000 + draw, pool),
                                                      0.1 + 0.02 * double(draw));
        worst_random = std::max(worst_random, r.residual);
    }
    const bool ok = a.dimension == 60 && a.residual <= 1e-10 && b.residual <= 1e-10 && worst_random <= 1e-10;
    return {ok, "dim 60 residual " + fmt(a.residual) + ", N = 2 dim " + std::to_string(b.dimension) + " residual " +
                    fmt(b.residual) + ", 20 random draws worst " + fmt(worst_random)};
}

Outcome operator_algebra() {
    const double car = std::max(fockcheck::car_check(six_modes()).max(), fockcheck::car_check(ModeSet::ball(1, kf(1))).max());
    const auto modes = ModeSet::ball(4, kf(1));
    double pull = 0.0;
    for (int pairs : {1, 2}) {
        pull = std::max(pull, fockcheck::pull_through_check(modes, pairs, [](double t) { return 1.0 / (1.0 + t); }, 11));
        pull = std::max(pull, fockcheck::pull_through_check(modes, pairs, [](double t) { return std::exp(-0.3 * t); }, 12));
    }
    double adj = 0.0, mom = 0.0;
    const Couplings c{FourierPotential::from_coefficients({{{1, 0, 0}, 0.7}, {{2, 0, 0}, 0.2}, {{0, 0, 0}, 0.3}}, 2),
                      FourierPotential::from_coefficients({{{1, 0, 0}, 0.5}, {{0, 0, 0}, 1.1}}, 2), 0.37};
    for (const FockBasis& b : {FockBasis(six_modes(), three_bosons(), {2, 3, std::nullopt}),
                               FockBasis(modes, ModeSet::ball(1), {1, 1, std::nullopt})}) {
        const auto r = fockcheck::adjoint_check(b, c, 21);
        adj = std::max({adj, r.v_adjoint, r.h_symmetry, r.apply_vs_dense});
        mom = std::max(mom, fockcheck::momentum_check(b, c));
    }
    const double worst = std::max({car, pull, adj, mom});
    return {worst <= 1e-10, "CAR " + fmt(car) + ", pull-through " + fmt(pull) + ", adjoint " + fmt(adj) + ", [H, P] " + fmt(mom)};
}

Outcome inequalities() {
    const auto V = FourierPotential::from_coefficients({{{1, 0, 0}, 0.7}, {{1, 1, 0}, 0.3}, {{0, 0, 0}, 0.2}}, 1);
    int violations = 0, trials = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (int N : {1, 2}) {
        const FockBasis b(ModeSet::ball(4, kf(1)), ModeSet::ball(1), {N, 1, std::nullopt});
        const auto r = fockcheck::inequality_suite(b, V, 1000, 70 + std::uint64_t(N));
        violations += r.kinetic_violations + r.diagonal_violations;
        trials += r.trials;
        margin = std::min({margin, r.kinetic_margin, r.diagonal_margin});
    }
    return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(trials) +
                                 " states, smallest margin " + fmt(margin)};
}

Outcome trial_dual_path() {
    double worst = 0.0;
    const std::vector<Vec3i> pool{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 1}};
    for (std::uint64_t i = 0; i < 10; ++i) {
        const int N = 1 + int(i % 2);
        const std::int64_t n = 1 + std::int64_t(i % 3 == 2);
        const auto bosons = spectra::boson_basis(N, 1 + std::int64_t(i % 2));
        const auto modes = ModeSet::ball(default_cutoff2(kf(n)), kf(n));
        const auto V = sparse_draw(6000 + i, pool), W = sparse_draw(7000 + i, pool);
        const Eigen::VectorXd phi = fockcheck::random_vector(bosons.dim(), 8000 + i);
        const auto a = spectra::trial_state_energy(bosons, phi, V, W, kf(n), modes);
        const auto b = spectra::trial_state_energy_fock(bosons, phi, V, W, kf(n), modes);
        worst = std::max(worst, std::abs(a.rayleigh - b.rayleigh));
    }
    const double c = 0.8;
    const auto bosons = spectra::boson_basis(1, 1);
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(Eigen::Index(bosons.dim()));
    for (std::size_t s = 0; s < bosons.dim(); ++s)
        if (bosons.boson_modes().mode(bosons.boson_config(bosons.state_boson(s))[0]).is_zero()) phi(Eigen::Index(s)) = 1.0;
    const double norm = spectra::trial_state_energy(bosons, phi, cos_mode(c), FourierPotential::zero(), kf(1)).norm2;
    const double norm_err = std::abs(norm - (1.0 + 37.0 * c * c / (18.0 * kPi)));
    return {worst <= 1e-10 && norm_err <= 1e-12,
            "10 configurations, worst Rayleigh gap " + fmt(worst) + "; single-mode norm error " + fmt(norm_err)};
}

Outcome decomposition() {
    spectra::DecompositionConfig cfg;
    cfg.V = cos_mode(0.8);
    const auto r = spectra::quadratic_decomposition_check(cfg);
    const bool ok = r.vacuum_residual <= 1e-10 && r.min_eig_minus_A2 >= -1e-10 && r.min_eig_minus_A3 >= -1e-10 &&
                    r.completed_square_residual <= 1e-9;
    return {ok, "vacuum " + fmt(r.vacuum_residual) + ", min eig -A2 " + fmt(r.min_eig_minus_A2) + ", -A3 " +
                    fmt(r.min_eig_minus_A3) + ", completed square " + fmt(r.completed_square_residual) +
                    " (1-pair dim " + std::to_string(r.one_pair_dim) + ")"};
}

spectra::Theorem1Config theorem1_config(const FourierPotential& V) {
    spectra::Theorem1Config cfg;
    cfg.V = V;
    cfg.W = cos_mode(1.0);
    cfg.N = 2;
    cfg.kf2_list = {1, 2, 4, 9, 16};
    cfg.boson_cutoff2 = 1;
    cfg.max_pairs = 1;
    return cfg;
}

Outcome theorem1_trend() {
    const auto rows = spectra::theorem1_compare(theorem1_config(cos_mode(1.0)));
    bool variational = true, failed = false;
    std::ostringstream diffs;
    for (const auto& r : rows) {
        if (r.failed) {
            failed = true;
            continue;
        }
        if (r.trial_rayleigh < r.mu_H[0]) variational = false;
        diffs << (diffs.tellp() ? ", " : "") << fmt(std::abs(r.diff[0]));
    }
    const bool shrinks = !failed && std::abs(rows.back().diff[0]) < std::abs(rows.front().diff[0]);
    const auto zero = spectra::theorem1_compare(theorem1_config(FourierPotential::zero()));
    bool exact_zero = true;
    for (const auto& r : zero)
        for (double d : r.diff) exact_zero = exact_zero && !r.failed && d == 0.0;
    return {!failed && variational && shrinks && exact_zero,
            "|diff| = " + diffs.str() + "; trial >= mu_1 " + (variational ? "on every row" : "VIOLATED") +
                "; V = 0 diff exactly 0: " + (exact_zero ? "yes" : "no")};
}

Outcome corollary_overlap() {
    auto cfg = theorem1_config(cos_mode(1.0));
    cfg.kf2_list = {1, 2, 4};
    cfg.overlap = true;
    const auto rows = spectra::theorem1_compare(cfg);
    std::vector<double> ov;
    for (const auto& r : rows) ov.push_back(r.overlap ? *r.overlap : std::nan(""));
    const bool increasing = ov[1] > ov[0] && ov[2] > ov[1];
    auto zcfg = cfg;
    zcfg.V = FourierPotential::zero();
    bool exact_one = true;
    for (const auto& r : spectra::theorem1_compare(zcfg)) exact_one = exact_one && r.overlap && *r.overlap == 1.0;
    return {increasing && ov[2] > 0.9 && exact_one, "overlap " + fmt(ov[0]) + ", " + fmt(ov[1]) + ", " + fmt(ov[2]) +
                                                        "; V = 0 overlap exactly 1: " + (exact_one ? "yes" : "no")};
}

Outcome scattering_checks() {
    const auto barrier = scattering::scattering_length(RadialPotential::indicator(1.0, 2.0));
    const double e_barrier = std::abs(barrier.a - (1.0 - std::tanh(1.0)));
    const double e_integral = std::abs(barrier.a - barrier.a_integral);
    const double t = 1e-3;
    const auto wb = RadialPotential::indicator(1.0, 2.0 * t);
    const double born = scattering::scattering_length(wb).a / (wb.integral_3d() / (8.0 * kPi));
    const auto v = RadialPotential::indicator(1.0, 1.0);
    const auto vv = scattering::radial_convolution(v, v);
    double e_g0 = 0.0, e_gs = 0.0;
    for (double alpha : {0.5, 2.0}) {
        const auto c = scattering::critical_couplings(vv.scaled(alpha), v, vv);
        e_g0 = std::max(e_g0, std::abs(c.g0 - std::sqrt(alpha)));
        e_gs = std::max(e_gs, std::abs(c.g_star - alpha));
    }
    const bool ok = e_barrier <= 1e-6 && std::abs(born - 1.0) <= 1e-3 && e_integral <= 1e-6 && e_g0 <= 1e-6 && e_gs <= 1e-9;
    return {ok, "barrier " + fmt(e_barrier) + ", Born ratio " + fmt(born) + ", integral form " + fmt(e_integral) +
                    ", g0 " + fmt(e_g0) + ", g_star " + fmt(e_gs)};
}

Outcome collapse() {
    const auto psi = RadialPotential::sample([](double r) { return std::exp(-r * r); }, 3.0, 61);
    const auto w = RadialPotential::indicator(1.0, 1.0);
    const auto v = RadialPotential::indicator(1.0, 0.1);
    const double g_star = scattering::critical_couplings(w, v).g_star;
    const auto t = scattering::collapse_energy(psi, w, v, 1.5 * g_star, {8, 16, 32, 64});
    const auto t0 = scattering::collapse_energy(psi, w, v, 0.0, {8, 16, 32, 64});
    bool nonnegative = true;
    for (double e : t0.energy_per_particle) nonnegative = nonnegative && e >= 0.0;
    const bool slope_ok = std::isfinite(t.slope) && std::abs(t.slope - 3.0) <= 0.05;
    return {slope_ok && nonnegative, "slope " + fmt(t.slope) + " at g = 1.5 g_star (needs 3 +- 0.05), E/N " +
                                         fmt(t.energy_per_particle.front()) + " .. " + fmt(t.energy_per_particle.back()) +
                                         "; g = 0 energies >= 0: " + (nonnegative ? "yes" : "no")};
}

// --- determinism ----------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return "exit " + std::to_string(code) + "\n" + out.str();
}

// Concatenated stdout and written files for one pass of every command.
std::string command_pass(const std::filesystem::path& dir) {
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto d = dir.string();
    std::string all;
    all += run_cli({"lune", "--k", "1,0,0", "--kf2", "1", "--alpha", "1"});
    all += run_cli({"lune", "--sweep", "--formula", "--kf2-list", "100,400", "--out", d + "/lune.csv"});
    all += run_cli({"effpot", "--V", "configs/v_band3.json", "--kf2-list", "100,400,1600", "--out", d + "/effpot.json"});
    all += run_cli({"effpot", "--V", "configs/v_single_mode.json", "--W", "configs/w_single_mode.json", "--limit",
                    "--format", "csv", "--out", d + "/limit.csv"});
    all += run_cli({"scatter", "--w", "configs/w_barrier.json", "--v", "configs/v_step.json", "--g", "0:0.1:1.5",
                    "--collapse", "--psi", "configs/psi_gauss.json", "--out-dir", d + "/scatter"});
    all += run_cli({"spectrum", "--config", "configs/theorem1.json", "--out-dir", d + "/spectrum"});
    all += run_cli({"spectrum", "--config", "configs/refine.json", "--check", "ph", "--out-dir", d + "/refine"});
    all += run_cli({"verify", "--seed", "7"});
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) all += "== " + std::filesystem::relative(f, dir).string() + "\n" + slurp(f);
    return all;
}

Outcome determinism() {
    const auto base = std::filesystem::temp_directory_path() / "bfmix_acceptance";
    const std::string a = command_pass(base / "a");
    lattice::LuneSumTable::global().clear();
    const std::string b = command_pass(base / "b");
    const bool ok = a == b && !a.empty();
    std::filesystem::remove_all(base);
    return {ok, std::to_string(a.size()) + " bytes of output per pass, " + (ok ? "identical" : "DIFFERENT")};
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;  // runtime limit, 0 when none is pinned
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "lattice exactness", 0.0, lattice_exactness},
        {2, "asymptotics envelope", 120.0, asymptotics_envelope},
        {3, "summation formula", 120.0, summation_formula},
        {4, "effective-potential convergence", 60.0, effective_convergence},
        {5, "particle-hole identity", 10.0, particle_hole},
        {6, "operator algebra", 30.0, operator_algebra},
        {7, "inequality suite", 30.0, inequalities},
        {8, "trial-state dual path", 60.0, trial_dual_path},
        {9, "A-decomposition", 60.0, decomposition},
        {10, "theorem-1 trend", 900.0, theorem1_trend},
        {11, "corollary overlap", 600.0, corollary_overlap},
        {12, "scattering", 10.0, scattering_checks},
        {13, "collapse", 10.0, collapse},
        {14, "determinism", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.limit_s == 0.0 || s < c.limit_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::cout << "criterion " << std::setw(2) << c.id << " " << (pass ? "PASS" : "FAIL") << "  " << c.name << ": "
                  << o.detail << " [" << fmt(s) << " s" << (in_time ? "" : ", over time limit") << "]" << std::endl;
    }
    std::cout << (criteria.size() - std::size_t(failed)) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
