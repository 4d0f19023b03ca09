#include "bfmix/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>

#include "bfmix/error.hpp"
#include "bfmix/lattice.hpp"
#include "bfmix/quadrature.hpp"

namespace bfmix {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kTwoPi32 = std::pow(2.0 * std::numbers::pi, 1.5);
}  // namespace

FourierPotential FourierPotential::from_coefficients(const std::vector<Entry>& entries, int cutoff,
                                                     std::string label) {
    if (cutoff < 0) throw ValidationError("cutoff", "must be nonnegative");
    std::map<Vec3i, double> given;
    for (const auto& [k, v] : entries) {
        if (k.max_abs() > cutoff)
            throw ValidationError("coeffs", "mode " + to_string(k) + " lies outside cutoff " + std::to_string(cutoff));
        if (!std::isfinite(v)) throw ValidationError("coeffs", "non-finite value at " + to_string(k));
        auto [it, inserted] = given.emplace(k, v);
        if (!inserted && std::abs(it->second - v) > potentials::kSymmetryTolerance)
            throw ValidationError("coeffs", "conflicting duplicate entries at " + to_string(k));
    }
    std::map<Vec3i, double> sym;
    for (const auto& [k, v] : given) {
        auto partner = given.find(-k);
        double value = v;
        if (partner != given.end()) {
            if (std::abs(partner->second - v) > potentials::kSymmetryTolerance)
                throw ValidationError("coeffs", "V(k) != V(-k) at k = " + to_string(k));
            value = 0.5 * (v + partner->second);
        }
        sym[k] = value;
        sym[-k] = value;
    }
    FourierPotential V;
    V.cutoff_ = cutoff;
    V.label_ = std::move(label);
    for (const auto& [k, v] : sym)
        if (v != 0.0) V.entries_.emplace_back(k, v);
    V.build_lookup();
    return V;
}

FourierPotential FourierPotential::zero(int cutoff) { return from_coefficients({}, cutoff); }

void FourierPotential::build_lookup() {
    const int side = 2 * cutoff_ + 1;
    dense_.assign(std::size_t(side) * side * side, 0.0);
    for (const auto& [k, v] : entries_)
        dense_[(std::size_t(k.x + cutoff_) * side + (k.y + cutoff_)) * side + (k.z + cutoff_)] = v;
}

double FourierPotential::coefficient(const Vec3i& k) const {
    if (k.max_abs() > cutoff_ || dense_.empty()) return 0.0;
    const int side = 2 * cutoff_ + 1;
    return dense_[(std::size_t(k.x + cutoff_) * side + (k.y + cutoff_)) * side + (k.z + cutoff_)];
}

double FourierPotential::value_at(double x, double y, double z) const {
    double s = 0.0;
    for (const auto& [k, v] : entries_) s += v * std::cos(k.x * x + k.y * y + k.z * z);
    return s / kTwoPi32;
}

FourierPotential FourierPotential::scaled(double c) const {
    std::vector<Entry> e(entries_);
    for (auto& [k, v] : e) v *= c;
    return from_coefficients(e, cutoff_, label_);
}

FourierPotential FourierPotential::with_label(std::string label) const {
    FourierPotential V(*this);
    V.label_ = std::move(label);
    return V;
}

namespace {

FourierPotential linear(const FourierPotential& a, double ca, const FourierPotential& b, double cb) {
    std::map<Vec3i, double> sum;
    for (const auto& [k, v] : a.entries()) sum[k] += ca * v;
    for (const auto& [k, v] : b.entries()) sum[k] += cb * v;
    std::vector<FourierPotential::Entry> e(sum.begin(), sum.end());
    return FourierPotential::from_coefficients(e, std::max(a.cutoff(), b.cutoff()));
}

}  // namespace

FourierPotential operator+(const FourierPotential& a, const FourierPotential& b) { return linear(a, 1.0, b, 1.0); }
FourierPotential operator-(const FourierPotential& a, const FourierPotential& b) { return linear(a, 1.0, b, -1.0); }

namespace potentials {

double radial_transform(const RadialPotential& profile, double rho, double tol) {
    if (profile.empty()) return 0.0;
    if (rho == 0.0) return profile.integral_3d();
    const double R = profile.support_radius();
    auto f = [&](double r) { return r * std::sin(rho * r) * profile(r); };
    return 4.0 * std::numbers::pi / rho * quad::integrate_piecewise(f, 0.0, R, profile.breakpoints(), tol);
}

FourierPotential from_radial_profile(const RadialPotential& profile, int N_scale, double g, int cutoff) {
    if (N_scale < 1) throw InvalidParameter("N_scale must be >= 1");
    if (!(profile.support_radius() < std::numbers::pi * N_scale))
        throw OutOfRange("periodization overlap: support radius " + std::to_string(profile.support_radius()) +
                         " >= pi * N_scale");
    if (g == 0.0 || profile.is_zero()) return FourierPotential::zero(cutoff);
    std::map<std::int64_t, double> transform;
    std::vector<FourierPotential::Entry> entries;
    for (int x = -cutoff; x <= cutoff; ++x)
        for (int y = -cutoff; y <= cutoff; ++y)
            for (int z = -cutoff; z <= cutoff; ++z) {
                const Vec3i k{x, y, z};
                auto it = transform.find(k.norm2());
                if (it == transform.end()) {
                    const double rho = std::sqrt(double(k.norm2())) / double(N_scale);
                    it = transform.emplace(k.norm2(), radial_transform(profile, rho)).first;
                }
                entries.emplace_back(k, g * it->second / kTwoPi32);
            }
    return FourierPotential::from_coefficients(entries, cutoff, "radial");
}

FourierPotential convolve(const FourierPotential& V, const FourierPotential& U) {
    std::vector<FourierPotential::Entry> entries;
    for (const auto& [k, v] : V.entries()) {
        const double u = U.coefficient(k);
        if (u != 0.0) entries.emplace_back(k, kTwoPi32 * v * u);
    }
    return FourierPotential::from_coefficients(entries, std::min(V.cutoff(), U.cutoff()), "convolution");
}

EffectivePotential effective_potential_kF(const FourierPotential& V, const FermiRadius& kF) {
    std::vector<FourierPotential::Entry> entries;
    const double scale = kTwoPi32 / (kTwoPi * kF.value());
    for (const auto& [k, v] : V.entries()) {
        if (k.is_zero()) continue;
        entries.emplace_back(k, scale * v * v * lattice::resolvent_sum(1.0, k, kF));
    }
    return {FourierPotential::from_coefficients(entries, V.cutoff(), "W_kF"), kF,
            "W_kF from V '" + V.label() + "' at kF^2 = " + kF.key()};
}

EffectivePotential effective_potential_limit(const FourierPotential& W, const FourierPotential& V) {
    return {(W - convolve(V, V)).with_label("W_eff"), std::nullopt,
            "W - V*V from W '" + W.label() + "' and V '" + V.label() + "'"};
}

double effective_value_at_zero(const FourierPotential& V, const FermiRadius& kF) {
    double s = 0.0;
    for (const auto& [k, v] : V.entries())
        if (!k.is_zero()) s += v * v * lattice::resolvent_sum(1.0, k, kF);
    return s / (kTwoPi * kF.value());
}

SupDifference sup_difference(const FourierPotential& V, const FermiRadius& kF) {
    SupDifference out;
    std::vector<FourierPotential::Entry> diff;
    for (const auto& [k, v] : V.entries()) {
        if (k.is_zero()) continue;
        const double c = v * v * (lattice::resolvent_sum(1.0, k, kF) / (kTwoPi * kF.value()) - 1.0);
        out.upper += std::abs(c);
        diff.emplace_back(k, kTwoPi32 * c);
    }
    const auto D = FourierPotential::from_coefficients(diff, V.cutoff());
    for (double x : evaluate_on_grid(D, 16)) out.grid_lower = std::max(out.grid_lower, std::abs(x));
    return out;
}

double lambda_coupling(int N, const FermiRadius& kF) {
    if (N < 1) throw InvalidParameter("N must be >= 1");
    return 1.0 / std::sqrt(4.0 * std::numbers::pi * double(N) * kF.value());
}

double sobolev_norm_sq(const FourierPotential& V, double s) {
    double total = 0.0;
    for (const auto& [k, v] : V.entries()) total += std::pow(1.0 + double(k.norm2()), s) * v * v;
    return total;
}

double l1_coefficients(const FourierPotential& V) {
    double total = 0.0;
    for (const auto& [k, v] : V.entries()) total += std::abs(v);
    return total;
}

std::vector<double> evaluate_on_grid(const FourierPotential& V, int n) {
    using cd = std::complex<double>;
    if (n < 1) throw InvalidParameter("grid size must be positive");
    std::vector<double> out(std::size_t(n) * n * n, 0.0);
    if (V.is_zero()) return out;
    int L = 0;
    for (const auto& [k, v] : V.entries()) L = std::max(L, k.max_abs());
    const int side = 2 * L + 1;
    std::vector<cd> E(std::size_t(n) * side);
    for (int i = 0; i < n; ++i)
        for (int k = -L; k <= L; ++k) {
            const double phase = double(k) * kTwoPi * double(i) / double(n);
            E[std::size_t(i) * side + (k + L)] = {std::cos(phase), std::sin(phase)};
        }
    std::vector<cd> coef(std::size_t(side) * side * side, 0.0);
    for (const auto& [k, v] : V.entries())
        coef[(std::size_t(k.x + L) * side + (k.y + L)) * side + (k.z + L)] = v / kTwoPi32;

    std::vector<cd> A(std::size_t(n) * side * side, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int kx = 0; kx < side; ++kx) {
            const cd e = E[std::size_t(i) * side + kx];
            for (int ky = 0; ky < side; ++ky)
                for (int kz = 0; kz < side; ++kz)
                    A[(std::size_t(i) * side + ky) * side + kz] += e * coef[(std::size_t(kx) * side + ky) * side + kz];
        }
    std::vector<cd> B(std::size_t(n) * n * side, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int ky = 0; ky < side; ++ky) {
                const cd e = E[std::size_t(j) * side + ky];
                for (int kz = 0; kz < side; ++kz)
                    B[(std::size_t(i) * n + j) * side + kz] += e * A[(std::size_t(i) * side + ky) * side + kz];
            }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                cd s = 0.0;
                for (int kz = 0; kz < side; ++kz)
                    s += E[std::size_t(l) * side + kz] * B[(std::size_t(i) * n + j) * side + kz];
                out[(std::size_t(i) * n + j) * n + l] = s.real();
            }
    return out;
}

namespace {

double lp_on_grid(const FourierPotential& V, double p, int n) {
    const auto values = evaluate_on_grid(V, n);
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    // Fixed-size chunks keep the reduction order independent of the thread count.
    const std::size_t chunk = 4096;
    const std::size_t nchunks = (values.size() + chunk - 1) / chunk;
    std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < nchunks; ++c) {
        double s = 0.0;
        for (std::size_t i = c * chunk; i < std::min(values.size(), (c + 1) * chunk); ++i)
            s += std::pow(std::abs(values[i]), p);
        partial[c] = s;
    }
    double s = 0.0;
    for (double x : partial) s += x;
    const double cell = std::pow(kTwoPi / double(n), 3);
    return std::pow(s * cell, 1.0 / p);
}

}  // namespace

LpNorm lp_norm(const FourierPotential& V, double p, int grid, int max_grid, double rel_tol) {
    if (!(p > 1.5)) throw InvalidParameter("L^p norm needs p > 3/2");
    LpNorm out;
    out.grid = grid;
    out.value = lp_on_grid(V, p, grid);
    if (out.value == 0.0) {
        out.converged = true;
        return out;
    }
    while (2 * out.grid <= max_grid) {
        const int next = 2 * out.grid;
        const double v = lp_on_grid(V, p, next);
        out.refinement_delta = std::abs(v - out.value) / std::abs(v);
        out.value = v;
        out.grid = next;
        if (out.refinement_delta < rel_tol) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

NormReport norms(const FourierPotential& V, std::optional<double> p) {
    NormReport r;
    for (int s = 0; s <= 4; ++s) r.H[s] = sobolev_norm_sq(V, s);
    r.l1 = l1_coefficients(V);
    if (p) r.lp = lp_norm(V, *p);
    return r;
}

double q_parameter(const FourierPotential& W, const FourierPotential& V, double p) {
    const double lp = lp_norm(W, p).value;
    const double exponent = std::isinf(p) ? 1.0 : 2.0 * p / (2.0 * p - 3.0);
    return 1.0 + std::pow(lp, exponent) + sobolev_norm_sq(V, 4.0);
}

}  // namespace potentials
}  // namespace bfmix
