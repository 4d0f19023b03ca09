#include "bfmix/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>

#include "bfmix/error.hpp"
#include "bfmix/hashing.hpp"
#include "bfmix/lune_cache.hpp"
#include "bfmix/potentials.hpp"

namespace bfmix {

Vec3i canonical(const Vec3i& k) {
    int a[3] = {std::abs(k.x), std::abs(k.y), std::abs(k.z)};
    std::sort(a, a + 3);
    return {a[0], a[1], a[2]};
}

std::int64_t gcd3(const Vec3i& k) {
    std::int64_t g = std::abs(k.x);
    for (std::int64_t v : {std::int64_t(std::abs(k.y)), std::int64_t(std::abs(k.z))}) {
        std::int64_t a = g, b = v;
        while (b != 0) {
            std::int64_t t = a % b;
            a = b;
            b = t;
        }
        g = a;
    }
    return g;
}

std::string to_string(const Vec3i& k) {
    return std::to_string(k.x) + "," + std::to_string(k.y) + "," + std::to_string(k.z);
}

std::int64_t isqrt(std::int64_t n) {
    if (n < 0) return -1;
    auto r = std::int64_t(std::sqrt(double(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::int64_t isqrt128(__int128 n) {
    if (n < 0) return -1;
    auto r = (__int128)std::sqrt((long double)n);
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return std::int64_t(r);
}

FermiRadius FermiRadius::from_squared(std::int64_t kf2) {
    if (kf2 < 1) throw InvalidParameter("k_F^2 must be >= 1, got " + std::to_string(kf2));
    FermiRadius r;
    r.exact_ = true;
    r.kf2_int_ = kf2;
    r.kf2_ = double(kf2);
    r.kf_ = std::sqrt(double(kf2));
    return r;
}

FermiRadius FermiRadius::from_value(double kf) {
    if (!(kf >= 1.0)) throw InvalidParameter("k_F must be >= 1");
    FermiRadius r;
    r.exact_ = false;
    r.kf_ = kf;
    r.kf2_ = kf * kf;
    return r;
}

int FermiRadius::isqrt_remaining(std::int64_t m) const {
    if (exact_) {
        std::int64_t rem = kf2_int_ - m;
        return rem < 0 ? -1 : int(isqrt(rem));
    }
    double rem = kf2_ - double(m);
    if (rem < 0) return -1;
    auto n = std::int64_t(std::floor(std::sqrt(rem)));
    while (n > 0 && double(n * n + m) > kf2_) --n;
    while (double((n + 1) * (n + 1) + m) <= kf2_) ++n;
    return int(n);
}

int FermiRadius::enclosing_radius() const { return isqrt_remaining(0); }

std::string FermiRadius::key() const {
    return exact_ ? std::to_string(kf2_int_) : "r" + format_double(kf2_);
}

namespace lattice {

FermiBall fermi_ball(const FermiRadius& kF) {
    FermiBall ball{kF, {}, 0, 0};
    const int R = kF.enclosing_radius();
    for (int x = -R; x <= R; ++x)
        for (int y = -R; y <= R; ++y)
            for (int z = -R; z <= R; ++z) {
                Vec3i k{x, y, z};
                if (kF.contains(k.norm2())) {
                    ball.points.push_back(k);
                    ball.E_F += k.norm2();
                }
            }
    ball.M = std::int64_t(ball.points.size());
    return ball;
}

std::vector<Vec3i> lune_points(const Vec3i& k, const FermiRadius& kF) {
    std::vector<Vec3i> out;
    for_each_lune_point(k, kF, [&](const Vec3i& p) { out.push_back(p); });
    return out;
}

namespace {

inline double lune_term(double alpha, std::int64_t d) {
    if (alpha == 0.0) return 1.0;
    if (alpha == 1.0) return 1.0 / double(d);
    if (alpha == 2.0) return 1.0 / (double(d) * double(d));
    return std::pow(double(d), -alpha);
}

struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

LuneSum resolvent_sum_direct(double alpha, const Vec3i& k, const FermiRadius& kF) {
    if (!(alpha >= 0.0)) throw InvalidParameter("alpha must be nonnegative");
    if (k.is_zero()) return {};
    const int R = kF.enclosing_radius();
    const std::int64_t k2 = k.norm2();
    const int nslab = 2 * R + 1;
    std::vector<Kahan> slab_sum(nslab);
    std::vector<std::int64_t> slab_count(nslab, 0);

#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < nslab; ++s) {
        const int dz = s - R;
        Kahan acc;
        std::int64_t count = 0;
        const int ry = kF.isqrt_remaining(std::int64_t(dz) * dz);
        for (int dy = -ry; dy <= ry; ++dy) {
            const int rx = kF.isqrt_remaining(std::int64_t(dz) * dz + std::int64_t(dy) * dy);
            for (int dx = -rx; dx <= rx; ++dx) {
                const Vec3i p{k.x + dx, k.y + dy, k.z + dz};
                if (kF.contains(p.norm2())) continue;
                const std::int64_t d = 2 * p.dot(k) - k2;
                acc.add(lune_term(alpha, d));
                ++count;
            }
        }
        slab_sum[s] = acc;
        slab_count[s] = count;
    }

    Kahan total;
    std::int64_t count = 0;
    for (int s = 0; s < nslab; ++s) {
        total.add(slab_sum[s].sum);
        total.add(-slab_sum[s].c);
        count += slab_count[s];
    }
    return {total.sum, count};
}

LuneSum resolvent_sum_entry(double alpha, const Vec3i& k, const FermiRadius& kF) {
    if (k.is_zero()) return {};
    return LuneSumTable::global().get_or_compute(alpha, k, kF);
}

double resolvent_sum(double alpha, const Vec3i& k, const FermiRadius& kF) {
    return resolvent_sum_entry(alpha, k, kF).value;
}

Rational resolvent_sum_exact(int alpha, const Vec3i& k, const FermiRadius& kF) {
    if (alpha < 0) throw InvalidParameter("alpha must be nonnegative");
    if (!kF.exact()) throw InvalidParameter("exact mode needs an integer k_F^2");
    if (k.is_zero()) return Rational(0);
    std::map<std::int64_t, std::int64_t> histogram;
    std::int64_t count = 0;
    const std::int64_t k2 = k.norm2();
    for_each_lune_point(k, kF, [&](const Vec3i& p) {
        ++histogram[2 * p.dot(k) - k2];
        ++count;
    });
    if (count > kExactLuneLimit)
        throw OutOfRange("lune has " + std::to_string(count) + " points, exact mode limit is " +
                         std::to_string(kExactLuneLimit));
    Rational total(0);
    for (const auto& [d, n] : histogram) {
        boost::multiprecision::cpp_int den = 1;
        for (int i = 0; i < alpha; ++i) den *= d;
        total += Rational(boost::multiprecision::cpp_int(n), den);
    }
    return total;
}

double weighted_sum(double alpha, double beta, const FourierPotential& V, const FermiRadius& kF) {
    Kahan acc;
    for (const auto& [k, v] : V.entries()) {
        if (k.is_zero()) continue;
        const double weight = std::pow(1.0 + double(k.norm2()), beta);
        acc.add(v * v * weight * resolvent_sum(alpha, k, kF));
    }
    return acc.sum;
}

SummationFormulaParams summation_formula_params(const Vec3i& k, const FermiRadius& kF) {
    if (k.is_zero()) throw OutOfRange("summation formula needs k != 0");
    const std::int64_t k2 = k.norm2();
    if (double(k2) >= 4.0 * kF.squared()) throw OutOfRange("summation formula needs |k| < 2 k_F");
    SummationFormulaParams p;
    p.gcd = gcd3(k);
    p.ell = double(p.gcd) / std::sqrt(double(k2));
    p.m_star = k2 / (2 * p.gcd) + 1;
    std::int64_t root;  // floor(k_F |k|)
    if (auto e = kF.exact_squared()) {
        root = isqrt128((__int128)(*e) * k2);
    } else {
        long double prod = (long double)kF.squared() * (long double)k2;
        root = std::int64_t(std::floor(std::sqrt(prod)));
        while ((long double)root * root > prod) --root;
        while ((long double)(root + 1) * (root + 1) <= prod) ++root;
    }
    p.M = root / p.gcd;
    p.M_star = (root + k2) / p.gcd;
    return p;
}

SummationFormulaResult summation_formula(const Vec3i& k, const FermiRadius& kF, double alpha) {
    if (!(alpha > 0.0)) throw InvalidParameter("alpha must be positive");
    SummationFormulaResult r;
    r.params = summation_formula_params(k, kF);
    const auto& p = r.params;
    const double kn = std::sqrt(double(k.norm2()));
    const double kf = kF.value();
    const double kf2 = kF.squared();
    auto f = [&](std::int64_t m) { return std::pow(kn * (p.ell * double(m) - 0.5 * kn), -alpha); };

    Kahan main, boundary, fsum;
    for (std::int64_t m = p.m_star; m <= p.M; ++m) {
        const double t = p.ell * double(m) - 0.5 * kn;
        main.add(f(m) * t * p.ell);
    }
    for (std::int64_t m = p.M + 1; m <= p.M_star; ++m) {
        const double s = p.ell * double(m) - kn;
        boundary.add(f(m) * (kf2 - s * s) * p.ell);
    }
    for (std::int64_t m = p.m_star; m <= p.M_star; ++m) fsum.add(f(m));

    const double norm = std::pow(2.0, alpha);
    r.main_term = 2.0 * std::numbers::pi * kn * main.sum / norm;
    r.boundary_term = std::numbers::pi * boundary.sum / norm;
    r.error_scale = std::pow(kn, 11.0 / 3.0) * std::log(kf) * std::pow(kf, 2.0 / 3.0) * fsum.sum / norm;
    return r;
}

double log_floor(double kf) { return std::max(std::log(kf), 1.0); }

std::vector<AsymptoticsRow> asymptotics_report(const std::vector<Vec3i>& ks,
                                               const std::vector<FermiRadius>& kFs) {
    std::vector<AsymptoticsRow> rows;
    for (const auto& k : ks) {
        if (k.is_zero()) throw OutOfRange("asymptotics rows need k != 0");
        for (const auto& kF : kFs) {
            AsymptoticsRow row{k, kF};
            const double kf = kF.value();
            const double k2 = double(k.norm2());
            const double L = log_floor(kf);
            row.D1 = resolvent_sum(1.0, k, kF);
            row.D2 = resolvent_sum(2.0, k, kF);
            row.ratio = row.D1 / (2.0 * std::numbers::pi * kf);
            row.normalized_deviation =
                std::abs(row.ratio - 1.0) * std::cbrt(kf) / (std::pow(L, 5.0 / 3.0) * k2 * k2);
            row.D2_normalized = row.D2 / (k2 * k2 * std::pow(L, 2.0 / 3.0) * std::pow(kf, 2.0 / 3.0));
            row.large_k = k2 >= 4.0 * kF.squared();
            row.large_k_ratio = row.D1 * k2 / (kf * kf * kf);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace lattice
}  // namespace bfmix
