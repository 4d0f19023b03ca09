#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bfmix/fermi.hpp"
#include "bfmix/vec3.hpp"

namespace bfmix {

class FourierPotential;

namespace lattice {

using Rational = boost::multiprecision::cpp_rational;

struct FermiBall {
    FermiRadius kF;
    std::vector<Vec3i> points;
    std::int64_t M = 0;
    std::int64_t E_F = 0;
};

FermiBall fermi_ball(const FermiRadius& kF);

std::vector<Vec3i> lune_points(const Vec3i& k, const FermiRadius& kF);

// Calls f(p) for every p in L(k), in slab order.
template <class F>
void for_each_lune_point(const Vec3i& k, const FermiRadius& kF, F&& f) {
    if (k.is_zero()) return;
    const int R = kF.enclosing_radius();
    for (int dz = -R; dz <= R; ++dz) {
        const int ry = kF.isqrt_remaining(std::int64_t(dz) * dz);
        for (int dy = -ry; dy <= ry; ++dy) {
            const int rx = kF.isqrt_remaining(std::int64_t(dz) * dz + std::int64_t(dy) * dy);
            for (int dx = -rx; dx <= rx; ++dx) {
                const Vec3i p{k.x + dx, k.y + dy, k.z + dz};
                if (!kF.contains(p.norm2())) f(p);
            }
        }
    }
}

struct LuneSum {
    double value = 0.0;
    std::int64_t count = 0;
};

// Direct enumeration with Kahan slabs, no cache.
LuneSum resolvent_sum_direct(double alpha, const Vec3i& k, const FermiRadius& kF);

// Memoized D_alpha(k, k_F) through the process-wide table.
double resolvent_sum(double alpha, const Vec3i& k, const FermiRadius& kF);
LuneSum resolvent_sum_entry(double alpha, const Vec3i& k, const FermiRadius& kF);

inline constexpr std::int64_t kExactLuneLimit = 10000;

// Exact D_alpha for integer alpha >= 0 and integer k_F^2; |L(k)| must not exceed kExactLuneLimit.
Rational resolvent_sum_exact(int alpha, const Vec3i& k, const FermiRadius& kF);

double weighted_sum(double alpha, double beta, const FourierPotential& V, const FermiRadius& kF);

struct SummationFormulaParams {
    double ell = 0.0;
    std::int64_t gcd = 0;
    std::int64_t m_star = 0;
    std::int64_t M = 0;
    std::int64_t M_star = 0;
};

struct SummationFormulaResult {
    double main_term = 0.0;
    double boundary_term = 0.0;
    double error_scale = 0.0;
    SummationFormulaParams params;
};

SummationFormulaParams summation_formula_params(const Vec3i& k, const FermiRadius& kF);
SummationFormulaResult summation_formula(const Vec3i& k, const FermiRadius& kF, double alpha);

struct AsymptoticsRow {
    Vec3i k;
    FermiRadius kF;
    double D1 = 0.0;
    double ratio = 0.0;              // D1 / (2 pi kF)
    double normalized_deviation = 0.0;
    double D2 = 0.0;
    double D2_normalized = 0.0;      // D2 / (|k|^4 (ln kF)^{2/3} kF^{2/3})
    bool large_k = false;            // |k| >= 2 kF
    double large_k_ratio = 0.0;      // D1 |k|^2 / kF^3
};

double log_floor(double kf);  // max(ln kF, 1)

std::vector<AsymptoticsRow> asymptotics_report(const std::vector<Vec3i>& ks,
                                               const std::vector<FermiRadius>& kFs);

}  // namespace lattice
}  // namespace bfmix
