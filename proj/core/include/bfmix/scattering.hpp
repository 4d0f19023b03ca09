#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfmix/radial.hpp"

namespace bfmix::scattering {

// (v*u)(r) = (2 pi / r) int s v(s) [U(r+s) - U(|r-s|)] ds with U'(t) = t u(t), sampled on
// n_out uniform points over [0, R_v + R_u]. Each piece is integrated exactly.
RadialPotential radial_convolution(const RadialPotential& v, const RadialPotential& u, std::size_t n_out = 1025);
double radial_convolution_at(const RadialPotential& v, const RadialPotential& u, double r);

// 4 pi int r^2 a(r) b(r) dr, exact for piecewise-linear profiles.
double inner_3d(const RadialPotential& a, const RadialPotential& b);

struct ScatteringResult {
    double a = 0.0;
    double a_integral = 0.0;
    double discrepancy = 0.0;       // |a - a_integral| / max(|a|, tiny)
    double richardson_delta = 0.0;  // |a(h) - a(h/2)|
    std::size_t steps = 0;
    double R = 0.0;
    bool bound_state_crossing = false;
};

ScatteringResult scattering_length(const RadialPotential& w_g, double tol = 1e-8);

struct CriticalCouplings {
    double g0 = 0.0;
    double g_star = 0.0;       // w(0) / ||v||^2 as defined
    double g_star_sqrt = 0.0;  // sqrt(g_star): where w_g(0) changes sign
    double vv0 = 0.0;          // (v*v)(0)
    double v_l2_sq = 0.0;
};

CriticalCouplings critical_couplings(const RadialPotential& w, const RadialPotential& v);
CriticalCouplings critical_couplings(const RadialPotential& w, const RadialPotential& v, const RadialPotential& vv);

struct CurvePoint {
    double g = 0.0;
    double a = 0.0;
    double four_pi_a = 0.0;
    double eg2 = 0.0;
    bool above_g0 = false;
    bool ok = true;
    bool bound_state_crossing = false;
    std::string error;
};

struct PhaseDiagram {
    std::vector<CurvePoint> points;
    CriticalCouplings couplings;
    std::vector<std::pair<double, double>> collapse_slopes;  // g -> fitted exponent
};

PhaseDiagram energy_curve(const RadialPotential& w, const RadialPotential& v, const std::vector<double>& g_grid);

struct CollapseTable {
    double g = 0.0;
    double kinetic = 0.0;         // ||grad psi||^2
    double pair_integral = 0.0;   // int (|psi|^2 * |psi|^2) w_g
    double pair_w = 0.0;          // part from w
    double pair_vv = 0.0;         // part from v*v, enters with -g^2
    std::vector<int> N;
    std::vector<double> energy_per_particle;
    double slope = 0.0;           // fitted log-log slope of -E(N)/N, NaN unless all negative
};

CollapseTable collapse_energy(const RadialPotential& psi, const RadialPotential& w, const RadialPotential& v, double g,
                              const std::vector<int>& N_list);

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bfmix::scattering
