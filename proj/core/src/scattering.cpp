#include "bfmix/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bfmix/error.hpp"
#include "bfmix/quadrature.hpp"

namespace bfmix::scattering {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double gauss3(F&& f, double a, double b) {
    static const double x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += w[i] * f(c + h * x[i]);
    return s * h;
}

template <class F>
double integrate_pieces(F&& f, std::vector<double> pts, double a, double b) {
    pts.push_back(a);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    double prev = a;
    for (double x : pts) {
        if (x <= prev) continue;
        if (x > b) break;
        total += gauss3(f, prev, x);
        prev = x;
    }
    return total;
}

// Cumulative U(t) = int_0^t tau u(tau) dtau, exact for piecewise-linear u.
class Cumulative {
public:
    explicit Cumulative(const RadialPotential& u) : r_(u.r()), v_(u.values()), cum_(r_.size(), 0.0) {
        for (std::size_t i = 1; i < r_.size(); ++i) cum_[i] = cum_[i - 1] + piece(i - 1, r_[i]);
    }
    double operator()(double t) const {
        if (r_.empty() || t <= 0.0) return 0.0;
        if (t >= r_.back()) return cum_.back();
        auto it = std::upper_bound(r_.begin(), r_.end(), t);
        const std::size_t i = std::size_t(it - r_.begin()) - 1;
        return cum_[i] + piece(i, t);
    }
    const std::vector<double>& nodes() const { return r_; }

private:
    double piece(std::size_t i, double t) const {
        const double a = r_[i], b = r_[i + 1];
        if (b == a) return 0.0;
        const double beta = (v_[i + 1] - v_[i]) / (b - a);
        const double alpha = v_[i] - beta * a;
        return alpha * (t * t - a * a) / 2.0 + beta * (t * t * t - a * a * a) / 3.0;
    }
    std::vector<double> r_, v_, cum_;
};

double convolution_at(const RadialPotential& v, const Cumulative& U, const RadialPotential& u, double r) {
    const double Rv = v.support_radius();
    if (Rv == 0.0 || u.support_radius() == 0.0) return 0.0;
    if (r == 0.0) {
        auto f = [&](double s) { return s * s * v(s) * u(s); };
        std::vector<double> pts = v.breakpoints();
        for (double x : u.breakpoints()) pts.push_back(x);
        return 4.0 * kPi * integrate_pieces(f, pts, 0.0, Rv);
    }
    std::vector<double> pts = v.breakpoints();
    pts.push_back(r);
    for (double n : U.nodes()) {
        pts.push_back(n - r);
        pts.push_back(r - n);
        pts.push_back(r + n);
    }
    auto f = [&](double s) { return s * v(s) * (U(r + s) - U(std::abs(r - s))); };
    return 2.0 * kPi / r * integrate_pieces(f, pts, 0.0, Rv);
}

}  // namespace

double radial_convolution_at(const RadialPotential& v, const RadialPotential& u, double r) {
    Cumulative U(u);
    return convolution_at(v, U, u, std::abs(r));
}

RadialPotential radial_convolution(const RadialPotential& v, const RadialPotential& u, std::size_t n_out) {
    if (n_out < 2) throw InvalidParameter("radial convolution needs at least two output points");
    const double R = v.support_radius() + u.support_radius();
    if (v.is_zero() || u.is_zero() || R == 0.0) return RadialPotential::uniform(1.0, {0.0, 0.0});
    Cumulative U(u);
    std::vector<double> samples(n_out);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < n_out; ++i) {
        const double r = R * double(i) / double(n_out - 1);
        samples[i] = i + 1 == n_out ? 0.0 : convolution_at(v, U, u, r);
    }
    return RadialPotential::uniform(R, std::move(samples));
}

double inner_3d(const RadialPotential& a, const RadialPotential& b) {
    const double R = std::min(a.support_radius(), b.support_radius());
    if (R == 0.0) return 0.0;
    std::vector<double> pts = a.breakpoints();
    for (double x : b.breakpoints()) pts.push_back(x);
    return 4.0 * kPi * integrate_pieces([&](double r) { return r * r * a(r) * b(r); }, pts, 0.0, R);
}

namespace {

struct Integration {
    double a = 0.0;
    double a_integral = 0.0;
    bool crossing = false;
};

Integration integrate_rk4(const RadialPotential& w, double R, std::size_t n) {
    const double h = R / double(n);
    double u = 0.0, up = 1.0;
    std::vector<double> integrand(n + 1, 0.0);
    bool crossing = false;
    double max_up = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = h * double(i);
        const double w0 = 0.5 * w(r), wm = 0.5 * w(r + 0.5 * h), w1 = 0.5 * w(i + 1 == n ? R : r + h);
        const double k1u = up, k1p = w0 * u;
        const double k2u = up + 0.5 * h * k1p, k2p = wm * (u + 0.5 * h * k1u);
        const double k3u = up + 0.5 * h * k2p, k3p = wm * (u + 0.5 * h * k2u);
        const double k4u = up + h * k3p, k4p = w1 * (u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        up += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if (u <= 0.0) crossing = true;
        max_up = std::max(max_up, std::abs(up));
        const double rn = i + 1 == n ? R : r + h;
        integrand[i + 1] = rn * w(rn) * u;
    }
    if (std::abs(up) <= 1e-13 * max_up) throw ResonanceError("zero-energy resonance: u'(R) vanishes");
    Integration out;
    out.a = R - u / up;
    out.a_integral = 0.5 * quad::simpson_samples(integrand, h) / up;
    out.crossing = crossing;
    return out;
}

}  // namespace

ScatteringResult scattering_length(const RadialPotential& w_g, double tol) {
    ScatteringResult res;
    const double R = w_g.support_radius();
    res.R = R;
    if (R == 0.0 || w_g.is_zero()) return res;
    std::size_t n = 4096;
    Integration coarse = integrate_rk4(w_g, R, n);
    Integration fine = integrate_rk4(w_g, R, 2 * n);
    res.richardson_delta = std::abs(fine.a - coarse.a);
    while (res.richardson_delta > tol && n < (std::size_t(1) << 18)) {
        n *= 2;
        coarse = fine;
        fine = integrate_rk4(w_g, R, 2 * n);
        res.richardson_delta = std::abs(fine.a - coarse.a);
    }
    res.a = fine.a;
    res.a_integral = fine.a_integral;
    res.steps = 2 * n;
    res.discrepancy = std::abs(res.a - res.a_integral) / std::max(std::abs(res.a), 1e-300);
    res.bound_state_crossing = fine.crossing;
    return res;
}

CriticalCouplings critical_couplings(const RadialPotential& w, const RadialPotential& v) {
    return critical_couplings(w, v, radial_convolution(v, v));
}

CriticalCouplings critical_couplings(const RadialPotential& w, const RadialPotential& v, const RadialPotential& vv) {
    CriticalCouplings c;
    c.v_l2_sq = v.l2_norm_sq();
    if (c.v_l2_sq == 0.0) throw InvalidParameter("v vanishes: g_star = w(0)/||v||^2 divides by zero");
    c.vv0 = vv(0.0);
    c.g_star = w(0.0) / c.v_l2_sq;
    c.g_star_sqrt = std::sqrt(std::max(c.g_star, 0.0));
    auto nonneg = [&](double g) { return min_value(combine(w, 1.0, vv, -g * g)) >= 0.0; };
    double lo = 0.0, hi = c.g_star_sqrt;
    if (hi == 0.0) return c;
    if (nonneg(hi)) {
        c.g0 = hi;
        return c;
    }
    while (hi - lo > 1e-10 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (nonneg(mid) ? lo : hi) = mid;
    }
    c.g0 = lo;
    return c;
}

PhaseDiagram energy_curve(const RadialPotential& w, const RadialPotential& v, const std::vector<double>& g_grid) {
    PhaseDiagram pd;
    const RadialPotential vv = radial_convolution(v, v);
    pd.couplings = critical_couplings(w, v, vv);
    const double int_w = w.integral_3d();
    const double int_v = v.integral_3d();
    pd.points.resize(g_grid.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < g_grid.size(); ++i) {
        CurvePoint& p = pd.points[i];
        p.g = g_grid[i];
        p.above_g0 = p.g > pd.couplings.g0;
        p.eg2 = 4.0 * kPi * (int_w - p.g * p.g * int_v * int_v);
        try {
            const auto res = scattering_length(combine(w, 1.0, vv, -p.g * p.g));
            p.a = res.a;
            p.four_pi_a = 4.0 * kPi * res.a;
            p.bound_state_crossing = res.bound_state_crossing;
        } catch (const Error& e) {
            p.ok = false;
            p.error = e.what();
            p.a = p.four_pi_a = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return pd;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidParameter("slope fit needs matching sizes >= 2");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(lx.size());
    my /= double(ly.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

CollapseTable collapse_energy(const RadialPotential& psi, const RadialPotential& w, const RadialPotential& v, double g,
                              const std::vector<int>& N_list) {
    const double norm2 = psi.l2_norm_sq();
    if (!(norm2 > 0.0)) throw InvalidParameter("psi must not vanish");
    const double c = 1.0 / std::sqrt(norm2);

    CollapseTable t;
    t.g = g;
    const auto& r = psi.r();
    const auto& y = psi.values();
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double a = r[i], b = r[i + 1];
        if (b == a) continue;
        const double s = c * (y[i + 1] - y[i]) / (b - a);
        t.kinetic += 4.0 * kPi * s * s * (b * b * b - a * a * a) / 3.0;
    }

    // |psi|^2 resampled on a refined node set.
    std::vector<double> rr, dens;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double a = r[i], b = r[i + 1];
        const int sub = b == a ? 1 : 4;
        for (int j = 0; j < sub; ++j) {
            const double x = a + (b - a) * double(j) / double(sub);
            const double val = j == 0 ? c * y[i] : c * psi(x);
            rr.push_back(x);
            dens.push_back(val * val);
        }
    }
    rr.push_back(r.back());
    dens.push_back(c * y.back() * c * y.back());
    const RadialPotential rho(rr, dens);
    const RadialPotential rho2 = radial_convolution(rho, rho);
    const RadialPotential vv = radial_convolution(v, v);
    t.pair_w = inner_3d(rho2, w);
    t.pair_vv = inner_3d(rho2, vv);
    t.pair_integral = t.pair_w - g * g * t.pair_vv;

    std::vector<double> xs, ys;
    bool all_negative = true;
    for (int N : N_list) {
        if (N < 1) throw InvalidParameter("N must be positive");
        const double n = double(N);
        const double e = n * n * t.kinetic + 0.5 * n * n * (n - 1.0) * t.pair_integral;
        t.N.push_back(N);
        t.energy_per_particle.push_back(e);
        xs.push_back(n);
        ys.push_back(-e);
        if (!(e < 0.0)) all_negative = false;
    }
    t.slope = all_negative && xs.size() >= 2 ? fit_loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
    return t;
}

}  // namespace bfmix::scattering
