#include "bfmix/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "bfmix/error.hpp"

namespace bfmix::quad {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
    if (b == a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // One forced split so that symmetric integrands cannot fool the first estimate.
    const double m = 0.5 * (a + b);
    const double fl = f(0.5 * (a + m)), fr = f(0.5 * (m + b));
    const double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    (void)whole;
    return simpson_rec(f, a, m, fa, fl, fm, left, 0.5 * tol, max_depth) +
           simpson_rec(f, m, b, fm, fr, fb, right, 0.5 * tol, max_depth);
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breakpoints, double tol) {
    if (b <= a) return 0.0;
    std::vector<double> pts{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double x : breakpoints)
        if (x > a && x < b && x > pts.back()) pts.push_back(x);
    pts.push_back(b);
    const double piece_tol = tol / double(pts.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i], hi = pts[i + 1];
        // Stay strictly inside each piece so jump values at the edges never mix.
        const double inner_lo = std::nextafter(std::nextafter(lo, hi), hi);
        const double inner_hi = std::nextafter(std::nextafter(hi, lo), lo);
        if (inner_hi <= inner_lo) continue;
        total += adaptive_simpson(f, inner_lo, inner_hi, piece_tol);
    }
    return total;
}

double simpson_samples(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    if (n < 3 || n % 2 == 0) throw InvalidParameter("Simpson rule needs an odd number of samples >= 3");
    double s = y.front() + y.back();
    for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
    return s * h / 3.0;
}

}  // namespace bfmix::quad
