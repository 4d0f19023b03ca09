#include "bfmix/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bfmix/error.hpp"

namespace bfmix {

RadialPotential::RadialPotential(std::vector<double> r, std::vector<double> values)
    : r_(std::move(r)), v_(std::move(values)) {
    if (r_.size() != v_.size()) throw ValidationError("values", "size differs from r_grid");
    if (r_.empty()) return;
    if (r_.front() != 0.0) throw ValidationError("r_grid", "must start at 0");
    for (std::size_t i = 1; i < r_.size(); ++i) {
        if (r_[i] < r_[i - 1]) throw ValidationError("r_grid", "must be nondecreasing");
        if (i >= 2 && r_[i] == r_[i - 1] && r_[i - 1] == r_[i - 2])
            throw ValidationError("r_grid", "a node may repeat at most once");
    }
    for (double v : v_)
        if (!std::isfinite(v)) throw ValidationError("values", "non-finite sample");
}

RadialPotential RadialPotential::uniform(double r_max, std::vector<double> samples) {
    if (!(r_max > 0.0)) throw ValidationError("r_max", "must be positive");
    if (samples.size() < 2) throw ValidationError("samples", "need at least two samples");
    std::vector<double> r(samples.size());
    const double h = r_max / double(samples.size() - 1);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = double(i) * h;
    r.back() = r_max;
    return {std::move(r), std::move(samples)};
}

RadialPotential RadialPotential::sample(const std::function<double(double)>& f, double r_max, std::size_t n) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = f(r_max * double(i) / double(n - 1));
    return uniform(r_max, std::move(s));
}

RadialPotential RadialPotential::indicator(double R, double height) {
    return {{0.0, R, R}, {height, height, 0.0}};
}

double RadialPotential::left_limit(double r) const {
    if (r_.empty()) return 0.0;
    r = std::abs(r);
    if (r > r_.back()) return 0.0;
    auto it = std::lower_bound(r_.begin(), r_.end(), r);
    std::size_t j = std::size_t(it - r_.begin());
    if (*it == r) return v_[j];
    const std::size_t i = j - 1;
    const double t = (r - r_[i]) / (r_[j] - r_[i]);
    return v_[i] + t * (v_[j] - v_[i]);
}

double RadialPotential::right_limit(double r) const {
    if (r_.empty()) return 0.0;
    r = std::abs(r);
    if (r >= r_.back()) return r == r_.back() && r_.size() >= 2 && r_[r_.size() - 2] == r ? v_.back() : 0.0;
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    std::size_t j = std::size_t(it - r_.begin());
    const std::size_t i = j - 1;
    if (r_[i] == r) return v_[i];
    const double t = (r - r_[i]) / (r_[j] - r_[i]);
    return v_[i] + t * (v_[j] - v_[i]);
}

double RadialPotential::operator()(double r) const { return left_limit(r); }

double RadialPotential::support_radius() const {
    std::size_t last = r_.size();
    for (std::size_t i = r_.size(); i-- > 0;)
        if (v_[i] != 0.0) {
            last = i;
            break;
        }
    if (last == r_.size()) return 0.0;
    return last + 1 < r_.size() ? r_[last + 1] : r_[last];
}

std::vector<double> RadialPotential::breakpoints() const {
    std::vector<double> b;
    for (double x : r_)
        if (b.empty() || x != b.back()) b.push_back(x);
    return b;
}

bool RadialPotential::nonnegative() const {
    return std::all_of(v_.begin(), v_.end(), [](double v) { return v >= 0.0; });
}

bool RadialPotential::is_zero() const {
    return std::all_of(v_.begin(), v_.end(), [](double v) { return v == 0.0; });
}

RadialPotential RadialPotential::scaled(double c) const {
    std::vector<double> v(v_);
    for (double& x : v) x *= c;
    return {r_, std::move(v)};
}

namespace {

// Three-point Gauss-Legendre, exact up to degree five on each linear piece.
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
double segment_integral(const std::vector<double>& r, const std::vector<double>& v, F&& g) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double a = r[i], b = r[i + 1];
        if (b == a) continue;
        const double va = v[i], vb = v[i + 1];
        total += gauss3([&](double x) { return g(x, va + (x - a) / (b - a) * (vb - va)); }, a, b);
    }
    return total;
}

}  // namespace

double RadialPotential::integral_3d() const {
    return 4.0 * std::numbers::pi * segment_integral(r_, v_, [](double x, double v) { return x * x * v; });
}

double RadialPotential::l2_norm_sq() const {
    return 4.0 * std::numbers::pi * segment_integral(r_, v_, [](double x, double v) { return x * x * v * v; });
}

RadialPotential combine(const RadialPotential& a, double ca, const RadialPotential& b, double cb) {
    std::vector<double> pos;
    for (double x : a.r()) pos.push_back(x);
    for (double x : b.r()) pos.push_back(x);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    if (pos.empty()) return {};
    std::vector<double> r, v;
    for (double x : pos) {
        const double left = ca * a.left_limit(x) + cb * b.left_limit(x);
        const double right = ca * a.right_limit(x) + cb * b.right_limit(x);
        r.push_back(x);
        v.push_back(left);
        if (right != left && x != pos.back()) {
            r.push_back(x);
            v.push_back(right);
        }
    }
    return {std::move(r), std::move(v)};
}

double min_value(const RadialPotential& p) {
    if (p.empty()) return 0.0;
    double m = std::numeric_limits<double>::infinity();
    for (double v : p.values()) m = std::min(m, v);
    return m;
}

}  // namespace bfmix
