#pragma once

#include <functional>
#include <vector>

namespace bfmix {

// Piecewise-linear radial profile on [0, r_max]. A node position may appear twice to
// encode a jump (left value first). Zero beyond the last node.
class RadialPotential {
public:
    RadialPotential() = default;
    RadialPotential(std::vector<double> r, std::vector<double> values);

    static RadialPotential uniform(double r_max, std::vector<double> samples);
    static RadialPotential sample(const std::function<double(double)>& f, double r_max, std::size_t n);
    static RadialPotential indicator(double R, double height = 1.0);

    // Left limit at jump nodes, so an indicator of r <= R equals its height at R.
    double operator()(double r) const;
    double left_limit(double r) const;
    double right_limit(double r) const;

    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& values() const { return v_; }
    bool empty() const { return r_.empty(); }
    double r_max() const { return r_.empty() ? 0.0 : r_.back(); }
    double support_radius() const;
    std::vector<double> breakpoints() const;
    bool nonnegative() const;
    bool is_zero() const;

    RadialPotential scaled(double c) const;

    // 4 pi int r^2 v dr and 4 pi int r^2 v^2 dr, exact for the piecewise-linear profile.
    double integral_3d() const;
    double l2_norm_sq() const;

private:
    std::vector<double> r_;
    std::vector<double> v_;
};

// ca * a + cb * b on the union of nodes, jumps preserved.
RadialPotential combine(const RadialPotential& a, double ca, const RadialPotential& b, double cb);

// Min over nodes of the combination, both one-sided limits at jumps.
double min_value(const RadialPotential& p);

}  // namespace bfmix
