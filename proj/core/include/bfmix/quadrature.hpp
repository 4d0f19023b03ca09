#pragma once

#include <functional>
#include <vector>

namespace bfmix::quad {

// Adaptive Simpson on [a, b] with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                        int max_depth = 48);

// Splits [a, b] at every breakpoint inside it and integrates each piece adaptively.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breakpoints, double tol = 1e-10);

// Composite Simpson on uniform samples (odd count).
double simpson_samples(const std::vector<double>& y, double h);

}  // namespace bfmix::quad
