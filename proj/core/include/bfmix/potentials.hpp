#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfmix/fermi.hpp"
#include "bfmix/radial.hpp"
#include "bfmix/vec3.hpp"

namespace bfmix {

// Real, even potential on the 3-torus, V(x) = (2 pi)^{-3/2} sum_k V(k) e^{ikx}.
class FourierPotential {
public:
    using Entry = std::pair<Vec3i, double>;

    FourierPotential() = default;

    static FourierPotential from_coefficients(const std::vector<Entry>& entries, int cutoff,
                                              std::string label = {});
    static FourierPotential zero(int cutoff = 0);

    int cutoff() const { return cutoff_; }
    double coefficient(const Vec3i& k) const;
    double zero_mode() const { return coefficient({0, 0, 0}); }
    // Nonzero coefficients in lexicographic order of k.
    const std::vector<Entry>& entries() const { return entries_; }
    const std::string& label() const { return label_; }
    bool is_zero() const { return entries_.empty(); }

    double value_at(double x, double y, double z) const;
    FourierPotential scaled(double c) const;
    FourierPotential with_label(std::string label) const;

private:
    int cutoff_ = 0;
    std::vector<Entry> entries_;
    std::vector<double> dense_;  // (2 cutoff + 1)^3 lookup
    std::string label_;

    void build_lookup();
};

FourierPotential operator+(const FourierPotential& a, const FourierPotential& b);
FourierPotential operator-(const FourierPotential& a, const FourierPotential& b);

namespace potentials {

inline constexpr double kSymmetryTolerance = 1e-12;

FourierPotential from_radial_profile(const RadialPotential& profile, int N_scale, double g, int cutoff);

// Radial Fourier transform 4 pi / rho int r sin(rho r) v(r) dr (and 4 pi int r^2 v at rho = 0).
double radial_transform(const RadialPotential& profile, double rho, double tol = 1e-10);

FourierPotential convolve(const FourierPotential& V, const FourierPotential& U);

struct EffectivePotential {
    FourierPotential base;
    std::optional<FermiRadius> kF;  // empty for the k_F -> infinity limit
    std::string provenance;
};

EffectivePotential effective_potential_kF(const FourierPotential& V, const FermiRadius& kF);
EffectivePotential effective_potential_limit(const FourierPotential& W, const FourierPotential& V);

// W_kF(0) = (1/(2 pi kF)) sum_k |V(k)|^2 D_1(k, kF).
double effective_value_at_zero(const FourierPotential& V, const FermiRadius& kF);

struct SupDifference {
    double upper = 0.0;       // l1 bound over coefficient differences
    double grid_lower = 0.0;  // max over a 16^3 grid
};

SupDifference sup_difference(const FourierPotential& V, const FermiRadius& kF);

double lambda_coupling(int N, const FermiRadius& kF);

double sobolev_norm_sq(const FourierPotential& V, double s);
double l1_coefficients(const FourierPotential& V);

struct LpNorm {
    double value = 0.0;
    int grid = 0;
    double refinement_delta = 0.0;
    bool converged = false;
};

// L^p norm on the torus by the trapezoidal rule; p = infinity gives the grid maximum.
LpNorm lp_norm(const FourierPotential& V, double p, int grid = 64, int max_grid = 256, double rel_tol = 1e-4);

struct NormReport {
    double H[5] = {0, 0, 0, 0, 0};
    double l1 = 0.0;
    std::optional<LpNorm> lp;
};

NormReport norms(const FourierPotential& V, std::optional<double> p = std::nullopt);

// Q_p = 1 + ||W||_p^{2p/(2p-3)} + ||V||_{H^4}^2.
double q_parameter(const FourierPotential& W, const FourierPotential& V, double p);

// Values on the n^3 grid x_j = 2 pi j / n, row-major in (x, y, z).
std::vector<double> evaluate_on_grid(const FourierPotential& V, int n);

}  // namespace potentials
}  // namespace bfmix
