#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bfmix/eigensolver.hpp"
#include "bfmix/fock_basis.hpp"
#include "bfmix/operators.hpp"
#include "bfmix/potentials.hpp"

namespace bfmix::spectra {

// Boson-only basis: N bosons on the ball |k|^2 <= cutoff2, optionally one total-momentum sector.
FockBasis boson_basis(int N, std::int64_t cutoff2, std::optional<Vec3i> sector = std::nullopt);

// Re-indexes a vector from one boson-only basis to another (same boson modes and N).
Eigen::VectorXd embed_bosons(const FockBasis& from, const Eigen::VectorXd& x, const FockBasis& to);

struct TrialParts {
    double rayleigh = 0.0;
    double energy = 0.0;  // <Psi, H Psi>
    double norm2 = 0.0;
    double h_phi = 0.0;   // <Phi, h Phi>
    double E0 = 0.0;      // <Phi, h Phi> - lambda^2 X
    double E1 = 0.0;
    double E2 = 0.0;
    double X = 0.0;
};

// Closed form for Psi = (1 - lambda R V_+) Phi (x) Omega. Phi lives on a boson-only basis without a
// sector. Lune sums run over `modes` when given, otherwise over the whole lattice.
TrialParts trial_state_energy(const FockBasis& bosons, const Eigen::VectorXd& phi, const FourierPotential& V,
                              const FourierPotential& W, const FermiRadius& kF,
                              const std::optional<ModeSet>& modes = std::nullopt);

// Same quantity from the explicit state in the 0+1-pair basis over `modes`.
TrialParts trial_state_energy_fock(const FockBasis& bosons, const Eigen::VectorXd& phi, const FourierPotential& V,
                                   const FourierPotential& W, const FermiRadius& kF, const ModeSet& modes);

struct EffectiveSpectrum {
    std::vector<double> values;
    double gap = 0.0;        // mu_2 - mu_1 (0 when only one state)
    double W0 = 0.0;         // W_kF(0); for the limit, the removed zero-mode constant V(0)^2
    std::size_t dim = 0;
    Eigen::VectorXd ground;  // on the sector basis
};

// Eigenvalues of sum(-Delta) + (1/N) sum_{i<j} (W - W_kF)(x_i - x_j); kF empty uses the limit
// W_kF -> V*V with its zero mode removed.
EffectiveSpectrum effective_spectrum(const FourierPotential& V, const FourierPotential& W,
                                     const std::optional<FermiRadius>& kF, int N, std::int64_t boson_cutoff2,
                                     int count, std::optional<Vec3i> sector = Vec3i{0, 0, 0},
                                     const EigenOptions& eig = {});

struct Theorem1Config {
    FourierPotential V;
    FourierPotential W;
    int N = 2;
    std::vector<std::int64_t> kf2_list;
    std::optional<std::int64_t> cutoff2;  // empty: default rule Lambda = kF + 2
    std::int64_t boson_cutoff2 = 1;
    int max_pairs = 1;
    int count = 1;
    std::optional<Vec3i> sector = Vec3i{0, 0, 0};
    double lp = std::numeric_limits<double>::infinity();
    bool overlap = false;
    EigenOptions eig;
    std::size_t dimension_cap = 2'000'000;
};

struct SpectrumRow {
    std::int64_t kf2 = 0;
    double kF = 0.0;
    double lambda = 0.0;
    std::int64_t cutoff2 = 0;
    int max_pairs = 0;
    std::size_t dim = 0;
    std::size_t dim_eff = 0;
    std::string method;
    std::vector<double> mu_H;
    std::vector<double> residuals;
    std::vector<double> mu_eff;
    double W_kF0 = 0.0;
    std::vector<double> diff;  // mu_H - (mu_eff - W_kF0 / 2)
    double trial_rayleigh = 0.0;
    double E_F = 0.0;          // sum of k^2 over inside modes
    std::size_t M = 0;         // inside mode count
    std::vector<double> mu_proxy;  // E_F + lambda N M V(0) + mu_H
    double const_V2 = 0.0;     // -1/2 sum |V(k)|^2
    double const_V0 = 0.0;     // -1/2 (N - 2) V(0)^2
    double Q = 0.0;
    double envelope = 0.0;     // C Q^2 N^2 max(ln kF, 1)^{5/3} kF^{-1/3}
    double envelope_C = 0.0;
    std::optional<double> overlap;
    std::string overlap_error;
    std::vector<int> clusters;
    bool failed = false;
    std::string error;
};

std::vector<SpectrumRow> theorem1_compare(const Theorem1Config& config);

struct OverlapReport {
    double overlap = 0.0;
    double gap_H = 0.0;
    double gap_eff = 0.0;
    std::size_t dim = 0;
};

OverlapReport corollary_overlap(const FourierPotential& V, const FourierPotential& W, int N, const FermiRadius& kF,
                                std::int64_t cutoff2, std::int64_t boson_cutoff2, int max_pairs,
                                std::optional<Vec3i> sector = Vec3i{0, 0, 0}, const EigenOptions& eig = {});

struct DecompositionConfig {
    FourierPotential V;
    FermiRadius kF = FermiRadius::from_squared(1);
    std::int64_t cutoff2 = 4;
    // vacuum check: bosons on |k|^2 <= vacuum_boson_cutoff2, states supported on |k|^2 <= vacuum_inner_cutoff2
    std::vector<int> vacuum_N{1, 2};
    std::int64_t vacuum_boson_cutoff2 = 4;
    std::int64_t vacuum_inner_cutoff2 = 1;
    // pair-sector checks
    int N = 1;
    std::int64_t boson_cutoff2 = 16;  // wide enough that no intermediate shift leaves the cutoff
    std::optional<Vec3i> sector = Vec3i{0, 0, 0};
    std::size_t dense_cap = 4000;
};

struct DecompositionReport {
    double vacuum_residual = 0.0;          // lambda^2 V_- T^{-1} V_+ against h_W[W_kF] + W_kF(0)/2
    double min_eig_minus_A2 = 0.0;
    double min_eig_minus_A3 = 0.0;
    double decomposition_residual = 0.0;   // A_1 + ... + A_4 against V_- T^{-1} V_+ on the 1-pair sector
    double completed_square_residual = 0.0;
    double max_abs_A[4] = {0, 0, 0, 0};
    std::size_t one_pair_dim = 0;
    std::size_t total_dim = 0;
};

DecompositionReport quadratic_decomposition_check(const DecompositionConfig& config);

// Dense 1-pair blocks of A_1..A_4 over a basis (rows and columns indexed by `states`).
Eigen::MatrixXd a_block(const FockBasis& basis, const FourierPotential& V, int n, const std::vector<std::size_t>& states);

}  // namespace bfmix::spectra
