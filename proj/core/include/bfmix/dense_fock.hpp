#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bfmix/fock_basis.hpp"
#include "bfmix/operators.hpp"

namespace bfmix::fockcheck {

// Fermionic occupation states over a mode set (at most 64 modes), stored as bitmasks.
// a*_j and a_j carry the sign (-1)^{#occupied below j}.
class FermionSpace {
public:
    static FermionSpace full(const ModeSet& modes);
    // At most max_pairs particles and holes each, with charge |n_p - n_h| <= max_charge.
    static FermionSpace excitations(const ModeSet& modes, int max_pairs, int max_charge);
    static FermionSpace fixed_number(const ModeSet& modes, int count);

    std::size_t size() const { return masks_.size(); }
    std::uint64_t mask(std::size_t i) const { return masks_[i]; }
    std::int64_t find(std::uint64_t mask) const;
    const ModeSet& modes() const { return *modes_; }

    // (target, sign) or nothing.
    std::optional<std::pair<std::size_t, int>> create(std::size_t i, int j) const;
    std::optional<std::pair<std::size_t, int>> annihilate(std::size_t i, int j) const;
    // sum over particles of k^2 minus sum over holes of k^2 (mask read as particle-hole occupations)
    double excitation_energy(std::size_t i) const;
    int particles(std::size_t i) const;
    int holes(std::size_t i) const;

private:
    FermionSpace(const ModeSet& modes, std::vector<std::uint64_t> masks);
    const ModeSet* modes_;
    std::vector<std::uint64_t> masks_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::uint64_t inside_mask_ = 0;
};

struct CarReport {
    double bb = 0.0;     // {b_k, b_l*} - chi_perp(k) delta
    double cc = 0.0;     // {c_k, c_l*} - chi(k) delta
    double mixed = 0.0;  // {b, c}, {b, c*}, {b, b}, {c, c}
    double max() const { return std::max({bb, cc, mixed}); }
};

// Anticommutators on the full Fock space over the modes (d <= 12).
CarReport car_check(const ModeSet& modes);

// Max residual of the four pull-through identities for every mode k, on seeded random vectors
// supported where every evaluation of f stays inside the sector {n_p, n_h <= max_pairs, n_p = n_h}.
double pull_through_check(const ModeSet& modes, int max_pairs, const std::function<double(double)>& f,
                          std::uint64_t seed, int vectors = 3);

// max |V_minus - V_plus^T| and max |H - H^T| on a dense-capable basis.
struct AdjointReport {
    double v_adjoint = 0.0;
    double h_symmetry = 0.0;
    double apply_vs_dense = 0.0;  // matrix-free apply against the dense matrix on random vectors
};
AdjointReport adjoint_check(const FockBasis& basis, const Couplings& c, std::uint64_t seed, std::size_t cap = 5000);

// Largest H entry between states of different total momentum.
double momentum_check(const FockBasis& basis, const Couplings& c, std::size_t cap = 5000);

struct ParticleHoleReport {
    double residual = 0.0;
    std::size_t dimension = 0;
    double constant = 0.0;  // E_F restricted to the modes + lambda N M V(0)
};

// Dense R* H R against (E_F + lambda N M V(0)) + H_ph on the full M-fermion sector of the modes.
ParticleHoleReport particle_hole_check(const ModeSet& modes, const ModeSet& boson_modes, int N,
                                       const FourierPotential& V, const FourierPotential& W, double lambda,
                                       std::size_t cap = 5000);

struct InequalityReport {
    int trials = 0;
    int kinetic_violations = 0;   // <N+> <= <T>
    int diagonal_violations = 0;  // |<V_diag>| <= 2 N |V|_l1 <N+>
    double kinetic_margin = 0.0;  // min over trials of rhs - lhs
    double diagonal_margin = 0.0;
};

InequalityReport inequality_suite(const FockBasis& basis, const FourierPotential& V, int trials, std::uint64_t seed);

// Seeded standard-normal vector, entry i drawn from (seed, offset + i).
Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed, std::uint64_t offset = 0);

}  // namespace bfmix::fockcheck
