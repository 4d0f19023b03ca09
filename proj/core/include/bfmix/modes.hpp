#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bfmix/fermi.hpp"
#include "bfmix/vec3.hpp"

namespace bfmix {

// Ordered list of momentum modes. With a Fermi radius, each mode carries chi(k) = [|k| <= k_F].
class ModeSet {
public:
    ModeSet() = default;
    ModeSet(std::vector<Vec3i> modes, std::optional<FermiRadius> kF);

    // All k with |k|^2 <= cutoff2, lexicographic order.
    static ModeSet ball(std::int64_t cutoff2, std::optional<FermiRadius> kF = std::nullopt);

    std::size_t size() const { return modes_.size(); }
    const Vec3i& mode(std::size_t i) const { return modes_[i]; }
    const std::vector<Vec3i>& modes() const { return modes_; }
    // Index of k, or -1.
    int index_of(const Vec3i& k) const {
        if (lookup_.empty() || k.max_abs() > reach_) return -1;
        return lookup_[offset(k)];
    }
    bool inside(std::size_t i) const { return inside_[i] != 0; }
    std::size_t inside_count() const { return inside_count_; }
    std::size_t outside_count() const { return modes_.size() - inside_count_; }
    const std::optional<FermiRadius>& fermi() const { return kF_; }
    bool closed_under_negation() const;

    std::int64_t inside_energy() const;  // sum of |k|^2 over inside modes

private:
    std::size_t offset(const Vec3i& k) const {
        const std::size_t side = 2 * std::size_t(reach_) + 1;
        return (std::size_t(k.x + reach_) * side + std::size_t(k.y + reach_)) * side + std::size_t(k.z + reach_);
    }

    std::vector<Vec3i> modes_;
    std::vector<char> inside_;
    std::size_t inside_count_ = 0;
    std::optional<FermiRadius> kF_;
    int reach_ = 0;
    std::vector<int> lookup_;
};

// Default cutoff policy Lambda = k_F + 2, i.e. floor(k_F^2 + 4 k_F + 4).
std::int64_t default_cutoff2(const FermiRadius& kF);

}  // namespace bfmix
