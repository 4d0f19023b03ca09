#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bfmix/modes.hpp"

namespace bfmix {

inline constexpr int kMaxBosons = 16;
inline constexpr int kMaxOccupied = 6;  // three particle-hole pairs

using BosonTuple = std::array<std::uint16_t, kMaxBosons>;   // nondecreasing boson mode indices
using Occupation = std::array<std::uint16_t, kMaxOccupied>; // ascending fermion mode indices

struct FockBasisOptions {
    int N = 0;
    int max_pairs = 1;
    std::optional<Vec3i> momentum_sector;
    std::size_t dimension_cap = 20'000'000;
};

// States (boson configuration, charge-zero excitation configuration). Order key:
// (boson tuple lexicographic, pair count, occupied-index tuple lexicographic).
class FockBasis {
public:
    FockBasis(ModeSet modes, ModeSet boson_modes, FockBasisOptions options);

    std::size_t dim() const { return state_b_.size(); }
    int N() const { return opt_.N; }
    int max_pairs() const { return opt_.max_pairs; }
    const std::optional<Vec3i>& sector() const { return opt_.momentum_sector; }
    const ModeSet& modes() const { return modes_; }
    const ModeSet& boson_modes() const { return bosons_; }

    std::size_t boson_config_count() const { return bosons_count_; }
    const std::uint16_t* boson_config(std::size_t b) const { return &boson_data_[b * std::size_t(opt_.N)]; }
    Vec3i boson_momentum(std::size_t b) const { return boson_momentum_[b]; }
    std::int64_t boson_kinetic(std::size_t b) const { return boson_kinetic_[b]; }

    std::size_t fermion_config_count() const { return fermion_size_.size(); }
    const std::uint16_t* fermion_config(std::size_t f) const { return &fermion_data_[f * kMaxOccupied]; }
    int fermion_size(std::size_t f) const { return fermion_size_[f]; }
    int pair_count(std::size_t f) const { return fermion_size_[f] / 2; }
    Vec3i fermion_momentum(std::size_t f) const { return fermion_momentum_[f]; }

    std::uint32_t state_boson(std::size_t s) const { return state_b_[s]; }
    std::uint32_t state_fermion(std::size_t s) const { return state_f_[s]; }
    Vec3i total_momentum(std::size_t s) const {
        return boson_momentum_[state_b_[s]] + fermion_momentum_[state_f_[s]];
    }

    std::uint64_t boson_key(const std::uint16_t* tuple) const;
    std::uint64_t fermion_key(const std::uint16_t* occ, int n) const;
    std::int64_t find_keys(std::uint64_t bkey, std::uint64_t fkey) const;
    // Config indices, or -1.
    std::int64_t boson_index(const std::uint16_t* tuple) const;
    std::int64_t fermion_index(const std::uint16_t* occ, int n) const;
    // State with boson config b and excitation config f, or -1.
    std::int64_t find_state(std::size_t b, std::size_t f) const;
    std::int64_t find(const std::uint16_t* bosons, const std::uint16_t* occ, int nocc) const {
        return find_keys(boson_key(bosons), fermion_key(occ, nocc));
    }
    // Index of the 0-pair state with the given boson configuration, or -1.
    std::int64_t vacuum_state(std::size_t boson_config) const;

    std::string metadata_json() const;

private:
    void enumerate_bosons();
    void enumerate_fermions();
    void assemble_states();

    ModeSet modes_;
    ModeSet bosons_;
    FockBasisOptions opt_;
    int bits_b_ = 1;
    int bits_f_ = 1;

    std::size_t bosons_count_ = 0;
    std::vector<std::uint16_t> boson_data_;
    std::vector<Vec3i> boson_momentum_;
    std::vector<std::int64_t> boson_kinetic_;
    std::unordered_map<std::uint64_t, std::uint32_t> boson_index_;

    std::vector<std::uint16_t> fermion_data_;
    std::vector<int> fermion_size_;
    std::vector<Vec3i> fermion_momentum_;
    std::unordered_map<std::uint64_t, std::uint32_t> fermion_index_;
    std::vector<std::vector<std::uint32_t>> groups_;  // fermion configs per momentum group
    std::vector<std::uint32_t> boson_group_;          // group used by each boson config

    std::vector<std::uint32_t> state_b_;
    std::vector<std::uint32_t> state_f_;
    std::vector<std::size_t> boson_start_;  // states of boson config b: [start[b], start[b+1])
};

}  // namespace bfmix
