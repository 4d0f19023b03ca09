#include "bfmix/fock_basis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include <json.hpp>

#include "bfmix/error.hpp"

namespace bfmix {

namespace {

int bit_width_for(std::size_t values) {
    int bits = 1;
    while ((std::size_t(1) << bits) < values) ++bits;
    return bits;
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

}  // namespace

FockBasis::FockBasis(ModeSet modes, ModeSet boson_modes, FockBasisOptions options)
    : modes_(std::move(modes)), bosons_(std::move(boson_modes)), opt_(options) {
    if (opt_.N < 0 || opt_.N > kMaxBosons) throw InvalidParameter("N must lie in [0, 16]");
    if (opt_.max_pairs < 0 || 2 * opt_.max_pairs > kMaxOccupied) throw InvalidParameter("max_pairs must lie in [0, 3]");
    if (!modes_.fermi() && modes_.size() > 0) throw InvalidParameter("fermion modes need a Fermi radius");
    if (opt_.N > 0 && bosons_.size() == 0) throw InvalidParameter("N > 0 needs boson modes");
    bits_b_ = bit_width_for(std::max<std::size_t>(bosons_.size(), 2));
    bits_f_ = bit_width_for(modes_.size() + 1);
    if (opt_.N * bits_b_ > 64) throw InvalidParameter("too many bosons for the boson mode count");
    if (2 * opt_.max_pairs * bits_f_ > 64) throw InvalidParameter("too many pairs for the fermion mode count");
    enumerate_bosons();
    enumerate_fermions();
    assemble_states();
}

std::uint64_t FockBasis::boson_key(const std::uint16_t* tuple) const {
    std::uint64_t key = 0;
    for (int i = 0; i < opt_.N; ++i) key = (key << bits_b_) | tuple[i];
    return key;
}

std::uint64_t FockBasis::fermion_key(const std::uint16_t* occ, int n) const {
    std::uint64_t key = 0;
    for (int i = 0; i < n; ++i) key = (key << bits_f_) | std::uint64_t(occ[i] + 1);
    return key;
}

void FockBasis::enumerate_bosons() {
    const std::size_t B = bosons_.size();
    const int N = opt_.N;
    const double count = N == 0 ? 1.0 : binomial(B + N - 1, std::size_t(N));
    if (count > double(opt_.dimension_cap)) throw CapacityError(std::size_t(count), opt_.dimension_cap);
    std::vector<std::uint16_t> t(std::size_t(N), 0);
    while (true) {
        Vec3i P{};
        std::int64_t kin = 0;
        for (int i = 0; i < N; ++i) {
            P += bosons_.mode(t[i]);
            kin += bosons_.mode(t[i]).norm2();
        }
        boson_index_.emplace(boson_key(t.data()), std::uint32_t(bosons_count_));
        boson_data_.insert(boson_data_.end(), t.begin(), t.end());
        boson_momentum_.push_back(P);
        boson_kinetic_.push_back(kin);
        ++bosons_count_;
        int i = N - 1;
        while (i >= 0 && std::size_t(t[i]) + 1 >= B) --i;
        if (i < 0) break;
        const std::uint16_t next = std::uint16_t(t[i] + 1);
        for (int j = i; j < N; ++j) t[j] = next;
    }
}

void FockBasis::enumerate_fermions() {
    std::vector<std::uint16_t> in, out;
    for (std::size_t i = 0; i < modes_.size(); ++i) (modes_.inside(i) ? in : out).push_back(std::uint16_t(i));

    struct Raw {
        std::array<std::uint16_t, kMaxOccupied> occ{};
        int size = 0;
        Vec3i P;
        std::uint32_t group = 0;
    };
    std::vector<Raw> raw;

    auto push = [&](const std::vector<std::uint16_t>& holes, const std::vector<std::uint16_t>& parts,
                    std::uint32_t group) {
        Raw r;
        std::vector<std::uint16_t> all(holes);
        all.insert(all.end(), parts.begin(), parts.end());
        std::sort(all.begin(), all.end());
        r.size = int(all.size());
        for (int i = 0; i < r.size; ++i) r.occ[i] = all[i];
        for (auto h : holes) r.P -= modes_.mode(h);
        for (auto p : parts) r.P += modes_.mode(p);
        r.group = group;
        raw.push_back(r);
        if (raw.size() > opt_.dimension_cap) throw CapacityError(raw.size(), opt_.dimension_cap);
    };

    // All configurations with n pairs; with Q set, only total momentum Q.
    auto enumerate_n = [&](int n, const std::optional<Vec3i>& Q, std::uint32_t group) {
        if (n == 0) {
            if (!Q || Q->is_zero()) push({}, {}, group);
            return;
        }
        if (!Q && binomial(in.size(), n) * binomial(out.size(), n) > double(opt_.dimension_cap))
            throw CapacityError(std::size_t(binomial(in.size(), n) * binomial(out.size(), n)), opt_.dimension_cap);
        std::vector<std::uint16_t> holes, parts;
        std::function<void(std::size_t, Vec3i)> choose_parts = [&](std::size_t start, Vec3i acc) {
            if (int(parts.size()) == n - 1 && Q) {
                const Vec3i last = *Q - acc;
                const int idx = modes_.index_of(last);
                if (idx < 0 || modes_.inside(std::size_t(idx))) return;
                if (!parts.empty() && idx <= parts.back()) return;
                parts.push_back(std::uint16_t(idx));
                push(holes, parts, group);
                parts.pop_back();
                return;
            }
            if (int(parts.size()) == n) {
                push(holes, parts, group);
                return;
            }
            for (std::size_t j = start; j < out.size(); ++j) {
                parts.push_back(out[j]);
                choose_parts(j + 1, acc + modes_.mode(out[j]));
                parts.pop_back();
            }
        };
        std::function<void(std::size_t, Vec3i)> choose_holes = [&](std::size_t start, Vec3i acc) {
            if (int(holes.size()) == n) {
                choose_parts(0, acc);
                return;
            }
            for (std::size_t j = start; j < in.size(); ++j) {
                holes.push_back(in[j]);
                choose_holes(j + 1, acc - modes_.mode(in[j]));
                holes.pop_back();
            }
        };
        choose_holes(0, Vec3i{});
    };

    boson_group_.assign(bosons_count_, 0);
    std::uint32_t ngroups = 0;
    if (opt_.momentum_sector) {
        std::map<Vec3i, std::uint32_t> group_of;
        for (std::size_t b = 0; b < bosons_count_; ++b) {
            const Vec3i Q = *opt_.momentum_sector - boson_momentum_[b];
            auto [it, inserted] = group_of.emplace(Q, ngroups);
            if (inserted) ++ngroups;
            boson_group_[b] = it->second;
        }
        for (const auto& [Q, g] : group_of)
            for (int n = 0; n <= opt_.max_pairs; ++n) enumerate_n(n, Q, g);
    } else {
        ngroups = 1;
        for (int n = 0; n <= opt_.max_pairs; ++n) enumerate_n(n, std::nullopt, 0);
    }

    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (raw[a].size != raw[b].size) return raw[a].size < raw[b].size;
        return std::lexicographical_compare(raw[a].occ.begin(), raw[a].occ.begin() + raw[a].size, raw[b].occ.begin(),
                                            raw[b].occ.begin() + raw[b].size);
    });
    groups_.assign(ngroups, {});
    fermion_data_.reserve(raw.size() * kMaxOccupied);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Raw& r = raw[order[i]];
        fermion_data_.insert(fermion_data_.end(), r.occ.begin(), r.occ.end());
        fermion_size_.push_back(r.size);
        fermion_momentum_.push_back(r.P);
        fermion_index_.emplace(fermion_key(r.occ.data(), r.size), std::uint32_t(i));
        groups_[r.group].push_back(std::uint32_t(i));
    }
}

void FockBasis::assemble_states() {
    boson_start_.assign(bosons_count_ + 1, 0);
    for (std::size_t b = 0; b < bosons_count_; ++b) {
        boson_start_[b] = state_b_.size();
        for (std::uint32_t f : groups_[boson_group_[b]]) {
            state_b_.push_back(std::uint32_t(b));
            state_f_.push_back(f);
            if (state_b_.size() > opt_.dimension_cap) throw CapacityError(state_b_.size(), opt_.dimension_cap);
        }
    }
    boson_start_[bosons_count_] = state_b_.size();
}

std::int64_t FockBasis::find_keys(std::uint64_t bkey, std::uint64_t fkey) const {
    auto bi = boson_index_.find(bkey);
    if (bi == boson_index_.end()) return -1;
    auto fi = fermion_index_.find(fkey);
    if (fi == fermion_index_.end()) return -1;
    return find_state(bi->second, fi->second);
}

std::int64_t FockBasis::boson_index(const std::uint16_t* tuple) const {
    auto it = boson_index_.find(boson_key(tuple));
    return it == boson_index_.end() ? -1 : std::int64_t(it->second);
}

std::int64_t FockBasis::fermion_index(const std::uint16_t* occ, int n) const {
    if (n > kMaxOccupied) return -1;
    auto it = fermion_index_.find(fermion_key(occ, n));
    return it == fermion_index_.end() ? -1 : std::int64_t(it->second);
}

std::int64_t FockBasis::find_state(std::size_t b, std::size_t f) const {
    const auto first = state_f_.begin() + std::ptrdiff_t(boson_start_[b]);
    const auto last = state_f_.begin() + std::ptrdiff_t(boson_start_[b + 1]);
    auto it = std::lower_bound(first, last, std::uint32_t(f));
    if (it == last || *it != f) return -1;
    return std::int64_t(it - state_f_.begin());
}

std::int64_t FockBasis::vacuum_state(std::size_t b) const {
    if (b >= bosons_count_) return -1;
    const std::size_t s = boson_start_[b];
    if (s < boson_start_[b + 1] && fermion_size_[state_f_[s]] == 0) return std::int64_t(s);
    return -1;
}

std::string FockBasis::metadata_json() const {
    nlohmann::json j;
    j["dimension"] = dim();
    j["N"] = opt_.N;
    j["max_pairs"] = opt_.max_pairs;
    if (opt_.momentum_sector)
        j["momentum_sector"] = {opt_.momentum_sector->x, opt_.momentum_sector->y, opt_.momentum_sector->z};
    else
        j["momentum_sector"] = nullptr;
    j["fermion_modes"] = modes_.size();
    j["inside_modes"] = modes_.inside_count();
    j["boson_modes"] = bosons_.size();
    j["boson_configs"] = bosons_count_;
    j["excitation_configs"] = fermion_size_.size();
    j["closed_under_negation"] = modes_.closed_under_negation();
    nlohmann::json ml = nlohmann::json::array();
    for (const auto& k : modes_.modes()) ml.push_back({k.x, k.y, k.z});
    j["modes"] = ml;
    return j.dump(1);
}

}  // namespace bfmix
