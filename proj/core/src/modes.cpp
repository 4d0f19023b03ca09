#include "bfmix/modes.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bfmix/error.hpp"

namespace bfmix {

ModeSet::ModeSet(std::vector<Vec3i> modes, std::optional<FermiRadius> kF) : modes_(std::move(modes)), kF_(kF) {
    std::set<Vec3i> seen;
    for (const auto& k : modes_) {
        if (!seen.insert(k).second) throw ValidationError("modes", "duplicate mode " + to_string(k));
        reach_ = std::max(reach_, k.max_abs());
    }
    if (modes_.size() > 65535) throw CapacityError(modes_.size(), 65535);
    const std::size_t side = 2 * std::size_t(reach_) + 1;
    lookup_.assign(side * side * side, -1);
    inside_.assign(modes_.size(), 0);
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        lookup_[offset(modes_[i])] = int(i);
        if (kF_ && kF_->contains(modes_[i].norm2())) {
            inside_[i] = 1;
            ++inside_count_;
        }
    }
}

ModeSet ModeSet::ball(std::int64_t cutoff2, std::optional<FermiRadius> kF) {
    if (cutoff2 < 0) throw InvalidParameter("cutoff must be nonnegative");
    std::vector<Vec3i> modes;
    const int R = int(isqrt(cutoff2));
    for (int x = -R; x <= R; ++x)
        for (int y = -R; y <= R; ++y)
            for (int z = -R; z <= R; ++z) {
                const Vec3i k{x, y, z};
                if (k.norm2() <= cutoff2) modes.push_back(k);
            }
    return {std::move(modes), kF};
}

bool ModeSet::closed_under_negation() const {
    return std::all_of(modes_.begin(), modes_.end(), [&](const Vec3i& k) { return index_of(-k) >= 0; });
}

std::int64_t ModeSet::inside_energy() const {
    std::int64_t e = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i)
        if (inside_[i]) e += modes_[i].norm2();
    return e;
}

std::int64_t default_cutoff2(const FermiRadius& kF) {
    if (auto e = kF.exact_squared()) {
        const std::int64_t r = isqrt(*e);
        if (r * r == *e) return (r + 2) * (r + 2);
    }
    const double kf = kF.value();
    return std::int64_t(std::floor(kf * kf + 4.0 * kf + 4.0 + 1e-9));
}

}  // namespace bfmix
