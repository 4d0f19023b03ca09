#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace bfmix {

// Fermi momentum stored through its square. Integer k_F^2 gives exact shell membership.
class FermiRadius {
public:
    static FermiRadius from_squared(std::int64_t kf2);
    static FermiRadius from_value(double kf);

    bool contains(std::int64_t n2) const {
        return exact_ ? n2 <= kf2_int_ : double(n2) <= kf2_;
    }
    double value() const { return kf_; }
    double squared() const { return kf2_; }
    std::optional<std::int64_t> exact_squared() const {
        return exact_ ? std::optional<std::int64_t>(kf2_int_) : std::nullopt;
    }
    bool exact() const { return exact_; }
    // Smallest integer R with every member of the ball inside [-R, R]^3.
    int enclosing_radius() const;
    // Largest integer n with n^2 <= k_F^2 - m (m >= 0), or -1 when empty.
    int isqrt_remaining(std::int64_t m) const;
    std::string key() const;

private:
    bool exact_ = true;
    std::int64_t kf2_int_ = 1;
    double kf2_ = 1.0;
    double kf_ = 1.0;
};

std::int64_t isqrt(std::int64_t n);
std::int64_t isqrt128(__int128 n);

}  // namespace bfmix
