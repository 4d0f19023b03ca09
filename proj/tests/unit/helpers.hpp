#pragma once

#include <cmath>
#include <cstdint>

#include "bfmix/potentials.hpp"
#include "bfmix/vec3.hpp"

namespace bfmix::oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Brute-force lune sum over a bounding box, independent of the library enumerator.
inline double brute_lune_sum(int alpha, const Vec3i& k, std::int64_t kf2) {
    const int R = int(std::sqrt(double(kf2))) + std::max({std::abs(k.x), std::abs(k.y), std::abs(k.z)}) + 1;
    double s = 0.0;
    for (int x = -R; x <= R; ++x)
        for (int y = -R; y <= R; ++y)
            for (int z = -R; z <= R; ++z) {
                const std::int64_t p2 = std::int64_t(x) * x + std::int64_t(y) * y + std::int64_t(z) * z;
                const std::int64_t q2 = std::int64_t(x - k.x) * (x - k.x) + std::int64_t(y - k.y) * (y - k.y) +
                                        std::int64_t(z - k.z) * (z - k.z);
                if (p2 > kf2 && q2 <= kf2) s += std::pow(double(p2 - q2), -alpha);
            }
    return s;
}

inline FourierPotential cos_mode(double c, const Vec3i& k = {1, 0, 0}) {
    return FourierPotential::from_coefficients({{k, c}, {-k, c}}, k.max_abs());
}

}  // namespace bfmix::oracle
