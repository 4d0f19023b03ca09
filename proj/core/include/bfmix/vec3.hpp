#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace bfmix {

struct Vec3i {
    int x = 0;
    int y = 0;
    int z = 0;

    constexpr std::int64_t norm2() const {
        return std::int64_t(x) * x + std::int64_t(y) * y + std::int64_t(z) * z;
    }
    constexpr std::int64_t dot(const Vec3i& o) const {
        return std::int64_t(x) * o.x + std::int64_t(y) * o.y + std::int64_t(z) * o.z;
    }
    constexpr bool is_zero() const { return x == 0 && y == 0 && z == 0; }
    constexpr int max_abs() const {
        int ax = x < 0 ? -x : x, ay = y < 0 ? -y : y, az = z < 0 ? -z : z;
        int m = ax > ay ? ax : ay;
        return m > az ? m : az;
    }

    constexpr Vec3i operator+(const Vec3i& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3i operator-(const Vec3i& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3i operator-() const { return {-x, -y, -z}; }
    constexpr Vec3i& operator+=(const Vec3i& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3i& operator-=(const Vec3i& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    constexpr auto operator<=>(const Vec3i&) const = default;
};

// Sorted absolute values; the lune sums are invariant under the 48 signed permutations.
Vec3i canonical(const Vec3i& k);
std::int64_t gcd3(const Vec3i& k);
std::string to_string(const Vec3i& k);

struct Vec3iHash {
    std::size_t operator()(const Vec3i& k) const noexcept {
        std::uint64_t h = std::uint64_t(std::uint32_t(k.x)) * 0x9E3779B97F4A7C15ULL;
        h ^= std::uint64_t(std::uint32_t(k.y)) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
        h ^= std::uint64_t(std::uint32_t(k.z)) + 0x85EBCA77C2B2AE63ULL + (h << 6) + (h >> 2);
        return std::size_t(h);
    }
};

}  // namespace bfmix
