#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bfmix {

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);
std::string format_double(double v);  // shortest round-trip form

// Counter-based generator: value depends only on (seed, index).
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index);
double counter_uniform(std::uint64_t seed, std::uint64_t index);   // [0, 1)
double counter_normal(std::uint64_t seed, std::uint64_t index);    // standard normal

std::string tool_version();

}  // namespace bfmix
