#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "bfmix/lattice.hpp"

namespace bfmix::lattice {

struct LuneKey {
    std::string alpha;  // %.17g
    Vec3i k;            // canonical form
    std::string kf2;    // FermiRadius::key()
    auto operator<=>(const LuneKey&) const = default;
};

LuneKey make_lune_key(double alpha, const Vec3i& k, const FermiRadius& kF);

// Memo table of lune sums. Concurrent reads; inserts take the exclusive lock.
// With a directory set, entries are persisted as one CSV file each.
class LuneSumTable {
public:
    static LuneSumTable& global();

    std::optional<LuneSum> find(const LuneKey& key) const;
    LuneSum get_or_compute(double alpha, const Vec3i& k, const FermiRadius& kF);

    void set_directory(std::optional<std::filesystem::path> dir);
    std::optional<std::filesystem::path> directory() const;
    void clear();
    std::size_t size() const;

    struct Stats {
        std::uint64_t hits = 0;
        std::uint64_t disk_hits = 0;
        std::uint64_t misses = 0;
    };
    Stats stats() const;

    static std::string file_name(const LuneKey& key);

private:
    std::optional<LuneSum> read_file(const LuneKey& key) const;
    void write_file(const LuneKey& key, const LuneSum& value) const;

    mutable std::shared_mutex mutex_;
    std::map<LuneKey, LuneSum> entries_;
    std::optional<std::filesystem::path> dir_;
    mutable std::atomic<std::uint64_t> hits_{0};
    mutable std::atomic<std::uint64_t> disk_hits_{0};
    mutable std::atomic<std::uint64_t> misses_{0};
};

}  // namespace bfmix::lattice
