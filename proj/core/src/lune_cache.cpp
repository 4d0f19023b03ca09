#include "bfmix/lune_cache.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "bfmix/hashing.hpp"

namespace bfmix::lattice {

LuneKey make_lune_key(double alpha, const Vec3i& k, const FermiRadius& kF) {
    return {format_double(alpha), canonical(k), kF.key()};
}

LuneSumTable& LuneSumTable::global() {
    static LuneSumTable table;
    return table;
}

std::optional<LuneSum> LuneSumTable::find(const LuneKey& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string LuneSumTable::file_name(const LuneKey& key) {
    const std::string text = key.alpha + "|" + to_string(key.k) + "|" + key.kf2;
    return "lune_" + hex64(fnv1a64(text)) + ".csv";
}

std::optional<LuneSum> LuneSumTable::read_file(const LuneKey& key) const {
    if (!dir_) return std::nullopt;
    std::ifstream in(*dir_ / file_name(key));
    if (!in) return std::nullopt;
    std::string header, row;
    if (!std::getline(in, header) || !std::getline(in, row)) return std::nullopt;
    std::vector<std::string> fields;
    std::stringstream ss(row);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 7) return std::nullopt;
    const std::string kf2 = fields[4];
    if (fields[0] != key.alpha || std::stoi(fields[1]) != key.k.x || std::stoi(fields[2]) != key.k.y ||
        std::stoi(fields[3]) != key.k.z || kf2 != key.kf2)
        return std::nullopt;
    return LuneSum{std::stod(fields[5]), std::stoll(fields[6])};
}

void LuneSumTable::write_file(const LuneKey& key, const LuneSum& value) const {
    if (!dir_) return;
    std::filesystem::create_directories(*dir_);
    const auto path = *dir_ / file_name(key);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << "alpha,kx,ky,kz,kF_squared,value,count\n";
        out << key.alpha << ',' << key.k.x << ',' << key.k.y << ',' << key.k.z << ',' << key.kf2 << ','
            << format_double(value.value) << ',' << value.count << '\n';
    }
    std::filesystem::rename(tmp, path);
}

LuneSum LuneSumTable::get_or_compute(double alpha, const Vec3i& k, const FermiRadius& kF) {
    const LuneKey key = make_lune_key(alpha, k, kF);
    if (auto hit = find(key)) {
        ++hits_;
        return *hit;
    }
    {
        std::unique_lock lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) {
            ++hits_;
            return it->second;
        }
        if (auto disk = read_file(key)) {
            ++disk_hits_;
            entries_.emplace(key, *disk);
            return *disk;
        }
    }
    ++misses_;
    const LuneSum value = resolvent_sum_direct(alpha, key.k, kF);
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, value);
    if (inserted) write_file(key, value);
    return it->second;
}

void LuneSumTable::set_directory(std::optional<std::filesystem::path> dir) {
    std::unique_lock lock(mutex_);
    dir_ = std::move(dir);
}

std::optional<std::filesystem::path> LuneSumTable::directory() const {
    std::shared_lock lock(mutex_);
    return dir_;
}

void LuneSumTable::clear() {
    std::unique_lock lock(mutex_);
    entries_.clear();
}

std::size_t LuneSumTable::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

LuneSumTable::Stats LuneSumTable::stats() const { return {hits_.load(), disk_hits_.load(), misses_.load()}; }

}  // namespace bfmix::lattice
