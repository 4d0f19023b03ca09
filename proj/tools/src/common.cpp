#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <omp.h>

#include "bfmix/hashing.hpp"
#include "bfmix/lune_cache.hpp"
#include "bfmix_cli/cli.hpp"

namespace bfmix::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

std::int64_t parse_int(const std::string& s, const std::string& context) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw UsageError("malformed integer '" + s + "' in " + context);
    }
    if (used != s.size()) throw UsageError("malformed integer '" + s + "' in " + context);
    return v;
}

double parse_double(const std::string& s, const std::string& context) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("malformed number '" + s + "' in " + context);
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("malformed number '" + s + "' in " + context);
    return v;
}

}  // namespace

Vec3i parse_vec3(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw UsageError("expected x,y,z but got '" + text + "'");
    std::int64_t c[3];
    for (int i = 0; i < 3; ++i) {
        c[i] = parse_int(parts[i], "'" + text + "'");
        if (std::llabs(c[i]) > 1'000'000) throw UsageError("component out of range in '" + text + "'");
    }
    return {int(c[0]), int(c[1]), int(c[2])};
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    for (const auto& p : split(text, ',')) out.push_back(parse_int(p, "'" + text + "'"));
    if (out.empty()) throw UsageError("empty list");
    return out;
}

std::vector<double> parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("expected start:step:stop but got '" + text + "'");
    const double a = parse_double(parts[0], text), h = parse_double(parts[1], text), b = parse_double(parts[2], text);
    if (h == 0.0) return {a};
    if (h < 0.0 || b < a) throw UsageError("range '" + text + "' must have step > 0 and stop >= start");
    const auto n = std::int64_t(std::floor((b - a) / h + 1e-9)) + 1;
    if (n > 100000) throw UsageError("range '" + text + "' has too many points");
    std::vector<double> out;
    for (std::int64_t i = 0; i < n; ++i) out.push_back(a + double(i) * h);
    return out;
}

nlohmann::json metadata(const std::string& command, const nlohmann::json& config) {
    const std::string echo = config.dump();
    return {{"tool", "bfmix"},
            {"version", tool_version()},
            {"command", command},
            {"config_hash", hex64(fnv1a64(echo))},
            {"config", config}};
}

std::string csv_header(const nlohmann::json& meta) {
    return "# bfmix " + meta["version"].get<std::string>() + " " + meta["command"].get<std::string>() +
           " config_hash=" + meta["config_hash"].get<std::string>() + "\n# config " + meta["config"].dump() + "\n";
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write " + path.string());
    f << text;
    if (!f) throw UsageError("failed writing " + path.string());
}

void configure_runtime(const std::optional<std::string>& cache_dir, int threads) {
    std::optional<std::filesystem::path> dir;
    if (cache_dir) {
        dir = *cache_dir;
    } else if (const char* env = std::getenv("BFMIX_CACHE_DIR"); env && *env) {
        dir = env;
    }
    if (dir) std::filesystem::create_directories(*dir);
    lattice::LuneSumTable::global().set_directory(dir);
    if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace bfmix::cli
