#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfmix/fermi.hpp"
#include "bfmix/vec3.hpp"

namespace bfmix::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailure = 1,
    kUsageError = 2,
    kCapacityError = 3,
};

// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "x,y,z" -> vector; throws UsageError.
Vec3i parse_vec3(const std::string& text);
// "a,b,c" -> list.
std::vector<std::int64_t> parse_int_list(const std::string& text);
// "start:step:stop" -> inclusive grid; step 0 gives the single point start.
std::vector<double> parse_range(const std::string& text);

// Canonical run header: tool version, command and a hash of the sorted-key config echo.
nlohmann::json metadata(const std::string& command, const nlohmann::json& config);
std::string csv_header(const nlohmann::json& meta);
std::string dump(const nlohmann::json& j);

// Writes to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

// Applies --cache-dir or the BFMIX_CACHE_DIR environment variable, and --threads.
void configure_runtime(const std::optional<std::string>& cache_dir, int threads);

struct SuiteResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;  // largest residual or margin consumed
    double tolerance = 0.0;
    std::string detail;
};

std::vector<std::string> verify_suite_names();
SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed);

}  // namespace bfmix::cli
