#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bfmix::cli {

struct LuneArgs {
    std::string k = "1,0,0";
    std::int64_t kf2 = 1;
    double alpha = 1.0;
    bool exact = false;
    bool sweep = false;
    std::string ks = "1,0,0;1,1,0;1,1,1;2,0,0";
    std::string kf2_list = "100,400,1600";
    bool formula = false;
    std::string out;
};

struct EffpotArgs {
    std::string V;
    std::string W;
    std::optional<std::int64_t> kf2;
    std::string kf2_list;
    bool limit = false;
    std::string format = "json";
    std::string out;
};

struct ScatterArgs {
    std::string w;
    std::string v;
    std::string g = "0:0.05:2";
    double tol = 1e-8;
    bool collapse = false;
    std::string psi;
    std::string N = "8,16,32,64";
    std::optional<double> collapse_g;
    std::string out_dir;
};

struct SpectrumArgs {
    std::string config;
    std::string check;
    std::string out_dir;
};

struct VerifyArgs {
    std::vector<std::string> suites;
    std::uint64_t seed = 20240611;
};

int cmd_lune(const LuneArgs& a, std::ostream& out, std::ostream& err);
int cmd_effpot(const EffpotArgs& a, std::ostream& out, std::ostream& err);
int cmd_scatter(const ScatterArgs& a, std::ostream& out, std::ostream& err);
int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err);

}  // namespace bfmix::cli
