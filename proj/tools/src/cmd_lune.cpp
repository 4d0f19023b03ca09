#include <sstream>

#include "bfmix/hashing.hpp"
#include "bfmix/lattice.hpp"
#include "bfmix_cli/cli.hpp"
#include "commands.hpp"

namespace bfmix::cli {

namespace {

std::vector<Vec3i> parse_vec3_list(const std::string& text) {
    std::vector<Vec3i> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ';'))
        if (!item.empty()) out.push_back(parse_vec3(item));
    if (out.empty()) throw UsageError("empty momentum list");
    return out;
}

FermiRadius radius(std::int64_t kf2) {
    if (kf2 <= 0) throw UsageError("--kf2 must be positive");
    return FermiRadius::from_squared(kf2);
}

std::string sweep_csv(const LuneArgs& a, const nlohmann::json& meta) {
    const auto ks = parse_vec3_list(a.ks);
    std::vector<FermiRadius> kFs;
    for (auto v : parse_int_list(a.kf2_list)) kFs.push_back(radius(v));
    const auto rows = lattice::asymptotics_report(ks, kFs);

    std::ostringstream s;
    s << csv_header(meta);
    s << "kx,ky,kz,kf2,D1,ratio,normalized_deviation,D2,D2_normalized,large_k,large_k_ratio";
    if (a.formula) s << ",formula1_main,formula1_boundary,formula1_error_scale,formula2_main,formula2_boundary,formula2_error_scale";
    s << "\n";
    for (const auto& r : rows) {
        s << r.k.x << ',' << r.k.y << ',' << r.k.z << ',' << r.kF.key() << ',' << format_double(r.D1) << ','
          << format_double(r.ratio) << ',' << format_double(r.normalized_deviation) << ',' << format_double(r.D2) << ','
          << format_double(r.D2_normalized) << ',' << (r.large_k ? 1 : 0) << ',' << format_double(r.large_k_ratio);
        if (a.formula) {
            for (double alpha : {1.0, 2.0}) {
                const auto f = lattice::summation_formula(r.k, r.kF, alpha);
                s << ',' << format_double(f.main_term) << ',' << format_double(f.boundary_term) << ','
                  << format_double(f.error_scale);
            }
        }
        s << "\n";
    }
    return s.str();
}

}  // namespace

int cmd_lune(const LuneArgs& a, std::ostream& out, std::ostream&) {
    if (a.sweep) {
        nlohmann::json cfg{{"ks", a.ks}, {"kf2_list", a.kf2_list}, {"formula", a.formula}};
        const std::string text = sweep_csv(a, metadata("lune", cfg));
        if (a.out.empty())
            out << text;
        else
            write_file(a.out, text);
        return kSuccess;
    }
    const Vec3i k = parse_vec3(a.k);
    const FermiRadius kF = radius(a.kf2);
    if (a.exact) {
        if (a.alpha < 0 || a.alpha > 16 || a.alpha != double(int(a.alpha)))
            throw UsageError("--exact needs an integer --alpha in [0, 16]");
        out << lattice::resolvent_sum_exact(int(a.alpha), k, kF).str() << "\n";
        return kSuccess;
    }
    out << format_double(lattice::resolvent_sum(a.alpha, k, kF)) << "\n";
    return kSuccess;
}

}  // namespace bfmix::cli
