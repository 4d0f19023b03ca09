#include <cmath>
#include <sstream>

#include "bfmix/hashing.hpp"
#include "bfmix/potential_io.hpp"
#include "bfmix/scattering.hpp"
#include "bfmix_cli/cli.hpp"
#include "commands.hpp"

namespace bfmix::cli {

namespace {

const char* point_flag(const scattering::CurvePoint& p) {
    if (!p.ok) return "resonance";
    if (p.bound_state_crossing) return "bound_state";
    if (p.above_g0) return "above_g0";
    return "ok";
}

std::string num(double v) { return std::isfinite(v) ? format_double(v) : "nan"; }

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

int cmd_scatter(const ScatterArgs& a, std::ostream& out, std::ostream& err) {
    if (a.w.empty() || a.v.empty()) throw UsageError("--w and --v are required");
    const std::string w_text = io::read_text(a.w), v_text = io::read_text(a.v);
    const RadialPotential w = io::parse_radial(w_text), v = io::parse_radial(v_text);
    const auto grid = parse_range(a.g);

    nlohmann::json cfg{{"w", a.w}, {"w_hash", hex64(fnv1a64(w_text))}, {"v", a.v}, {"v_hash", hex64(fnv1a64(v_text))},
                       {"g", a.g}, {"collapse", a.collapse}};
    std::optional<RadialPotential> psi;
    std::vector<int> N_list;
    if (a.collapse) {
        if (a.psi.empty()) throw UsageError("--collapse needs --psi");
        const std::string p_text = io::read_text(a.psi);
        psi = io::parse_radial(p_text);
        for (auto n : parse_int_list(a.N)) {
            if (n < 2 || n > 1'000'000) throw UsageError("--N entries must lie in [2, 1e6]");
            N_list.push_back(int(n));
        }
        cfg["psi"] = a.psi;
        cfg["psi_hash"] = hex64(fnv1a64(p_text));
        cfg["N"] = N_list;
        if (a.collapse_g) cfg["collapse_g"] = *a.collapse_g;
    }
    const auto meta = metadata("scatter", cfg);

    auto pd = scattering::energy_curve(w, v, grid);
    std::size_t failures = 0;
    std::ostringstream csv;
    csv << csv_header(meta) << "g,a,4pi_a,eg2,flag\n";
    for (const auto& p : pd.points) {
        if (!p.ok) {
            ++failures;
            err << "g = " << format_double(p.g) << ": " << p.error << "\n";
        }
        csv << format_double(p.g) << ',' << num(p.a) << ',' << num(p.four_pi_a) << ',' << num(p.eg2) << ','
            << point_flag(p) << "\n";
    }

    nlohmann::json collapse = nlohmann::json::array();
    nlohmann::json slopes = nlohmann::json::array();
    if (psi) {
        const double g = a.collapse_g ? *a.collapse_g : 1.5 * pd.couplings.g_star;
        const auto t = scattering::collapse_energy(*psi, w, v, g, N_list);
        pd.collapse_slopes.emplace_back(g, t.slope);
        slopes.push_back({g, finite_or_null(t.slope)});
        nlohmann::json e = nlohmann::json::array();
        for (double x : t.energy_per_particle) e.push_back(x);
        collapse.push_back({{"g", g},
                            {"kinetic", t.kinetic},
                            {"pair_integral", t.pair_integral},
                            {"N", t.N},
                            {"energy_per_particle", e},
                            {"slope", finite_or_null(t.slope)}});
    }

    const auto& c = pd.couplings;
    nlohmann::json summary{{"metadata", meta},
                           {"g0", c.g0},
                           {"g_star", c.g_star},
                           {"g_star_sqrt", c.g_star_sqrt},
                           {"vv0", c.vv0},
                           {"v_l2_sq", c.v_l2_sq},
                           {"note", "w_g(0) = w(0) - g^2 (v*v)(0) changes sign at g_star_sqrt; g_star is w(0)/||v||^2"},
                           {"collapse_slopes", slopes},
                           {"collapse", collapse},
                           {"failed_points", failures}};

    if (a.out_dir.empty()) {
        out << csv.str() << "# summary " << summary.dump() << "\n";
    } else {
        const std::filesystem::path dir(a.out_dir);
        write_file(dir / "scatter.csv", csv.str());
        write_file(dir / "scatter_summary.json", dump(summary));
    }
    return kSuccess;
}

}  // namespace bfmix::cli
