#include <cmath>
#include <sstream>

#include "bfmix/hashing.hpp"
#include "bfmix/lattice.hpp"
#include "bfmix/potential_io.hpp"
#include "bfmix/potentials.hpp"
#include "bfmix_cli/cli.hpp"
#include "commands.hpp"

namespace bfmix::cli {

namespace {

nlohmann::json coefficient_rows(const FourierPotential& P) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [k, v] : P.entries()) rows.push_back({k.x, k.y, k.z, v});
    return rows;
}

struct Row {
    std::int64_t kf2 = 0;
    FourierPotential W;
    double W0 = 0.0;
    potentials::SupDifference sup;
    double ratio = 0.0;
};

Row compute_row(const FourierPotential& V, std::int64_t kf2) {
    if (kf2 <= 0) throw UsageError("k_F^2 values must be positive");
    const auto kF = FermiRadius::from_squared(kf2);
    Row r;
    r.kf2 = kf2;
    r.W = potentials::effective_potential_kF(V, kF).base;
    r.W0 = potentials::effective_value_at_zero(V, kF);
    r.sup = potentials::sup_difference(V, kF);
    const double h2 = potentials::sobolev_norm_sq(V, 2.0);
    const double scale = std::pow(lattice::log_floor(kF.value()), 5.0 / 3.0) * std::pow(kF.value(), -1.0 / 3.0) * h2;
    r.ratio = scale > 0.0 ? r.sup.upper / scale : 0.0;
    return r;
}

}  // namespace

int cmd_effpot(const EffpotArgs& a, std::ostream& out, std::ostream&) {
    if (a.V.empty()) throw UsageError("--V is required");
    if (a.format != "json" && a.format != "csv") throw UsageError("--format must be json or csv");
    const std::string v_text = io::read_text(a.V);
    const FourierPotential V = io::parse_fourier(v_text);

    nlohmann::json cfg{{"V", a.V}, {"V_hash", hex64(fnv1a64(v_text))}, {"limit", a.limit}, {"format", a.format}};
    std::string text;

    if (a.limit) {
        FourierPotential W = FourierPotential::zero();
        if (!a.W.empty()) {
            const std::string w_text = io::read_text(a.W);
            W = io::parse_fourier(w_text);
            cfg["W"] = a.W;
            cfg["W_hash"] = hex64(fnv1a64(w_text));
        }
        const auto eff = potentials::effective_potential_limit(W, V);
        const auto meta = metadata("effpot", cfg);
        if (a.format == "json") {
            text = dump({{"metadata", meta},
                         {"limit", true},
                         {"provenance", eff.provenance},
                         {"coefficients", coefficient_rows(eff.base)}});
        } else {
            std::ostringstream s;
            s << csv_header(meta) << "kx,ky,kz,coefficient\n";
            for (const auto& [k, v] : eff.base.entries())
                s << k.x << ',' << k.y << ',' << k.z << ',' << format_double(v) << "\n";
            text = s.str();
        }
    } else {
        std::vector<std::int64_t> list;
        if (!a.kf2_list.empty()) list = parse_int_list(a.kf2_list);
        if (a.kf2) list.insert(list.begin(), *a.kf2);
        if (list.empty()) throw UsageError("--kf2 or --kf2-list is required unless --limit is given");
        cfg["kf2"] = list;
        const auto meta = metadata("effpot", cfg);
        std::vector<Row> rows;
        for (auto kf2 : list) rows.push_back(compute_row(V, kf2));
        if (a.format == "json") {
            nlohmann::json jr = nlohmann::json::array();
            for (const auto& r : rows)
                jr.push_back({{"kF_squared", r.kf2},
                              {"W_kF0", r.W0},
                              {"coefficients", coefficient_rows(r.W)},
                              {"sup_difference", r.sup.upper},
                              {"sup_difference_grid", r.sup.grid_lower},
                              {"normalized_ratio", r.ratio}});
            text = dump({{"metadata", meta}, {"rows", jr}});
        } else {
            std::ostringstream s;
            s << csv_header(meta) << "kf2,W_kF0,sup_difference,sup_difference_grid,normalized_ratio\n";
            for (const auto& r : rows)
                s << r.kf2 << ',' << format_double(r.W0) << ',' << format_double(r.sup.upper) << ','
                  << format_double(r.sup.grid_lower) << ',' << format_double(r.ratio) << "\n";
            s << "# coefficients\nkf2,kx,ky,kz,coefficient\n";
            for (const auto& r : rows)
                for (const auto& [k, v] : r.W.entries())
                    s << r.kf2 << ',' << k.x << ',' << k.y << ',' << k.z << ',' << format_double(v) << "\n";
            text = s.str();
        }
    }
    if (a.out.empty())
        out << text;
    else
        write_file(a.out, text);
    return kSuccess;
}

}  // namespace bfmix::cli
