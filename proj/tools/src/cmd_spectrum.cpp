#include <cmath>
#include <sstream>

#include "bfmix/dense_fock.hpp"
#include "bfmix/error.hpp"
#include "bfmix/hashing.hpp"
#include "bfmix/potential_io.hpp"
#include "bfmix/spectra.hpp"
#include "bfmix_cli/cli.hpp"
#include "commands.hpp"

namespace bfmix::cli {

using nlohmann::json;

namespace {

constexpr double kMonotoneSlack = 1e-9;
constexpr double kPhTolerance = 1e-10;

// Potentials are either inline objects or paths relative to the config file.
FourierPotential load_potential(const json& cfg, const char* field, const std::filesystem::path& base, json& echo) {
    if (!cfg.contains(field) || cfg[field].is_null()) return FourierPotential::zero();
    const json& x = cfg[field];
    if (x.is_string()) {
        const auto path = base / x.get<std::string>();
        const std::string text = io::read_text(path);
        echo[std::string(field) + "_hash"] = hex64(fnv1a64(text));
        try {
            return io::parse_fourier(text);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string(field) + "." + e.field(), e.what());
        }
    }
    if (x.is_object()) return io::parse_fourier(x.dump());
    throw ValidationError(field, "expected a file path or an inline potential object");
}

template <class T>
T get_or(const json& cfg, const char* field, T fallback) {
    if (!cfg.contains(field) || cfg[field].is_null()) return fallback;
    try {
        return cfg[field].get<T>();
    } catch (const json::exception&) {
        throw ValidationError(field, "has the wrong type");
    }
}

std::optional<Vec3i> parse_sector(const json& cfg) {
    if (!cfg.contains("sector")) return Vec3i{0, 0, 0};
    const json& s = cfg["sector"];
    if (s.is_null()) return std::nullopt;
    if (!s.is_array() || s.size() != 3) throw ValidationError("sector", "expected [kx,ky,kz] or null");
    for (const auto& c : s)
        if (!c.is_number_integer()) throw ValidationError("sector", "components must be integers");
    return Vec3i{s[0].get<int>(), s[1].get<int>(), s[2].get<int>()};
}

std::vector<std::int64_t> int_list(const json& cfg, const char* field) {
    if (!cfg.contains(field)) return {};
    const json& x = cfg[field];
    if (!x.is_array()) throw ValidationError(field, "expected an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& v : x) {
        if (!v.is_number_integer()) throw ValidationError(field, "expected integers");
        out.push_back(v.get<std::int64_t>());
    }
    return out;
}

json row_json(const spectra::SpectrumRow& r) {
    json j{{"kF_squared", r.kf2},
           {"kF", r.kF},
           {"lambda", r.lambda},
           {"cutoff2", r.cutoff2},
           {"max_pairs", r.max_pairs},
           {"dims", {{"H", r.dim}, {"eff", r.dim_eff}}},
           {"method", r.method},
           {"mu_H", r.mu_H},
           {"residuals", r.residuals},
           {"mu_eff", r.mu_eff},
           {"W_kF0", r.W_kF0},
           {"diff", r.diff},
           {"trial_rayleigh", r.trial_rayleigh},
           {"E_F", r.E_F},
           {"M", r.M},
           {"mu_proxy", r.mu_proxy},
           {"const_V2", r.const_V2},
           {"const_V0", r.const_V0},
           {"Q", r.Q},
           {"envelope", r.envelope},
           {"envelope_C", r.envelope_C},
           {"clusters", r.clusters},
           {"overlap", r.overlap ? json(*r.overlap) : json(nullptr)},
           {"status", r.failed ? "failed" : "ok"}};
    if (!r.error.empty()) j["error"] = r.error;
    if (!r.overlap_error.empty()) j["overlap_error"] = r.overlap_error;
    return j;
}

std::string rows_csv(const std::vector<spectra::SpectrumRow>& rows, const json& meta) {
    std::ostringstream s;
    s << csv_header(meta)
      << "kf2,lambda,cutoff2,max_pairs,dim,dim_eff,n,mu_H,mu_eff,W_kF0,diff,trial_rayleigh,envelope,overlap,status\n";
    for (const auto& r : rows) {
        const std::size_t n_rows = std::max<std::size_t>(1, r.mu_H.size());
        for (std::size_t n = 0; n < n_rows; ++n) {
            auto at = [n](const std::vector<double>& v) { return n < v.size() ? format_double(v[n]) : std::string(); };
            s << r.kf2 << ',' << format_double(r.lambda) << ',' << r.cutoff2 << ',' << r.max_pairs << ',' << r.dim << ','
              << r.dim_eff << ',' << n + 1 << ',' << at(r.mu_H) << ',' << at(r.mu_eff) << ','
              << format_double(r.W_kF0) << ',' << at(r.diff) << ',' << format_double(r.trial_rayleigh) << ','
              << format_double(r.envelope) << ',' << (r.overlap ? format_double(*r.overlap) : std::string()) << ','
              << (r.failed ? "failed" : "ok") << "\n";
        }
    }
    return s.str();
}

struct Refinement {
    std::int64_t cutoff2;
    int max_pairs;
    std::size_t dim = 0;
    double mu = 0.0;
};

// Runs every (cutoff2, max_pairs) combination and checks mu_1 never increases along nested pairs.
json run_refinement(const json& rc, const FourierPotential& V, const FourierPotential& W, int N,
                    std::int64_t boson_cutoff2, const std::optional<Vec3i>& sector, const EigenOptions& eig,
                    std::size_t cap, bool& ok) {
    const std::int64_t kf2 = get_or<std::int64_t>(rc, "kf2", 1);
    if (kf2 <= 0) throw ValidationError("refine.kf2", "must be positive");
    auto cutoffs = int_list(rc, "cutoff2");
    auto pairs = int_list(rc, "max_pairs");
    const auto kF = FermiRadius::from_squared(kf2);
    if (cutoffs.empty()) cutoffs.push_back(default_cutoff2(kF));
    if (pairs.empty()) pairs.push_back(1);
    const double lambda = potentials::lambda_coupling(N, kF);

    std::vector<Refinement> runs;
    for (auto c2 : cutoffs)
        for (auto mp : pairs) {
            if (c2 < kf2 || mp < 0 || mp > 3) throw ValidationError("refine", "needs cutoff2 >= kf2 and max_pairs in [0, 3]");
            Refinement r{c2, int(mp)};
            const FockBasis basis(ModeSet::ball(c2, kF), ModeSet::ball(boson_cutoff2), {N, int(mp), sector, cap});
            r.dim = basis.dim();
            const OperatorHandle H(basis, OpKind::H, {V, W, lambda});
            EigenOptions o = eig;
            o.count = 1;
            r.mu = lowest_eigenvalues(H, o).values.at(0);
            runs.push_back(r);
        }

    json jr = json::array();
    for (const auto& r : runs)
        jr.push_back({{"cutoff2", r.cutoff2}, {"max_pairs", r.max_pairs}, {"dim", r.dim}, {"mu_H", r.mu}});
    json violations = json::array();
    std::size_t pairs_checked = 0;
    for (const auto& a : runs)
        for (const auto& b : runs) {
            if (&a == &b || a.cutoff2 > b.cutoff2 || a.max_pairs > b.max_pairs) continue;
            ++pairs_checked;
            if (b.mu > a.mu + kMonotoneSlack)
                violations.push_back({{"coarse", {a.cutoff2, a.max_pairs}}, {"fine", {b.cutoff2, b.max_pairs}},
                                      {"increase", b.mu - a.mu}});
        }
    ok = violations.empty();
    return {{"kF_squared", kf2}, {"runs", jr}, {"pairs_checked", pairs_checked}, {"violations", violations},
            {"monotone", ok}};
}

json run_decomposition(const json& dc, const FourierPotential& V, bool& ok) {
    spectra::DecompositionConfig c;
    c.V = V;
    c.kF = FermiRadius::from_squared(get_or<std::int64_t>(dc, "kf2", 1));
    c.cutoff2 = get_or<std::int64_t>(dc, "cutoff2", c.cutoff2);
    c.N = get_or<int>(dc, "N", c.N);
    c.boson_cutoff2 = get_or<std::int64_t>(dc, "boson_cutoff2", c.boson_cutoff2);
    const auto r = spectra::quadratic_decomposition_check(c);
    ok = r.vacuum_residual <= 1e-10 && r.min_eig_minus_A2 >= -1e-10 && r.min_eig_minus_A3 >= -1e-10 &&
         r.decomposition_residual <= 1e-9 && r.completed_square_residual <= 1e-9;
    return {{"vacuum_residual", r.vacuum_residual},
            {"min_eig_minus_A2", r.min_eig_minus_A2},
            {"min_eig_minus_A3", r.min_eig_minus_A3},
            {"decomposition_residual", r.decomposition_residual},
            {"completed_square_residual", r.completed_square_residual},
            {"max_abs_A", {r.max_abs_A[0], r.max_abs_A[1], r.max_abs_A[2], r.max_abs_A[3]}},
            {"one_pair_dim", r.one_pair_dim},
            {"total_dim", r.total_dim},
            {"pass", ok}};
}

int ph_check(std::ostream& out) {
    const auto kF = FermiRadius::from_squared(1);
    const ModeSet modes({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {2, 0, 0}, {-2, 0, 0}, {0, 2, 0}}, kF);
    const ModeSet bosons({{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}}, std::nullopt);
    const auto V = FourierPotential::from_coefficients(
        {{{1, 0, 0}, 0.7}, {{-1, 0, 0}, 0.7}, {{0, 0, 0}, 0.3}, {{2, 0, 0}, 0.2}, {{-2, 0, 0}, 0.2}}, 2);
    const auto W = FourierPotential::from_coefficients({{{1, 0, 0}, 0.5}, {{-1, 0, 0}, 0.5}, {{0, 0, 0}, 1.1}}, 2);
    bool ok = true;
    for (int N : {1, 2}) {
        const auto r = fockcheck::particle_hole_check(modes, bosons, N, V, W, 0.37);
        const bool pass = r.residual <= kPhTolerance;
        ok = ok && pass;
        out << "ph N=" << N << " dim " << r.dimension << " residual " << format_double(r.residual) << " "
            << (pass ? "pass" : "FAIL") << "\n";
    }
    return ok ? kSuccess : kVerificationFailure;
}

}  // namespace

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
    int status = kSuccess;
    if (!a.check.empty()) {
        if (a.check != "ph") throw UsageError("--check accepts only 'ph'");
        status = ph_check(out);
        if (a.config.empty()) return status;
    }
    if (a.config.empty()) throw UsageError("--config is required");

    const std::filesystem::path cfg_path(a.config);
    json cfg;
    try {
        cfg = json::parse(io::read_text(cfg_path));
    } catch (const json::parse_error& e) {
        throw ValidationError("<config>", std::string("invalid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw ValidationError("<config>", "expected an object");
    json echo = cfg;
    const auto base = cfg_path.parent_path();

    spectra::Theorem1Config t;
    t.V = load_potential(cfg, "V", base, echo);
    t.W = load_potential(cfg, "W", base, echo);
    t.N = get_or<int>(cfg, "N", 2);
    if (t.N < 1 || t.N > 16) throw ValidationError("N", "must lie in [1, 16]");
    t.kf2_list = int_list(cfg, "kf2");
    for (auto k : t.kf2_list)
        if (k <= 0) throw ValidationError("kf2", "entries must be positive");
    if (cfg.contains("cutoff2") && !cfg["cutoff2"].is_null()) t.cutoff2 = get_or<std::int64_t>(cfg, "cutoff2", 0);
    t.boson_cutoff2 = get_or<std::int64_t>(cfg, "boson_cutoff2", t.boson_cutoff2);
    t.max_pairs = get_or<int>(cfg, "max_pairs", t.max_pairs);
    if (t.max_pairs < 0 || t.max_pairs > 3) throw ValidationError("max_pairs", "must lie in [0, 3]");
    t.count = get_or<int>(cfg, "count", t.count);
    if (t.count < 1) throw ValidationError("count", "must be positive");
    t.sector = parse_sector(cfg);
    t.overlap = get_or<bool>(cfg, "overlap", false);
    t.eig.tol = get_or<double>(cfg, "tol", t.eig.tol);
    t.eig.seed = get_or<std::uint64_t>(cfg, "seed", t.eig.seed);
    t.eig.dense_threshold = get_or<std::size_t>(cfg, "dense_threshold", t.eig.dense_threshold);
    t.dimension_cap = get_or<std::size_t>(cfg, "dimension_cap", t.dimension_cap);
    const auto meta = metadata("spectrum", echo);

    json report{{"metadata", meta}};
    std::vector<spectra::SpectrumRow> rows;
    if (!t.kf2_list.empty()) {
        rows = spectra::theorem1_compare(t);
        json jr = json::array();
        std::size_t failed = 0;
        for (const auto& r : rows) {
            jr.push_back(row_json(r));
            if (r.failed) {
                ++failed;
                err << "kF^2 = " << r.kf2 << ": " << r.error << "\n";
            }
        }
        report["rows"] = jr;
        if (failed == rows.size()) status = std::max<int>(status, kCapacityError);
    }
    if (cfg.contains("refine")) {
        bool ok = true;
        report["refinement"] =
            run_refinement(cfg["refine"], t.V, t.W, t.N, t.boson_cutoff2, t.sector, t.eig, t.dimension_cap, ok);
        if (!ok) {
            err << "refinement increased mu_1 along a nested pair\n";
            if (status == kSuccess) status = kVerificationFailure;
        }
    }
    if (cfg.contains("decomposition")) {
        bool ok = true;
        report["decomposition"] = run_decomposition(cfg["decomposition"], t.V, ok);
        if (!ok && status == kSuccess) status = kVerificationFailure;
    }

    if (a.out_dir.empty()) {
        out << dump(report);
    } else {
        const std::filesystem::path dir(a.out_dir);
        write_file(dir / "spectrum_report.json", dump(report));
        write_file(dir / "spectrum.csv", rows_csv(rows, meta));
    }
    return status;
}

}  // namespace bfmix::cli
