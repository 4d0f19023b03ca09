#include <algorithm>

#include <CLI11.hpp>

#include "bfmix/error.hpp"
#include "bfmix_cli/cli.hpp"
#include "commands.hpp"

namespace bfmix::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"bfmix: lattice sums, effective potentials, scattering lengths and truncated spectra"};
    app.require_subcommand(1);
    std::optional<std::string> cache_dir;
    int threads = 0;
    app.add_option("--cache-dir", cache_dir, "lune-sum cache directory (overrides BFMIX_CACHE_DIR)");
    app.add_option("--threads", threads, "cap on OpenMP threads")->check(CLI::NonNegativeNumber);

    LuneArgs lune;
    auto* l = app.add_subcommand("lune", "resolvent lune sum D_alpha(k, kF)");
    l->add_option("--k", lune.k, "momentum x,y,z");
    l->add_option("--kf2", lune.kf2, "k_F^2");
    l->add_option("--alpha", lune.alpha, "power alpha");
    l->add_flag("--exact", lune.exact, "exact rational value");
    l->add_flag("--sweep", lune.sweep, "asymptotics report CSV");
    l->add_option("--ks", lune.ks, "sweep momenta, ';'-separated");
    l->add_option("--kf2-list", lune.kf2_list, "sweep k_F^2 values");
    l->add_flag("--formula", lune.formula, "add summation-formula columns to the sweep");
    l->add_option("--out", lune.out, "output CSV path");

    EffpotArgs eff;
    auto* e = app.add_subcommand("effpot", "mediated potential W_kF or its limit");
    e->add_option("--V", eff.V, "Fourier potential JSON")->required();
    e->add_option("--W", eff.W, "Fourier potential JSON (with --limit)");
    e->add_option("--kf2", eff.kf2, "k_F^2");
    e->add_option("--kf2-list", eff.kf2_list, "comma-separated k_F^2 sweep");
    e->add_flag("--limit", eff.limit, "emit W - V*V");
    e->add_option("--format", eff.format, "json or csv");
    e->add_option("--out", eff.out, "output path");

    ScatterArgs sc;
    auto* s = app.add_subcommand("scatter", "scattering-length curve and critical couplings");
    s->add_option("--w", sc.w, "radial potential JSON")->required();
    s->add_option("--v", sc.v, "radial potential JSON")->required();
    s->add_option("--g", sc.g, "coupling grid start:step:stop");
    s->add_flag("--collapse", sc.collapse, "fit the collapse exponent");
    s->add_option("--psi", sc.psi, "radial trial profile JSON");
    s->add_option("--N", sc.N, "particle numbers for the collapse fit");
    s->add_option("--collapse-g", sc.collapse_g, "coupling for the collapse fit (default 1.5 g_star)");
    s->add_option("--out-dir", sc.out_dir, "directory for scatter.csv and scatter_summary.json");

    SpectrumArgs sp;
    auto* p = app.add_subcommand("spectrum", "truncated spectra against the effective Hamiltonian");
    p->add_option("--config", sp.config, "experiment JSON");
    p->add_option("--check", sp.check, "extra check: ph");
    p->add_option("--out-dir", sp.out_dir, "directory for spectrum_report.json and spectrum.csv");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "property battery");
    v->add_option("--suite", ver.suites, "suite name (repeatable)");
    v->add_option("--seed", ver.seed, "seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& h) {
        app.exit(h, out, err);
        return kSuccess;
    } catch (const CLI::CallForAllHelp& h) {
        app.exit(h, out, err);
        return kSuccess;
    } catch (const CLI::ParseError& pe) {
        app.exit(pe, out, err);
        return kUsageError;
    }

    try {
        configure_runtime(cache_dir, threads);
        if (l->parsed()) return cmd_lune(lune, out, err);
        if (e->parsed()) return cmd_effpot(eff, out, err);
        if (s->parsed()) return cmd_scatter(sc, out, err);
        if (p->parsed()) return cmd_spectrum(sp, out, err);
        if (v->parsed()) return cmd_verify(ver, out, err);
    } catch (const UsageError& x) {
        err << "usage error: " << x.what() << "\n";
        return kUsageError;
    } catch (const ValidationError& x) {
        err << "schema error in field '" << x.field() << "': " << x.what() << "\n";
        return kUsageError;
    } catch (const InvalidParameter& x) {
        err << "invalid parameter: " << x.what() << "\n";
        return kUsageError;
    } catch (const CapacityError& x) {
        err << "capacity error: " << x.what() << "\n";
        return kCapacityError;
    } catch (const ConvergenceError& x) {
        err << "convergence error: " << x.what() << "\n";
        return kCapacityError;
    } catch (const Error& x) {
        err << "error: " << x.what() << "\n";
        return kVerificationFailure;
    } catch (const std::filesystem::filesystem_error& x) {
        err << "file error: " << x.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace bfmix::cli
