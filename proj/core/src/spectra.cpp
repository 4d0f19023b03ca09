#include "bfmix/spectra.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "bfmix/error.hpp"
#include "bfmix/lattice.hpp"

namespace bfmix::spectra {

FockBasis boson_basis(int N, std::int64_t cutoff2, std::optional<Vec3i> sector) {
    return FockBasis(ModeSet{}, ModeSet::ball(cutoff2), {N, 0, sector});
}

Eigen::VectorXd embed_bosons(const FockBasis& from, const Eigen::VectorXd& x, const FockBasis& to) {
    if (std::size_t(x.size()) != from.dim()) throw ShapeError("vector does not match the source basis");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(Eigen::Index(to.dim()));
    for (std::size_t s = 0; s < from.dim(); ++s) {
        const std::int64_t t = to.vacuum_state(from.state_boson(s));
        if (t >= 0) y(t) = x(Eigen::Index(s));
    }
    return y;
}

namespace {

// y = S_q x on a boson-only basis without sector.
Eigen::VectorXd shift_vector(const FockBasis& B, const Eigen::VectorXd& x, const Vec3i& q) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
    std::vector<ops::BosonMove> moves;
    for (std::size_t s = 0; s < B.dim(); ++s) {
        if (x(Eigen::Index(s)) == 0.0) continue;
        moves.clear();
        ops::boson_shift(B, B.state_boson(s), q, moves);
        for (const auto& m : moves) {
            const std::int64_t t = B.vacuum_state(m.config);
            if (t >= 0) y(t) += m.amplitude * x(Eigen::Index(s));
        }
    }
    return y;
}

// Inside modes and the validity test for particles, either from a mode set or the whole lattice.
struct Lune {
    std::vector<Vec3i> inside;
    const ModeSet* modes = nullptr;
    FermiRadius kF;

    bool particle(const Vec3i& p) const {
        if (modes) {
            const int i = modes->index_of(p);
            return i >= 0 && !modes->inside(std::size_t(i));
        }
        return !kF.contains(p.norm2());
    }
    bool hole(const Vec3i& h) const {
        if (modes) {
            const int i = modes->index_of(h);
            return i >= 0 && modes->inside(std::size_t(i));
        }
        return kF.contains(h.norm2());
    }
};

Lune make_lune(const FermiRadius& kF, const std::optional<ModeSet>& modes) {
    Lune L{{}, nullptr, kF};
    if (modes) {
        L.modes = &*modes;
        for (std::size_t i = 0; i < modes->size(); ++i)
            if (modes->inside(i)) L.inside.push_back(modes->mode(i));
    } else {
        L.inside = lattice::fermi_ball(kF).points;
    }
    return L;
}

double inv_gap(const Vec3i& p, const Vec3i& h) { return 1.0 / double(p.norm2() - h.norm2()); }

Eigen::VectorXd boson_h(const FockBasis& B, const FourierPotential& W, const Eigen::VectorXd& x) {
    return OperatorHandle(B, OpKind::H, {FourierPotential::zero(), W, 0.0}).apply(x);
}

}  // namespace

TrialParts trial_state_energy(const FockBasis& bosons, const Eigen::VectorXd& phi, const FourierPotential& V,
                              const FourierPotential& W, const FermiRadius& kF, const std::optional<ModeSet>& modes) {
    if (bosons.sector()) throw InvalidParameter("trial state needs a boson basis without sector");
    if (bosons.modes().size() != 0) throw InvalidParameter("trial state needs a boson-only basis");
    if (std::size_t(phi.size()) != bosons.dim()) throw ShapeError("Phi does not match the boson basis");
    if (modes && (!modes->fermi() || modes->fermi()->key() != kF.key()))
        throw InvalidParameter("mode set carries a different Fermi radius");
    const double lambda = potentials::lambda_coupling(bosons.N(), kF);
    const double l2 = lambda * lambda;
    const Lune L = make_lune(kF, modes);

    TrialParts t;
    t.h_phi = phi.dot(boson_h(bosons, W, phi));
    const double phi2 = phi.squaredNorm();

    std::vector<Vec3i> qs;
    std::vector<double> vq;
    std::vector<Eigen::VectorXd> phis;
    for (const auto& [q, v] : V.entries()) {
        if (q.is_zero()) continue;
        qs.push_back(q);
        vq.push_back(v);
        phis.push_back(shift_vector(bosons, phi, q));
    }
    double n2 = 0.0, E1 = 0.0;
    for (std::size_t a = 0; a < qs.size(); ++a) {
        double d1 = 0.0, d2 = 0.0;
        for (const auto& h : L.inside) {
            const Vec3i p = h + qs[a];
            if (!L.particle(p)) continue;
            const double c = inv_gap(p, h);
            d1 += c;
            d2 += c * c;
        }
        const double f2 = phis[a].squaredNorm();
        t.X += vq[a] * vq[a] * f2 * d1;
        n2 += vq[a] * vq[a] * f2 * d2;
        if (d2 != 0.0) E1 += vq[a] * vq[a] * phis[a].dot(boson_h(bosons, W, phis[a])) * d2;
    }
    double E2 = 0.0;
    for (std::size_t a = 0; a < qs.size(); ++a) {
        for (std::size_t b = 0; b < qs.size(); ++b) {
            if (a == b) continue;
            const Vec3i dq = qs[b] - qs[a];
            const double vd = V.coefficient(dq);
            if (vd == 0.0) continue;
            double tp = 0.0, th = 0.0;
            for (const auto& h : L.inside) {
                const Vec3i p1 = h + qs[a];
                if (!L.particle(p1)) continue;
                const Vec3i p2 = h + qs[b];
                if (L.particle(p2)) tp += inv_gap(p1, h) * inv_gap(p2, h);
                const Vec3i k = p1 - qs[b];
                if (L.hole(k)) th += inv_gap(p1, h) * inv_gap(p1, k);
            }
            if (tp == th) continue;
            const double amp = phis[b].dot(shift_vector(bosons, phis[a], dq));
            E2 += vq[a] * vq[b] * vd * amp * (tp - th);
        }
    }
    t.E0 = t.h_phi - l2 * t.X;
    t.E1 = l2 * E1;
    t.E2 = l2 * lambda * E2;
    t.norm2 = phi2 + l2 * n2;
    t.energy = t.E0 + t.E1 + t.E2;
    t.rayleigh = t.energy / t.norm2;
    return t;
}

TrialParts trial_state_energy_fock(const FockBasis& bosons, const Eigen::VectorXd& phi, const FourierPotential& V,
                                   const FourierPotential& W, const FermiRadius& kF, const ModeSet& modes) {
    if (bosons.sector()) throw InvalidParameter("trial state needs a boson basis without sector");
    if (std::size_t(phi.size()) != bosons.dim()) throw ShapeError("Phi does not match the boson basis");
    const double lambda = potentials::lambda_coupling(bosons.N(), kF);
    const FockBasis basis(modes, bosons.boson_modes(), {bosons.N(), 1, std::nullopt});
    Eigen::VectorXd psi0 = Eigen::VectorXd::Zero(Eigen::Index(basis.dim()));
    for (std::size_t s = 0; s < bosons.dim(); ++s) {
        const std::int64_t t = basis.vacuum_state(bosons.state_boson(s));
        if (t >= 0) psi0(t) = phi(Eigen::Index(s));
    }
    const Couplings c{V, W, lambda};
    Eigen::VectorXd up = OperatorHandle(basis, OpKind::VPlus, c).apply(psi0);
    const Eigen::VectorXd T = OperatorHandle(basis, OpKind::T, c).diagonal();
    for (Eigen::Index i = 0; i < up.size(); ++i)
        if (up(i) != 0.0) up(i) /= T(i);
    const Eigen::VectorXd psi = psi0 - lambda * up;
    const OperatorHandle H(basis, OpKind::H, c);
    TrialParts t;
    t.h_phi = psi0.dot(H.apply(psi0));
    t.norm2 = psi.squaredNorm();
    t.energy = psi.dot(H.apply(psi));
    t.rayleigh = t.energy / t.norm2;
    return t;
}

EffectiveSpectrum effective_spectrum(const FourierPotential& V, const FourierPotential& W,
                                     const std::optional<FermiRadius>& kF, int N, std::int64_t boson_cutoff2,
                                     int count, std::optional<Vec3i> sector, const EigenOptions& eig) {
    EffectiveSpectrum out;
    FourierPotential mediated;
    if (kF) {
        mediated = potentials::effective_potential_kF(V, *kF).base;
        out.W0 = potentials::effective_value_at_zero(V, *kF);
    } else {
        std::vector<FourierPotential::Entry> e;
        const FourierPotential vv = potentials::convolve(V, V);
        for (const auto& [k, v] : vv.entries())
            if (!k.is_zero()) e.emplace_back(k, v);
        mediated = FourierPotential::from_coefficients(e, V.cutoff(), "V*V without zero mode");
        for (const auto& [k, v] : V.entries())
            if (!k.is_zero()) out.W0 += v * v;
    }
    const FockBasis B = boson_basis(N, boson_cutoff2, sector);
    out.dim = B.dim();
    if (B.dim() == 0) throw InvalidParameter("empty boson sector");
    const OperatorHandle h(B, OpKind::H, {FourierPotential::zero(), W - mediated, 0.0});
    EigenOptions o = eig;
    o.count = std::max(count, 2);
    if (std::size_t(o.count) > B.dim()) o.count = int(B.dim());
    const EigenResult r = lowest_eigenvalues(h, o);
    out.values.assign(r.values.begin(), r.values.begin() + std::min<std::size_t>(std::size_t(count), r.values.size()));
    out.gap = r.values.size() > 1 ? r.values[1] - r.values[0] : 0.0;
    out.ground = r.vectors.col(0);
    return out;
}

OverlapReport corollary_overlap(const FourierPotential& V, const FourierPotential& W, int N, const FermiRadius& kF,
                                std::int64_t cutoff2, std::int64_t boson_cutoff2, int max_pairs,
                                std::optional<Vec3i> sector, const EigenOptions& eig) {
    const ModeSet modes = ModeSet::ball(cutoff2, kF);
    const FockBasis basis(modes, ModeSet::ball(boson_cutoff2), {N, max_pairs, sector});
    const OperatorHandle H(basis, OpKind::H, {V, W, potentials::lambda_coupling(N, kF)});
    EigenOptions o = eig;
    o.count = std::min<int>(2, int(basis.dim()));
    const EigenResult r = lowest_eigenvalues(H, o);
    OverlapReport rep;
    rep.dim = basis.dim();
    rep.gap_H = r.values.size() > 1 ? r.values[1] - r.values[0] : std::numeric_limits<double>::infinity();
    if (rep.gap_H < 1e-8) throw DegeneracyError(rep.gap_H);
    const EffectiveSpectrum eff = effective_spectrum(V, W, std::nullopt, N, boson_cutoff2, 2, sector, eig);
    rep.gap_eff = eff.gap;
    if (eff.dim > 1 && eff.gap < 1e-8) throw DegeneracyError(eff.gap);
    const FockBasis B = boson_basis(N, boson_cutoff2, sector);
    double ov = 0.0;
    for (std::size_t s = 0; s < B.dim(); ++s) {
        const std::int64_t t = basis.vacuum_state(B.state_boson(s));
        if (t >= 0) ov += r.vectors(t, 0) * eff.ground(Eigen::Index(s));
    }
    rep.overlap = std::min(1.0, std::abs(ov) / (r.vectors.col(0).norm() * eff.ground.norm()));
    return rep;
}

std::vector<SpectrumRow> theorem1_compare(const Theorem1Config& cfg) {
    std::vector<SpectrumRow> rows;
    const double Q = potentials::q_parameter(cfg.W, cfg.V, cfg.lp);
    double V2 = 0.0;
    for (const auto& [k, v] : cfg.V.entries()) V2 += v * v;
    for (std::int64_t kf2 : cfg.kf2_list) {
        SpectrumRow row;
        row.kf2 = kf2;
        row.max_pairs = cfg.max_pairs;
        row.Q = Q;
        row.const_V2 = -0.5 * V2;
        row.const_V0 = -0.5 * double(cfg.N - 2) * cfg.V.zero_mode() * cfg.V.zero_mode();
        try {
            const FermiRadius kF = FermiRadius::from_squared(kf2);
            row.kF = kF.value();
            row.lambda = potentials::lambda_coupling(cfg.N, kF);
            row.cutoff2 = cfg.cutoff2 ? *cfg.cutoff2 : default_cutoff2(kF);
            const ModeSet modes = ModeSet::ball(row.cutoff2, kF);
            row.E_F = double(modes.inside_energy());
            row.M = modes.inside_count();
            const FockBasis basis(modes, ModeSet::ball(cfg.boson_cutoff2),
                                  {cfg.N, cfg.max_pairs, cfg.sector, cfg.dimension_cap});
            row.dim = basis.dim();
            const OperatorHandle H(basis, OpKind::H, {cfg.V, cfg.W, row.lambda});
            EigenOptions o = cfg.eig;
            o.count = std::min<int>(cfg.count, int(basis.dim()));
            const EigenResult r = lowest_eigenvalues(H, o);
            row.method = r.method;
            row.mu_H = r.values;
            row.residuals = r.residuals;
            row.clusters = eigenvalue_clusters(r.values);
            const EffectiveSpectrum eff =
                effective_spectrum(cfg.V, cfg.W, kF, cfg.N, cfg.boson_cutoff2, cfg.count, cfg.sector, cfg.eig);
            row.dim_eff = eff.dim;
            row.mu_eff = eff.values;
            row.W_kF0 = eff.W0;
            for (std::size_t n = 0; n < std::min(row.mu_H.size(), row.mu_eff.size()); ++n)
                row.diff.push_back(row.mu_H[n] - (row.mu_eff[n] - 0.5 * row.W_kF0));
            for (double mu : row.mu_H)
                row.mu_proxy.push_back(row.E_F + row.lambda * cfg.N * double(row.M) * cfg.V.zero_mode() + mu);
            // trial state from the effective ground state
            const FockBasis sector_bosons = boson_basis(cfg.N, cfg.boson_cutoff2, cfg.sector);
            const FockBasis all_bosons = boson_basis(cfg.N, cfg.boson_cutoff2);
            const Eigen::VectorXd phi = embed_bosons(sector_bosons, eff.ground, all_bosons);
            row.trial_rayleigh = trial_state_energy(all_bosons, phi, cfg.V, cfg.W, kF, modes).rayleigh;
            const double logk = std::max(std::log(row.kF), 1.0);
            row.envelope = Q * Q * double(cfg.N) * double(cfg.N) * std::pow(logk, 5.0 / 3.0) * std::pow(row.kF, -1.0 / 3.0);
            if (cfg.overlap) {
                try {
                    row.overlap = corollary_overlap(cfg.V, cfg.W, cfg.N, kF, row.cutoff2, cfg.boson_cutoff2,
                                                    cfg.max_pairs, cfg.sector, cfg.eig)
                                      .overlap;
                } catch (const DegeneracyError& e) {
                    row.overlap_error = e.what();
                }
            }
        } catch (const Error& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    // envelope constant fitted at the first successful row
    double C = 0.0;
    for (const auto& r : rows)
        if (!r.failed && !r.diff.empty() && r.envelope > 0.0) {
            C = std::abs(r.diff[0]) / r.envelope;
            break;
        }
    for (auto& r : rows) {
        r.envelope_C = C;
        r.envelope *= C;
    }
    return rows;
}

}  // namespace bfmix::spectra
