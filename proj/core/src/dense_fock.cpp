#include "bfmix/dense_fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "bfmix/error.hpp"
#include "bfmix/hashing.hpp"

namespace bfmix::fockcheck {

namespace {

int sign_of(std::uint64_t mask, int j) {
    const std::uint64_t below = j == 0 ? 0 : (mask & ((std::uint64_t(1) << j) - 1));
    return (std::popcount(below) & 1) ? -1 : 1;
}

void choose(const std::vector<int>& from, int count, std::size_t start, std::uint64_t acc,
            std::vector<std::uint64_t>& out) {
    if (count == 0) {
        out.push_back(acc);
        return;
    }
    for (std::size_t i = start; i + std::size_t(count) <= from.size(); ++i)
        choose(from, count - 1, i + 1, acc | (std::uint64_t(1) << from[i]), out);
}

}  // namespace

FermionSpace::FermionSpace(const ModeSet& modes, std::vector<std::uint64_t> masks)
    : modes_(&modes), masks_(std::move(masks)) {
    for (std::size_t i = 0; i < masks_.size(); ++i) index_.emplace(masks_[i], i);
    for (std::size_t j = 0; j < modes.size(); ++j)
        if (modes.inside(j)) inside_mask_ |= std::uint64_t(1) << j;
}

FermionSpace FermionSpace::full(const ModeSet& modes) {
    if (modes.size() > 20) throw CapacityError(std::size_t(1) << std::min<std::size_t>(modes.size(), 63), 1u << 20);
    std::vector<std::uint64_t> masks(std::size_t(1) << modes.size());
    for (std::size_t i = 0; i < masks.size(); ++i) masks[i] = i;
    return {modes, std::move(masks)};
}

FermionSpace FermionSpace::excitations(const ModeSet& modes, int max_pairs, int max_charge) {
    if (modes.size() > 64) throw CapacityError(modes.size(), 64);
    std::vector<int> in, out;
    for (std::size_t j = 0; j < modes.size(); ++j) (modes.inside(j) ? in : out).push_back(int(j));
    std::vector<std::uint64_t> masks;
    for (int nh = 0; nh <= max_pairs; ++nh) {
        std::vector<std::uint64_t> hs;
        choose(in, nh, 0, 0, hs);
        for (int np = 0; np <= max_pairs; ++np) {
            if (std::abs(np - nh) > max_charge) continue;
            std::vector<std::uint64_t> ps;
            choose(out, np, 0, 0, ps);
            for (auto h : hs)
                for (auto p : ps) masks.push_back(h | p);
        }
    }
    std::sort(masks.begin(), masks.end());
    return {modes, std::move(masks)};
}

FermionSpace FermionSpace::fixed_number(const ModeSet& modes, int count) {
    if (modes.size() > 64) throw CapacityError(modes.size(), 64);
    std::vector<int> all(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) all[j] = int(j);
    std::vector<std::uint64_t> masks;
    choose(all, count, 0, 0, masks);
    std::sort(masks.begin(), masks.end());
    return {modes, std::move(masks)};
}

std::int64_t FermionSpace::find(std::uint64_t mask) const {
    auto it = index_.find(mask);
    return it == index_.end() ? -1 : std::int64_t(it->second);
}

std::optional<std::pair<std::size_t, int>> FermionSpace::create(std::size_t i, int j) const {
    const std::uint64_t m = masks_[i];
    const std::uint64_t bit = std::uint64_t(1) << j;
    if (m & bit) return std::nullopt;
    const std::int64_t t = find(m | bit);
    if (t < 0) return std::nullopt;
    return std::pair{std::size_t(t), sign_of(m, j)};
}

std::optional<std::pair<std::size_t, int>> FermionSpace::annihilate(std::size_t i, int j) const {
    const std::uint64_t m = masks_[i];
    const std::uint64_t bit = std::uint64_t(1) << j;
    if (!(m & bit)) return std::nullopt;
    const std::int64_t t = find(m & ~bit);
    if (t < 0) return std::nullopt;
    return std::pair{std::size_t(t), sign_of(m, j)};
}

double FermionSpace::excitation_energy(std::size_t i) const {
    double e = 0.0;
    for (std::uint64_t m = masks_[i]; m; m &= m - 1) {
        const int j = std::countr_zero(m);
        const double k2 = double(modes_->mode(std::size_t(j)).norm2());
        e += modes_->inside(std::size_t(j)) ? -k2 : k2;
    }
    return e;
}

int FermionSpace::particles(std::size_t i) const { return std::popcount(masks_[i] & ~inside_mask_); }
int FermionSpace::holes(std::size_t i) const { return std::popcount(masks_[i] & inside_mask_); }

Eigen::VectorXd random_vector(std::size_t n, std::uint64_t seed, std::uint64_t offset) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v(Eigen::Index(i)) = counter_normal(seed, offset + i);
    return v;
}

namespace {

enum class Ladder { B, BStar, C, CStar };

// Sparse action of one ladder operator on a basis vector.
std::optional<std::pair<std::size_t, int>> ladder(const FermionSpace& F, Ladder op, int k, std::size_t i) {
    const bool in = F.modes().inside(std::size_t(k));
    switch (op) {
        case Ladder::B: return in ? std::nullopt : F.annihilate(i, k);
        case Ladder::BStar: return in ? std::nullopt : F.create(i, k);
        case Ladder::C: return in ? F.annihilate(i, k) : std::nullopt;
        case Ladder::CStar: return in ? F.create(i, k) : std::nullopt;
    }
    return std::nullopt;
}

double anticommutator_residual(const FermionSpace& F, Ladder A, int k, Ladder B, int l, double expected) {
    double worst = 0.0;
    std::map<std::size_t, double> acc;
    for (std::size_t i = 0; i < F.size(); ++i) {
        acc.clear();
        if (auto x = ladder(F, B, l, i))
            if (auto y = ladder(F, A, k, x->first)) acc[y->first] += x->second * y->second;
        if (auto x = ladder(F, A, k, i))
            if (auto y = ladder(F, B, l, x->first)) acc[y->first] += x->second * y->second;
        acc[i] -= expected;
        for (const auto& [t, v] : acc) worst = std::max(worst, std::abs(v));
    }
    return worst;
}

}  // namespace

CarReport car_check(const ModeSet& modes) {
    if (modes.size() > 12) throw CapacityError(std::size_t(1) << modes.size(), 1u << 12);
    const FermionSpace F = FermionSpace::full(modes);
    CarReport r;
    const int d = int(modes.size());
    for (int k = 0; k < d; ++k) {
        const bool in_k = modes.inside(std::size_t(k));
        for (int l = 0; l < d; ++l) {
            const double delta = k == l ? 1.0 : 0.0;
            r.bb = std::max(r.bb, anticommutator_residual(F, Ladder::B, k, Ladder::BStar, l, in_k ? 0.0 : delta));
            r.cc = std::max(r.cc, anticommutator_residual(F, Ladder::C, k, Ladder::CStar, l, in_k ? delta : 0.0));
            for (auto [A, B] : {std::pair{Ladder::B, Ladder::C}, std::pair{Ladder::B, Ladder::CStar},
                                std::pair{Ladder::BStar, Ladder::C}, std::pair{Ladder::B, Ladder::B},
                                std::pair{Ladder::C, Ladder::C}, std::pair{Ladder::BStar, Ladder::BStar}})
                r.mixed = std::max(r.mixed, anticommutator_residual(F, A, k, B, l, 0.0));
        }
    }
    return r;
}

double pull_through_check(const ModeSet& modes, int max_pairs, const std::function<double(double)>& f,
                          std::uint64_t seed, int vectors) {
    const FermionSpace F = FermionSpace::excitations(modes, max_pairs, 1);
    const std::size_t n = F.size();
    std::vector<double> T(n);
    std::vector<char> in_sector(n);
    for (std::size_t i = 0; i < n; ++i) {
        T[i] = F.excitation_energy(i);
        in_sector[i] = F.particles(i) == F.holes(i);
    }
    double worst = 0.0;
    std::uint64_t offset = 0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const double k2 = double(modes.mode(k).norm2());
        const bool in = modes.inside(k);
        // f(T) a* = a* f(T + s k^2) and a f(T) = f(T + s k^2) a, with s = +1 for b and -1 for c
        const double s = in ? -1.0 : 1.0;
        const Ladder create = in ? Ladder::CStar : Ladder::BStar;
        const Ladder destroy = in ? Ladder::C : Ladder::B;
        for (int v = 0; v < vectors; ++v) {
            const Eigen::VectorXd r = random_vector(n, seed, offset);
            offset += n;
            std::vector<double> lhs(n, 0.0), rhs(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                auto t = ladder(F, create, int(k), i);
                if (!t || !in_sector[t->first]) continue;
                lhs[t->first] += f(T[t->first]) * t->second * r(Eigen::Index(i));
                rhs[t->first] += t->second * f(T[i] + s * k2) * r(Eigen::Index(i));
            }
            for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
            std::fill(lhs.begin(), lhs.end(), 0.0);
            std::fill(rhs.begin(), rhs.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (!in_sector[i]) continue;
                auto t = ladder(F, destroy, int(k), i);
                if (!t) continue;
                lhs[t->first] += t->second * f(T[i]) * r(Eigen::Index(i));
                rhs[t->first] += f(T[t->first] + s * k2) * t->second * r(Eigen::Index(i));
            }
            for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
        }
    }
    return worst;
}

AdjointReport adjoint_check(const FockBasis& basis, const Couplings& c, std::uint64_t seed, std::size_t cap) {
    AdjointReport r;
    const Eigen::MatrixXd P = OperatorHandle(basis, OpKind::VPlus, c).dense(cap);
    const Eigen::MatrixXd M = OperatorHandle(basis, OpKind::VMinus, c).dense(cap);
    r.v_adjoint = (M - P.transpose()).cwiseAbs().maxCoeff();
    const OperatorHandle H(basis, OpKind::H, c);
    const Eigen::MatrixXd Hd = H.dense(cap);
    r.h_symmetry = (Hd - Hd.transpose()).cwiseAbs().maxCoeff();
    std::uint64_t offset = 0;
    for (OpKind kind : {OpKind::HKinetic, OpKind::HW, OpKind::T, OpKind::VPlus, OpKind::VMinus, OpKind::VDiag,
                        OpKind::NPlus, OpKind::NMinus, OpKind::H}) {
        const OperatorHandle op(basis, kind, c);
        const Eigen::VectorXd x = random_vector(basis.dim(), seed, offset);
        offset += basis.dim();
        const Eigen::VectorXd diff = op.apply(x) - op.dense(cap) * x;
        if (diff.size() > 0) r.apply_vs_dense = std::max(r.apply_vs_dense, diff.cwiseAbs().maxCoeff());
    }
    return r;
}

double momentum_check(const FockBasis& basis, const Couplings& c, std::size_t cap) {
    const Eigen::MatrixXd Hd = OperatorHandle(basis, OpKind::H, c).dense(cap);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < Hd.cols(); ++j)
        for (Eigen::Index i = 0; i < Hd.rows(); ++i)
            if (basis.total_momentum(std::size_t(i)) != basis.total_momentum(std::size_t(j)))
                worst = std::max(worst, std::abs(Hd(i, j)));
    return worst;
}

ParticleHoleReport particle_hole_check(const ModeSet& modes, const ModeSet& boson_modes, int N,
                                       const FourierPotential& V, const FourierPotential& W, double lambda,
                                       std::size_t cap) {
    const int M = int(modes.inside_count());
    const int pairs = int(std::min(modes.inside_count(), modes.outside_count()));
    if (2 * pairs > kMaxOccupied) throw InvalidParameter("particle-hole check supports at most three pairs");
    const FermionSpace F = FermionSpace::fixed_number(modes, M);
    const FockBasis bosons(ModeSet{}, boson_modes, {N, 0, std::nullopt, cap});
    const std::size_t nb = bosons.boson_config_count();
    const std::size_t nf = F.size();
    if (nb * nf > cap) throw CapacityError(nb * nf, cap);
    const FockBasis ph(modes, boson_modes, {N, pairs, std::nullopt, cap});
    if (ph.dim() != nb * nf) throw Error("particle-hole dimensions disagree");

    // R: ph state -> (physical index, sign)
    std::uint64_t omega = 0;
    for (std::size_t j = 0; j < modes.size(); ++j)
        if (modes.inside(j)) omega |= std::uint64_t(1) << j;
    std::vector<std::size_t> phys(ph.dim());
    std::vector<int> sign(ph.dim());
    std::vector<std::int64_t> back(nb * nf, -1);
    for (std::size_t s = 0; s < ph.dim(); ++s) {
        const std::size_t f = ph.state_fermion(s);
        std::uint64_t cur = omega;
        int sg = 1;
        const std::uint16_t* occ = ph.fermion_config(f);
        for (int i = ph.fermion_size(f) - 1; i >= 0; --i) {
            const std::uint64_t bit = std::uint64_t(1) << occ[i];
            const bool in = modes.inside(occ[i]);
            if (bool(cur & bit) != in) throw Error("particle-hole map hit an occupied mode");
            sg *= sign_of(cur, occ[i]);
            cur ^= bit;
        }
        const std::int64_t fi = F.find(cur);
        if (fi < 0) throw Error("particle-hole map left the fermion sector");
        phys[s] = std::size_t(ph.state_boson(s)) * nf + std::size_t(fi);
        sign[s] = sg;
        back[phys[s]] = std::int64_t(s);
    }

    ParticleHoleReport rep;
    rep.dimension = ph.dim();
    rep.constant = double(modes.inside_energy()) + lambda * double(N) * double(M) * V.zero_mode();

    const OperatorHandle hb_kin(bosons, OpKind::HKinetic, {V, W, lambda});
    const OperatorHandle hb_w(bosons, OpKind::HW, {V, W, lambda});
    const OperatorHandle Hph(ph, OpKind::H, {V, W, lambda});

    std::vector<Connection> conn;
    std::vector<ops::BosonMove> moves;
    std::map<std::size_t, double> phys_col, ph_col;
    for (std::size_t s = 0; s < ph.dim(); ++s) {
        const std::size_t b = phys[s] / nf;
        const std::size_t fi = phys[s] % nf;
        phys_col.clear();
        // physical column at (b, fi)
        conn.clear();
        hb_kin.column(b, conn);
        hb_w.column(b, conn);
        for (const auto& cn : conn) phys_col[std::size_t(cn.target) * nf + fi] += cn.amplitude;
        double ekin = 0.0;
        for (std::uint64_t m = F.mask(fi); m; m &= m - 1) ekin += double(modes.mode(std::size_t(std::countr_zero(m))).norm2());
        phys_col[b * nf + fi] += ekin;
        for (const auto& [q, vq] : V.entries()) {
            moves.clear();
            ops::boson_shift(bosons, b, q, moves);
            const std::uint64_t occ = F.mask(fi);
            for (std::uint64_t m = occ; m; m &= m - 1) {
                const int h = std::countr_zero(m);
                const int p = modes.index_of(modes.mode(std::size_t(h)) + q);
                if (p < 0) continue;
                // a*_p a_h
                const std::uint64_t mid = occ & ~(std::uint64_t(1) << h);
                if (mid & (std::uint64_t(1) << p)) continue;
                const int sg = sign_of(occ, h) * sign_of(mid, p);
                const std::int64_t target = F.find(mid | (std::uint64_t(1) << p));
                if (target < 0) continue;
                for (const auto& mv : moves)
                    phys_col[std::size_t(mv.config) * nf + std::size_t(target)] += lambda * vq * mv.amplitude * double(sg);
            }
        }
        ph_col.clear();
        for (const auto& [row, v] : phys_col) {
            const std::int64_t t = back[row];
            if (t < 0) throw Error("physical column left the particle-hole image");
            ph_col[std::size_t(t)] += double(sign[std::size_t(t)] * sign[s]) * v;
        }
        ph_col[s] -= rep.constant;
        conn.clear();
        Hph.column(s, conn);
        for (const auto& cn : conn) ph_col[cn.target] -= cn.amplitude;
        for (const auto& [t, v] : ph_col) rep.residual = std::max(rep.residual, std::abs(v));
    }
    return rep;
}

InequalityReport inequality_suite(const FockBasis& basis, const FourierPotential& V, int trials, std::uint64_t seed) {
    InequalityReport r;
    r.trials = trials;
    const Couplings c{V, FourierPotential::zero(), 0.0};
    const OperatorHandle T(basis, OpKind::T, c), Np(basis, OpKind::NPlus, c), Vd(basis, OpKind::VDiag, c);
    const double bound = 2.0 * double(basis.N()) * potentials::l1_coefficients(V);
    r.kinetic_margin = std::numeric_limits<double>::infinity();
    r.diagonal_margin = std::numeric_limits<double>::infinity();
    const std::size_t n = basis.dim();
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd x = random_vector(n, seed, std::uint64_t(t) * n);
        x /= x.norm();
        const double np = x.dot(Np.apply(x));
        const double kin = x.dot(T.apply(x));
        const double vd = std::abs(x.dot(Vd.apply(x)));
        const double m1 = kin - np;
        const double m2 = bound * np - vd;
        if (m1 < -1e-12 * std::max(1.0, std::abs(kin))) ++r.kinetic_violations;
        if (m2 < -1e-12 * std::max(1.0, bound * np)) ++r.diagonal_violations;
        r.kinetic_margin = std::min(r.kinetic_margin, m1);
        r.diagonal_margin = std::min(r.diagonal_margin, m2);
    }
    return r;
}

}  // namespace bfmix::fockcheck
