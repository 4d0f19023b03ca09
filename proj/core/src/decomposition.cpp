#include <cmath>
#include <map>
#include <unordered_map>

#include "bfmix/error.hpp"
#include "bfmix/spectra.hpp"

namespace bfmix::spectra {

namespace {

using Sparse = std::unordered_map<std::uint32_t, double>;

struct Occ {
    std::array<std::uint16_t, kMaxOccupied + 2> v{};
    int n = 0;
    bool has(std::uint16_t j) const { return std::find(v.begin(), v.begin() + n, j) != v.begin() + n; }
    int flip(std::uint16_t j, bool create) {
        int b = 0;
        while (b < n && v[b] < j) ++b;
        if (create) {
            for (int i = n; i > b; --i) v[i] = v[i - 1];
            v[b] = j;
            ++n;
        } else {
            for (int i = b; i + 1 < n; ++i) v[i] = v[i + 1];
            --n;
        }
        return (b & 1) ? -1 : 1;
    }
};

Occ occ_of(const FockBasis& B, std::size_t f) {
    Occ o;
    o.n = B.fermion_size(f);
    std::copy(B.fermion_config(f), B.fermion_config(f) + o.n, o.v.begin());
    return o;
}

double excitation_energy(const FockBasis& B, const Occ& o) {
    double e = 0.0;
    for (int i = 0; i < o.n; ++i) {
        const double k2 = double(B.modes().mode(o.v[i]).norm2());
        e += B.modes().inside(o.v[i]) ? -k2 : k2;
    }
    return e;
}

// S_{-k} S_l on boson configuration b (S_l first), with the hard cutoff after each shift.
void double_shift(const FockBasis& B, std::size_t b, const Vec3i& k, const Vec3i& l, std::vector<ops::BosonMove>& out) {
    std::vector<ops::BosonMove> mid;
    ops::boson_shift(B, b, l, mid);
    for (const auto& m : mid) {
        const std::size_t before = out.size();
        ops::boson_shift(B, m.config, -k, out);
        for (std::size_t i = before; i < out.size(); ++i) out[i].amplitude *= m.amplitude;
    }
}

void emit(const FockBasis& B, const std::vector<ops::BosonMove>& moves, const Occ& o, double amp, Sparse& out) {
    if (amp == 0.0) return;
    const std::int64_t f = B.fermion_index(o.v.data(), o.n);
    if (f < 0) return;
    for (const auto& m : moves) {
        const std::int64_t t = B.find_state(m.config, std::size_t(f));
        if (t >= 0) out[std::uint32_t(t)] += amp * m.amplitude;
    }
}

// Column s of A_n.
void a_column(const FockBasis& B, const FourierPotential& V, int n, std::size_t s, Sparse& out) {
    const ModeSet& modes = B.modes();
    const std::size_t b = B.state_boson(s);
    const Occ base = occ_of(B, B.state_fermion(s));
    const double T = excitation_energy(B, base);
    std::vector<ops::BosonMove> moves;
    auto E = [&](int i) { return double(modes.mode(std::size_t(i)).norm2()); };
    auto outside = [&](const Vec3i& p) {
        const int i = modes.index_of(p);
        return (i >= 0 && !modes.inside(std::size_t(i))) ? i : -1;
    };
    auto inside = [&](const Vec3i& p) {
        const int i = modes.index_of(p);
        return (i >= 0 && modes.inside(std::size_t(i))) ? i : -1;
    };
    for (const auto& [k, vk] : V.entries()) {
        if (k.is_zero()) continue;
        if (n == 1) {
            double sum = 0.0;
            for (std::size_t h = 0; h < modes.size(); ++h) {
                if (!modes.inside(h)) continue;
                const int p = outside(modes.mode(h) + k);
                if (p >= 0) sum += 1.0 / (T + E(p) - E(int(h)));
            }
            moves.clear();
            double_shift(B, b, k, k, moves);
            emit(B, moves, base, vk * vk * sum, out);
            continue;
        }
        for (const auto& [l, vl] : V.entries()) {
            if (l.is_zero()) continue;
            moves.clear();
            double_shift(B, b, k, l, moves);
            if (moves.empty()) continue;
            if (n == 2) {
                // -sum_p c*_{p-l} (T + E_p - E_{p-l} - E_{p-k})^{-1} c_{p-k}
                for (int i = 0; i < base.n; ++i) {
                    const std::uint16_t h = base.v[i];
                    if (!modes.inside(h)) continue;
                    const int p = outside(modes.mode(h) + k);
                    if (p < 0) continue;
                    const int h2 = inside(modes.mode(std::size_t(p)) - l);
                    if (h2 < 0) continue;
                    Occ o = base;
                    int sign = o.flip(h, false);
                    if (o.has(std::uint16_t(h2))) continue;
                    sign *= o.flip(std::uint16_t(h2), true);
                    emit(B, moves, o, -vk * vl * sign / (T + E(p) - E(h2)), out);
                }
            } else if (n == 3) {
                // -sum_{p-k inside} b*_{p-k+l} (T + E_{p-k+l} + E_p - E_{p-k})^{-1} b_p
                for (int i = 0; i < base.n; ++i) {
                    const std::uint16_t p = base.v[i];
                    if (modes.inside(p)) continue;
                    const int h = inside(modes.mode(p) - k);
                    if (h < 0) continue;
                    const int p2 = outside(modes.mode(std::size_t(h)) + l);
                    if (p2 < 0) continue;
                    Occ o = base;
                    int sign = o.flip(p, false);
                    if (o.has(std::uint16_t(p2))) continue;
                    sign *= o.flip(std::uint16_t(p2), true);
                    emit(B, moves, o, -vk * vl * sign / (T + E(p2) - E(h)), out);
                }
            } else {
                // sum b*_q c*_{q-l} (T + E_p + E_q - E_{p-k} - E_{q-l})^{-1} c_{p-k} b_p
                for (int i = 0; i < base.n; ++i) {
                    const std::uint16_t p = base.v[i];
                    if (modes.inside(p)) continue;
                    const int h = inside(modes.mode(p) - k);
                    if (h < 0 || !base.has(std::uint16_t(h))) continue;
                    Occ mid = base;
                    int sign = mid.flip(p, false);
                    sign *= mid.flip(std::uint16_t(h), false);
                    for (std::size_t q = 0; q < modes.size(); ++q) {
                        if (modes.inside(q) || mid.has(std::uint16_t(q))) continue;
                        const int h2 = inside(modes.mode(q) - l);
                        if (h2 < 0 || mid.has(std::uint16_t(h2))) continue;
                        Occ o = mid;
                        int sg = sign * o.flip(std::uint16_t(h2), true);
                        sg *= o.flip(std::uint16_t(q), true);
                        emit(B, moves, o, vk * vl * sg / (T + E(int(q)) - E(h2)), out);
                    }
                }
            }
        }
    }
}

void add_column(const OperatorHandle& op, OpKind kind, std::uint32_t s, double scale, Sparse& out) {
    thread_local std::vector<Connection> conn;
    conn.clear();
    op.column(kind, s, conn);
    for (const auto& c : conn) out[c.target] += scale * c.amplitude;
}

// V_- T^{-1} V_+ e_s
Sparse mediated_column(const OperatorHandle& op, const Eigen::VectorXd& T, std::uint32_t s) {
    Sparse up, out;
    add_column(op, OpKind::VPlus, s, 1.0, up);
    for (const auto& [t, v] : up) add_column(op, OpKind::VMinus, t, v / T(t), out);
    return out;
}

}  // namespace

Eigen::MatrixXd a_block(const FockBasis& basis, const FourierPotential& V, int n, const std::vector<std::size_t>& states) {
    if (n < 1 || n > 4) throw InvalidParameter("A index must be 1..4");
    std::unordered_map<std::size_t, Eigen::Index> pos;
    for (std::size_t i = 0; i < states.size(); ++i) pos.emplace(states[i], Eigen::Index(i));
    const Eigen::Index m = Eigen::Index(states.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Sparse col;
    for (Eigen::Index j = 0; j < m; ++j) {
        col.clear();
        a_column(basis, V, n, states[std::size_t(j)], col);
        for (const auto& [t, v] : col) {
            auto it = pos.find(t);
            if (it == pos.end()) throw Error("A block leaves the selected states");
            A(it->second, j) += v;
        }
    }
    return A;
}

DecompositionReport quadratic_decomposition_check(const DecompositionConfig& cfg) {
    DecompositionReport rep;
    const ModeSet modes = ModeSet::ball(cfg.cutoff2, cfg.kF);

    // (a) vacuum sector against the mediated potential
    for (int N : cfg.vacuum_N) {
        const double lambda = potentials::lambda_coupling(N, cfg.kF);
        const ModeSet bm = ModeSet::ball(cfg.vacuum_boson_cutoff2);
        const FockBasis basis(modes, bm, {N, 1, std::nullopt, cfg.dense_cap * 100});
        const FockBasis bosons = boson_basis(N, cfg.vacuum_boson_cutoff2);
        const OperatorHandle op(basis, OpKind::H, {cfg.V, FourierPotential::zero(), lambda});
        const Eigen::VectorXd T = OperatorHandle(basis, OpKind::T).diagonal();
        const FourierPotential WkF = potentials::effective_potential_kF(cfg.V, cfg.kF).base;
        const double W0 = potentials::effective_value_at_zero(cfg.V, cfg.kF);
        const OperatorHandle hw(bosons, OpKind::HW, {FourierPotential::zero(), WkF, 0.0});
        std::vector<Connection> conn;
        for (std::size_t b = 0; b < bosons.boson_config_count(); ++b) {
            bool inner = true;
            for (int i = 0; i < N; ++i)
                inner = inner && bm.mode(bosons.boson_config(b)[i]).norm2() <= cfg.vacuum_inner_cutoff2;
            if (!inner) continue;
            const std::int64_t s = basis.vacuum_state(b);
            Sparse fock = mediated_column(op, T, std::uint32_t(s));
            std::map<std::size_t, double> diff;
            for (const auto& [t, v] : fock) {
                if (basis.pair_count(basis.state_fermion(t)) != 0) throw Error("mediated term left the vacuum sector");
                diff[basis.state_boson(t)] += lambda * lambda * v;
            }
            conn.clear();
            hw.column(b, conn);
            for (const auto& c : conn) diff[bosons.state_boson(c.target)] -= c.amplitude;
            diff[b] -= 0.5 * W0;
            for (const auto& [t, v] : diff) rep.vacuum_residual = std::max(rep.vacuum_residual, std::abs(v));
        }
    }

    // (b), (c) and the decomposition on the pair sectors
    const double lambda = potentials::lambda_coupling(cfg.N, cfg.kF);
    const FockBasis basis(modes, ModeSet::ball(cfg.boson_cutoff2), {cfg.N, 2, cfg.sector, cfg.dense_cap * 100});
    rep.total_dim = basis.dim();
    std::vector<std::size_t> one;
    for (std::size_t s = 0; s < basis.dim(); ++s)
        if (basis.pair_count(basis.state_fermion(s)) == 1) one.push_back(s);
    rep.one_pair_dim = one.size();
    if (one.size() > cfg.dense_cap) throw CapacityError(one.size(), cfg.dense_cap);

    const OperatorHandle op(basis, OpKind::H, {cfg.V, FourierPotential::zero(), lambda});
    const Eigen::VectorXd T = OperatorHandle(basis, OpKind::T).diagonal();

    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(Eigen::Index(one.size()), Eigen::Index(one.size()));
    for (int n = 1; n <= 4; ++n) {
        const Eigen::MatrixXd A = a_block(basis, cfg.V, n, one);
        rep.max_abs_A[n - 1] = A.size() ? A.cwiseAbs().maxCoeff() : 0.0;
        sum += A;
        if (n == 2 || n == 3) {
            double min_eig = 0.0;
            if (A.size()) {
                const Eigen::MatrixXd S = -0.5 * (A + A.transpose());
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
                min_eig = es.eigenvalues()(0);
            }
            (n == 2 ? rep.min_eig_minus_A2 : rep.min_eig_minus_A3) = min_eig;
        }
    }
    std::unordered_map<std::size_t, Eigen::Index> pos;
    for (std::size_t i = 0; i < one.size(); ++i) pos.emplace(one[i], Eigen::Index(i));
    for (std::size_t j = 0; j < one.size(); ++j) {
        Sparse m = mediated_column(op, T, std::uint32_t(one[j]));
        Eigen::VectorXd col = -sum.col(Eigen::Index(j));
        for (const auto& [t, v] : m) {
            auto it = pos.find(t);
            if (it == pos.end()) {
                rep.decomposition_residual = std::max(rep.decomposition_residual, std::abs(v));
                continue;
            }
            col(it->second) += v;
        }
        if (col.size()) rep.decomposition_residual = std::max(rep.decomposition_residual, col.cwiseAbs().maxCoeff());
    }

    // (c) T + l V_- + l V_+ = X* X - l^2 V_- T^{-1} V_+, X = T^{1/2} + l T^{-1/2} V_+
    auto inv_sqrt = [&](std::uint32_t t) { return T(t) > 0.0 ? 1.0 / std::sqrt(T(t)) : 0.0; };
    for (std::size_t s = 0; s < basis.dim(); ++s) {
        const std::uint32_t j = std::uint32_t(s);
        Sparse X;
        if (T(j) != 0.0) X[j] += std::sqrt(T(j));
        Sparse up;
        add_column(op, OpKind::VPlus, j, 1.0, up);
        for (const auto& [t, v] : up) X[t] += lambda * inv_sqrt(t) * v;
        Sparse rhs;
        for (const auto& [t, v] : X) {
            if (T(t) != 0.0) rhs[t] += std::sqrt(T(t)) * v;
            add_column(op, OpKind::VMinus, t, lambda * inv_sqrt(t) * v, rhs);
        }
        for (const auto& [t, v] : mediated_column(op, T, j)) rhs[t] -= lambda * lambda * v;
        rhs[j] -= T(j);
        add_column(op, OpKind::VMinus, j, -lambda, rhs);
        add_column(op, OpKind::VPlus, j, -lambda, rhs);
        for (const auto& [t, v] : rhs)
            rep.completed_square_residual = std::max(rep.completed_square_residual, std::abs(v));
    }
    return rep;
}

}  // namespace bfmix::spectra
