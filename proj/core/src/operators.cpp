#include "bfmix/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "bfmix/error.hpp"

namespace bfmix {

namespace {

constexpr double kTwoPi32 = 15.749609945722419;  // (2 pi)^{3/2}

struct Occ {
    std::array<std::uint16_t, kMaxOccupied + 2> v{};
    int n = 0;

    bool has(std::uint16_t j) const { return std::find(v.begin(), v.begin() + n, j) != v.begin() + n; }
    int below(std::uint16_t j) const {
        int c = 0;
        for (int i = 0; i < n; ++i) c += v[i] < j;
        return c;
    }
    // Create at j; returns the sign.
    int create(std::uint16_t j) {
        const int b = below(j);
        for (int i = n; i > b; --i) v[i] = v[i - 1];
        v[b] = j;
        ++n;
        return (b & 1) ? -1 : 1;
    }
    // Annihilate at j (must be present); returns the sign.
    int annihilate(std::uint16_t j) {
        const int b = below(j);
        for (int i = b; i + 1 < n; ++i) v[i] = v[i + 1];
        --n;
        return (b & 1) ? -1 : 1;
    }
};

Occ occ_of(const FockBasis& basis, std::size_t f) {
    Occ o;
    o.n = basis.fermion_size(f);
    const std::uint16_t* p = basis.fermion_config(f);
    std::copy(p, p + o.n, o.v.begin());
    return o;
}


}  // namespace

std::string_view op_name(OpKind kind) {
    switch (kind) {
        case OpKind::HKinetic: return "h_kinetic";
        case OpKind::HW: return "h_W";
        case OpKind::T: return "T";
        case OpKind::VPlus: return "V_plus";
        case OpKind::VMinus: return "V_minus";
        case OpKind::VDiag: return "V_diag";
        case OpKind::NPlus: return "N_plus";
        case OpKind::NMinus: return "N_minus";
        case OpKind::H: return "H";
    }
    return "?";
}

std::optional<OpKind> parse_op_kind(std::string_view name) {
    for (OpKind k : {OpKind::HKinetic, OpKind::HW, OpKind::T, OpKind::VPlus, OpKind::VMinus, OpKind::VDiag,
                     OpKind::NPlus, OpKind::NMinus, OpKind::H})
        if (op_name(k) == name) return k;
    return std::nullopt;
}

OpKind adjoint(OpKind kind) {
    if (kind == OpKind::VPlus) return OpKind::VMinus;
    if (kind == OpKind::VMinus) return OpKind::VPlus;
    return kind;
}

namespace ops {

void boson_shift(const FockBasis& basis, std::size_t b, const Vec3i& q, std::vector<BosonMove>& out) {
    const int N = basis.N();
    const auto& modes = basis.boson_modes();
    const std::uint16_t* t = basis.boson_config(b);
    std::array<std::uint16_t, kMaxBosons> w{};
    for (int i = 0; i < N;) {
        int j = i;
        while (j < N && t[j] == t[i]) ++j;
        const int n_m = j - i;
        const int target = modes.index_of(modes.mode(t[i]) - q);
        if (target >= 0) {
            std::copy(t, t + N, w.begin());
            w[i] = std::uint16_t(target);
            std::sort(w.begin(), w.begin() + N);
            const int n_t = int(std::count(w.begin(), w.begin() + N, std::uint16_t(target)));
            const std::int64_t idx = basis.boson_index(w.data());
            if (idx >= 0) out.push_back({std::uint32_t(idx), std::sqrt(double(n_m) * double(n_t))});
        }
        i = j;
    }
}

void boson_pair_scatter(const FockBasis& basis, std::size_t b, const FourierPotential& W,
                        std::vector<BosonMove>& out) {
    const int N = basis.N();
    if (N < 2 || W.is_zero()) return;
    const auto& modes = basis.boson_modes();
    const std::uint16_t* t = basis.boson_config(b);
    // distinct occupied modes with multiplicities
    std::array<std::uint16_t, kMaxBosons> mode{};
    std::array<int, kMaxBosons> mult{};
    int distinct = 0;
    for (int i = 0; i < N; ++i) {
        if (distinct > 0 && mode[distinct - 1] == t[i]) {
            ++mult[distinct - 1];
        } else {
            mode[distinct] = t[i];
            mult[distinct] = 1;
            ++distinct;
        }
    }
    const double prefactor = 1.0 / (2.0 * double(N) * kTwoPi32);
    std::array<std::uint16_t, kMaxBosons> w{};
    for (int a = 0; a < distinct; ++a) {
        for (int c = 0; c < distinct; ++c) {
            const double annihilate = double(mult[a]) * double(a == c ? mult[c] - 1 : mult[c]);
            if (annihilate <= 0.0) continue;
            const Vec3i p = modes.mode(mode[a]);
            const Vec3i q = modes.mode(mode[c]);
            for (const auto& [k, wk] : W.entries()) {
                if (k.is_zero()) continue;
                const int ip = modes.index_of(p + k);
                const int iq = modes.index_of(q - k);
                if (ip < 0 || iq < 0) continue;
                // remove p then q, add q - k then p + k
                std::copy(t, t + N, w.begin());
                auto* pos = std::find(w.begin(), w.begin() + N, mode[a]);
                *pos = std::uint16_t(iq);
                pos = std::find(w.begin(), w.begin() + N, mode[c]);
                // when a == c the first copy was already replaced, so this finds the second
                *pos = std::uint16_t(ip);
                std::sort(w.begin(), w.begin() + N);
                const int n_iq = int(std::count(w.begin(), w.begin() + N, std::uint16_t(iq)));
                const int n_ip = int(std::count(w.begin(), w.begin() + N, std::uint16_t(ip)));
                // after adding q - k its count is n_iq - [ip == iq]
                const double create = double(n_iq - (ip == iq ? 1 : 0)) * double(n_ip);
                const std::int64_t idx = basis.boson_index(w.data());
                if (idx >= 0) out.push_back({std::uint32_t(idx), prefactor * wk * std::sqrt(annihilate * create)});
            }
        }
    }
}

double boson_pair_constant(int N, const FourierPotential& W) {
    if (N < 1) return 0.0;
    return 0.5 * double(N - 1) * W.zero_mode() / kTwoPi32;
}

int sign_below(const std::uint16_t* occ, int n, std::uint16_t j) {
    int c = 0;
    for (int i = 0; i < n; ++i) c += occ[i] < j;
    return (c & 1) ? -1 : 1;
}

}  // namespace ops

OperatorHandle::OperatorHandle(const FockBasis& basis, OpKind kind, Couplings couplings)
    : basis_(&basis), kind_(kind), c_(std::move(couplings)) {
    pair_constant_ = ops::boson_pair_constant(basis.N(), c_.W);
}

void OperatorHandle::diag_part(OpKind kind, std::size_t s, std::vector<Connection>& out) const {
    const FockBasis& B = *basis_;
    const std::size_t f = B.state_fermion(s);
    double d = 0.0;
    const auto excitation_energy = [&] {
        double e = 0.0;
        const std::uint16_t* occ = B.fermion_config(f);
        for (int i = 0; i < B.fermion_size(f); ++i) {
            const double k2 = double(B.modes().mode(occ[i]).norm2());
            e += B.modes().inside(occ[i]) ? -k2 : k2;
        }
        return e;
    };
    switch (kind) {
        case OpKind::HKinetic: d = double(B.boson_kinetic(B.state_boson(s))); break;
        case OpKind::HW: d = pair_constant_; break;
        case OpKind::T: d = excitation_energy(); break;
        case OpKind::NPlus: d = 0.5 * B.fermion_size(f); break;
        case OpKind::NMinus: {
            int np = 0;
            const std::uint16_t* occ = B.fermion_config(f);
            for (int i = 0; i < B.fermion_size(f); ++i) np += B.modes().inside(occ[i]) ? -1 : 1;
            d = 0.5 * np;
            break;
        }
        case OpKind::H:
            d = double(B.boson_kinetic(B.state_boson(s))) + pair_constant_ + excitation_energy();
            break;
        default: return;
    }
    if (d != 0.0) out.push_back({std::uint32_t(s), d});
}

void OperatorHandle::pair_scatter(std::size_t s, std::vector<Connection>& out) const {
    thread_local std::vector<ops::BosonMove> moves;
    moves.clear();
    const FockBasis& B = *basis_;
    ops::boson_pair_scatter(B, B.state_boson(s), c_.W, moves);
    const std::size_t f = B.state_fermion(s);
    for (const auto& m : moves) {
        const std::int64_t j = B.find_state(m.config, f);
        if (j >= 0) out.push_back({std::uint32_t(j), m.amplitude});
    }
}

void OperatorHandle::v_plus(std::size_t s, double scale, std::vector<Connection>& out) const {
    const FockBasis& B = *basis_;
    const std::size_t f = B.state_fermion(s);
    if (B.pair_count(f) >= B.max_pairs()) return;
    const ModeSet& modes = B.modes();
    const Occ base = occ_of(B, f);
    thread_local std::vector<ops::BosonMove> moves;
    for (const auto& [q, vq] : c_.V.entries()) {
        if (q.is_zero()) continue;
        moves.clear();
        ops::boson_shift(B, B.state_boson(s), q, moves);
        if (moves.empty()) continue;
        for (std::size_t h = 0; h < modes.size(); ++h) {
            if (!modes.inside(h) || base.has(std::uint16_t(h))) continue;
            const int p = modes.index_of(modes.mode(h) + q);
            if (p < 0 || modes.inside(std::size_t(p)) || base.has(std::uint16_t(p))) continue;
            Occ o = base;
            int sign = o.create(std::uint16_t(h));
            sign *= o.create(std::uint16_t(p));
            const std::int64_t fi = B.fermion_index(o.v.data(), o.n);
            if (fi < 0) continue;
            for (const auto& m : moves) {
                const std::int64_t j = B.find_state(m.config, std::size_t(fi));
                if (j >= 0) out.push_back({std::uint32_t(j), scale * vq * sign * m.amplitude});
            }
        }
    }
}

void OperatorHandle::v_minus(std::size_t s, double scale, std::vector<Connection>& out) const {
    const FockBasis& B = *basis_;
    const std::size_t f = B.state_fermion(s);
    if (B.pair_count(f) == 0) return;
    const ModeSet& modes = B.modes();
    const Occ base = occ_of(B, f);
    thread_local std::vector<ops::BosonMove> moves;
    for (int a = 0; a < base.n; ++a) {
        const std::uint16_t p = base.v[a];
        if (modes.inside(p)) continue;
        for (int c = 0; c < base.n; ++c) {
            const std::uint16_t h = base.v[c];
            if (!modes.inside(h)) continue;
            const Vec3i q = modes.mode(p) - modes.mode(h);
            const double vq = c_.V.coefficient(q);
            if (vq == 0.0) continue;
            Occ o = base;
            int sign = o.annihilate(p);
            sign *= o.annihilate(h);
            const std::int64_t fi = B.fermion_index(o.v.data(), o.n);
            if (fi < 0) continue;
            moves.clear();
            ops::boson_shift(B, B.state_boson(s), -q, moves);
            for (const auto& m : moves) {
                const std::int64_t j = B.find_state(m.config, std::size_t(fi));
                if (j >= 0) out.push_back({std::uint32_t(j), scale * vq * sign * m.amplitude});
            }
        }
    }
}

void OperatorHandle::v_diag(std::size_t s, double scale, std::vector<Connection>& out) const {
    const FockBasis& B = *basis_;
    const std::size_t f = B.state_fermion(s);
    if (B.pair_count(f) == 0) return;
    const ModeSet& modes = B.modes();
    const Occ base = occ_of(B, f);
    thread_local std::vector<ops::BosonMove> moves;
    int np = 0;
    for (int i = 0; i < base.n; ++i) np += modes.inside(base.v[i]) ? -1 : 1;
    for (const auto& [q, vq] : c_.V.entries()) {
        if (q.is_zero()) {
            // particle and hole number terms; zero on charge-zero states
            const double d = scale * vq * double(np) * double(B.N());
            if (d != 0.0) out.push_back({std::uint32_t(s), d});
            continue;
        }
        moves.clear();
        ops::boson_shift(B, B.state_boson(s), q, moves);
        if (moves.empty()) continue;
        for (int i = 0; i < base.n; ++i) {
            const std::uint16_t from = base.v[i];
            const bool hole = modes.inside(from);
            // particle k -> k + q; hole l -> l - q
            const int to = modes.index_of(hole ? modes.mode(from) - q : modes.mode(from) + q);
            if (to < 0 || modes.inside(std::size_t(to)) != hole || base.has(std::uint16_t(to))) continue;
            Occ o = base;
            int sign = o.annihilate(from);
            sign *= o.create(std::uint16_t(to));
            const std::int64_t fi = B.fermion_index(o.v.data(), o.n);
            if (fi < 0) continue;
            const double amp = (hole ? -vq : vq) * sign * scale;
            for (const auto& m : moves) {
                const std::int64_t j = B.find_state(m.config, std::size_t(fi));
                if (j >= 0) out.push_back({std::uint32_t(j), amp * m.amplitude});
            }
        }
    }
}

void OperatorHandle::column(OpKind kind, std::size_t s, std::vector<Connection>& out) const {
    switch (kind) {
        case OpKind::HKinetic:
        case OpKind::T:
        case OpKind::NPlus:
        case OpKind::NMinus: diag_part(kind, s, out); break;
        case OpKind::HW:
            diag_part(kind, s, out);
            pair_scatter(s, out);
            break;
        case OpKind::VPlus: v_plus(s, 1.0, out); break;
        case OpKind::VMinus: v_minus(s, 1.0, out); break;
        case OpKind::VDiag: v_diag(s, 1.0, out); break;
        case OpKind::H:
            diag_part(kind, s, out);
            pair_scatter(s, out);
            if (c_.lambda != 0.0) {
                v_plus(s, c_.lambda, out);
                v_minus(s, c_.lambda, out);
                v_diag(s, c_.lambda, out);
            }
            break;
    }
}

void OperatorHandle::apply(const double* x, double* y) const {
    const std::int64_t n = std::int64_t(basis_->dim());
    const OpKind adj = adjoint(kind_);
#pragma omp parallel
    {
        std::vector<Connection> conn;
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < n; ++i) {
            conn.clear();
            column(adj, std::size_t(i), conn);
            double acc = 0.0;
            for (const auto& c : conn) acc += c.amplitude * x[c.target];
            y[i] = acc;
        }
    }
}

Eigen::VectorXd OperatorHandle::apply(const Eigen::VectorXd& x) const {
    if (std::size_t(x.size()) != basis_->dim())
        throw ShapeError("vector of size " + std::to_string(x.size()) + " on a basis of dimension " +
                         std::to_string(basis_->dim()));
    Eigen::VectorXd y(x.size());
    apply(x.data(), y.data());
    return y;
}

Eigen::MatrixXd OperatorHandle::dense(std::size_t cap) const {
    const std::size_t n = basis_->dim();
    if (n > cap) throw CapacityError(n, cap);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
    std::vector<Connection> conn;
    for (std::size_t j = 0; j < n; ++j) {
        conn.clear();
        column(kind_, j, conn);
        for (const auto& c : conn) A(c.target, Eigen::Index(j)) += c.amplitude;
    }
    return A;
}

Eigen::VectorXd OperatorHandle::diagonal() const {
    const std::size_t n = basis_->dim();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(Eigen::Index(n));
    std::vector<Connection> conn;
    for (std::size_t j = 0; j < n; ++j) {
        conn.clear();
        column(kind_, j, conn);
        for (const auto& c : conn)
            if (c.target == j) d(Eigen::Index(j)) += c.amplitude;
    }
    return d;
}

std::string OperatorHandle::metadata_json() const {
    nlohmann::json j;
    j["kind"] = std::string(op_name(kind_));
    j["lambda"] = c_.lambda;
    j["V_modes"] = c_.V.entries().size();
    j["W_modes"] = c_.W.entries().size();
    j["basis"] = nlohmann::json::parse(basis_->metadata_json());
    return j.dump(1);
}

}  // namespace bfmix
