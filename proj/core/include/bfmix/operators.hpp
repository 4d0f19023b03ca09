#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bfmix/fock_basis.hpp"
#include "bfmix/potentials.hpp"

namespace bfmix {

enum class OpKind { HKinetic, HW, T, VPlus, VMinus, VDiag, NPlus, NMinus, H };

std::string_view op_name(OpKind kind);
std::optional<OpKind> parse_op_kind(std::string_view name);
OpKind adjoint(OpKind kind);

struct Couplings {
    FourierPotential V;
    FourierPotential W;
    double lambda = 0.0;
};

// One matrix element <target|A|source> of a column.
struct Connection {
    std::uint32_t target;
    double amplitude;
};

namespace ops {

// Boson configuration produced by a mode shift, with its amplitude.
struct BosonMove {
    std::uint32_t config;
    double amplitude;
};

// S_q = sum_m a*_{m-q} a_m on boson configuration b; shifts leaving the cutoff are dropped.
void boson_shift(const FockBasis& basis, std::size_t b, const Vec3i& q, std::vector<BosonMove>& out);

// (1/(2N)) (2 pi)^{-3/2} sum_{k != 0} W(k) a*_{p+k} a*_{q-k} a_q a_p on configuration b.
void boson_pair_scatter(const FockBasis& basis, std::size_t b, const FourierPotential& W, std::vector<BosonMove>& out);

// k = 0 part of the two-body term, (N-1)/2 (2 pi)^{-3/2} W(0).
double boson_pair_constant(int N, const FourierPotential& W);

// Ordered-occupation fermionic signs: (-1)^{#occupied below j}.
int sign_below(const std::uint16_t* occ, int n, std::uint16_t j);

}  // namespace ops

// Matrix-free operator on a FockBasis. Columns are generated as connection lists; apply gathers rows
// through the adjoint generator.
class OperatorHandle {
public:
    OperatorHandle(const FockBasis& basis, OpKind kind, Couplings couplings = {});

    OpKind kind() const { return kind_; }
    const FockBasis& basis() const { return *basis_; }
    const Couplings& couplings() const { return c_; }

    // Appends the nonzero entries of column `source` of the given kind.
    void column(OpKind kind, std::size_t source, std::vector<Connection>& out) const;
    void column(std::size_t source, std::vector<Connection>& out) const { column(kind_, source, out); }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    void apply(const double* x, double* y) const;
    Eigen::MatrixXd dense(std::size_t cap = 5000) const;
    Eigen::VectorXd diagonal() const;

    std::string metadata_json() const;

private:
    const FockBasis* basis_;
    OpKind kind_;
    Couplings c_;
    double pair_constant_ = 0.0;

    void diag_part(OpKind kind, std::size_t s, std::vector<Connection>& out) const;
    void v_plus(std::size_t s, double scale, std::vector<Connection>& out) const;
    void v_minus(std::size_t s, double scale, std::vector<Connection>& out) const;
    void v_diag(std::size_t s, double scale, std::vector<Connection>& out) const;
    void pair_scatter(std::size_t s, std::vector<Connection>& out) const;
};

}  // namespace bfmix
