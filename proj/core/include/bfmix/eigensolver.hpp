#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bfmix/operators.hpp"

namespace bfmix {

// Symmetric operator given by its action; `dense` is optional.
struct LinearOperator {
    std::size_t dim = 0;
    std::function<void(const double*, double*)> apply;
    std::function<Eigen::MatrixXd()> dense;
};

LinearOperator as_linear_operator(const OperatorHandle& op);

struct EigenOptions {
    int count = 1;
    double tol = 1e-10;                 // residual tolerance relative to the spectral scale
    std::size_t dense_threshold = 2000;  // dense solver at or below this dimension
    int krylov = 0;                     // Krylov block size; 0 picks max(2 count + 30, 80)
    int max_restarts = 300;
    std::uint64_t seed = 0x5eed;
    bool vectors = true;
};

struct EigenResult {
    std::vector<double> values;     // nondecreasing
    std::vector<double> residuals;  // ||A v - mu v||
    Eigen::MatrixXd vectors;        // columns, unit norm
    std::string method;
    int restarts = 0;
    int applies = 0;
};

EigenResult lowest_eigenvalues(const LinearOperator& op, const EigenOptions& options = {});
EigenResult lowest_eigenvalues(const OperatorHandle& op, const EigenOptions& options = {});
EigenResult dense_lowest(const Eigen::MatrixXd& A, int count);

// Groups of eigenvalues within tol of their neighbour; returns cluster sizes in order.
std::vector<int> eigenvalue_clusters(const std::vector<double>& values, double tol = 1e-10);

}  // namespace bfmix
