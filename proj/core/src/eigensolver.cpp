#include "bfmix/eigensolver.hpp"

#include <algorithm>
#include <cmath>

#include "bfmix/error.hpp"
#include "bfmix/hashing.hpp"

namespace bfmix {

LinearOperator as_linear_operator(const OperatorHandle& op) {
    LinearOperator L;
    L.dim = op.basis().dim();
    L.apply = [&op](const double* x, double* y) { op.apply(x, y); };
    L.dense = [&op]() { return op.dense(std::size_t(-1)); };
    return L;
}

EigenResult dense_lowest(const Eigen::MatrixXd& A, int count) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw ShapeError("matrix is not square");
    EigenResult r;
    r.method = "dense";
    if (n == 0) return r;
    const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", {});
    const Eigen::Index m = std::min<Eigen::Index>(count, n);
    r.vectors = es.eigenvectors().leftCols(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double mu = es.eigenvalues()(i);
        r.values.push_back(mu);
        r.residuals.push_back((A * r.vectors.col(i) - mu * r.vectors.col(i)).norm());
    }
    return r;
}

namespace {

// Two passes of classical Gram-Schmidt against the columns [0, cols) of Q.
void orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& Q, Eigen::Index cols) {
    if (cols == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd h = Q.leftCols(cols).transpose() * w;
        w.noalias() -= Q.leftCols(cols) * h;
    }
}

}  // namespace

EigenResult lowest_eigenvalues(const LinearOperator& op, const EigenOptions& opt) {
    const std::size_t n = op.dim;
    if (opt.count < 1) throw InvalidParameter("eigenvalue count must be positive");
    if (n <= opt.dense_threshold) {
        if (!op.dense) throw InvalidParameter("operator has no dense form");
        return dense_lowest(op.dense(), opt.count);
    }
    const Eigen::Index N = Eigen::Index(n);
    const int want = int(std::min<std::size_t>(std::size_t(opt.count), n));
    const int m_block = opt.krylov > 0 ? opt.krylov : std::max(2 * want + 30, 80);

    EigenResult r;
    r.method = "lanczos";
    Eigen::MatrixXd locked(N, 0);
    std::vector<double> locked_values, locked_res;

    Eigen::VectorXd start(N);
    for (Eigen::Index i = 0; i < N; ++i) start(i) = counter_normal(opt.seed, std::uint64_t(i));
    std::uint64_t draw = std::uint64_t(N);
    double scale = 0.0;
    std::vector<double> best;

    Eigen::VectorXd w(N);
    for (int restart = 0; restart < opt.max_restarts; ++restart) {
        r.restarts = restart;
        const Eigen::Index L = locked.cols();
        const Eigen::Index m = std::min<Eigen::Index>(m_block, N - L);
        if (m <= 0) break;
        Eigen::MatrixXd Q(N, L + m);
        Q.leftCols(L) = locked;
        Eigen::VectorXd v = start;
        orthogonalize(v, Q, L);
        if (v.norm() < 1e-12) {
            for (Eigen::Index i = 0; i < N; ++i) v(i) = counter_normal(opt.seed, draw + std::uint64_t(i));
            draw += std::uint64_t(N);
            orthogonalize(v, Q, L);
        }
        v /= v.norm();
        std::vector<double> alpha, beta;
        Eigen::Index k = 0;
        double last_beta = 0.0;
        for (; k < m; ++k) {
            Q.col(L + k) = v;
            op.apply(v.data(), w.data());
            ++r.applies;
            const double a = v.dot(w);
            alpha.push_back(a);
            orthogonalize(w, Q, L + k + 1);
            const double b = w.norm();
            scale = std::max({scale, std::abs(a), b});
            last_beta = b;
            if (k + 1 == m) break;
            if (b <= 1e-12 * std::max(scale, 1.0)) {
                last_beta = 0.0;
                break;
            }
            beta.push_back(b);
            v = w / b;
        }
        const Eigen::Index size = Eigen::Index(alpha.size());
        Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(size, size);
        for (Eigen::Index i = 0; i < size; ++i) {
            Tm(i, i) = alpha[std::size_t(i)];
            if (i + 1 < size) Tm(i, i + 1) = Tm(i + 1, i) = beta[std::size_t(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
        const Eigen::VectorXd theta = es.eigenvalues();
        const Eigen::MatrixXd S = es.eigenvectors();
        const double tol = opt.tol * std::max(scale, 1.0);

        best = locked_values;
        for (Eigen::Index i = 0; i < size && int(best.size()) < want; ++i) best.push_back(theta(i));
        std::sort(best.begin(), best.end());

        // lock converged Ritz pairs from the bottom, recomputing true residuals
        Eigen::Index first_unconverged = size;
        for (Eigen::Index i = 0; i < size; ++i) {
            if (std::abs(last_beta * S(size - 1, i)) > tol) {
                first_unconverged = i;
                break;
            }
            Eigen::VectorXd y = Q.middleCols(L, size) * S.col(i);
            y /= y.norm();
            op.apply(y.data(), w.data());
            ++r.applies;
            const double res = (w - theta(i) * y).norm();
            if (res > 10.0 * tol) {
                first_unconverged = i;
                break;
            }
            orthogonalize(y, locked, locked.cols());
            y /= y.norm();
            locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
            locked.col(locked.cols() - 1) = y;
            locked_values.push_back(theta(i));
            locked_res.push_back(res);
        }
        std::vector<double> sorted = locked_values;
        std::sort(sorted.begin(), sorted.end());
        const bool enough = int(sorted.size()) >= want;
        const bool exhausted = locked.cols() >= N;
        if (enough && (exhausted || first_unconverged >= size || theta(first_unconverged) >= sorted[std::size_t(want - 1)] - tol))
            break;
        if (first_unconverged < size) {
            start = Q.middleCols(L, size) * S.col(first_unconverged);
        } else {
            for (Eigen::Index i = 0; i < N; ++i) start(i) = counter_normal(opt.seed, draw + std::uint64_t(i));
            draw += std::uint64_t(N);
        }
        // a small seeded perturbation keeps components of degenerate partners
        const double eps = 1e-4 * start.norm() / std::sqrt(double(N));
        for (Eigen::Index i = 0; i < N; ++i) start(i) += eps * counter_normal(opt.seed, draw + std::uint64_t(i));
        draw += std::uint64_t(N);
        if (restart + 1 == opt.max_restarts)
            throw ConvergenceError("Lanczos did not converge after " + std::to_string(opt.max_restarts) + " restarts", best);
    }
    if (int(locked_values.size()) < want) throw ConvergenceError("Lanczos did not converge", best);

    std::vector<int> order(locked_values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return locked_values[std::size_t(a)] < locked_values[std::size_t(b)]; });
    r.vectors.resize(N, want);
    for (int i = 0; i < want; ++i) {
        const int j = order[std::size_t(i)];
        r.values.push_back(locked_values[std::size_t(j)]);
        r.residuals.push_back(locked_res[std::size_t(j)]);
        r.vectors.col(i) = locked.col(j);
    }
    if (!opt.vectors) r.vectors.resize(0, 0);
    return r;
}

namespace {

// Connected components of the sparsity graph, each listed in increasing state order.
std::vector<std::vector<std::size_t>> components(const OperatorHandle& op) {
    const std::size_t n = op.basis().dim();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<Connection> conn;
    for (std::size_t j = 0; j < n; ++j) {
        conn.clear();
        op.column(j, conn);
        for (const auto& c : conn) {
            if (c.amplitude == 0.0 || c.target == j) continue;
            const std::size_t a = find(j), b = find(c.target);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(n, SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (slot[r] == SIZE_MAX) {
            slot[r] = out.size();
            out.emplace_back();
        }
        out[slot[r]].push_back(i);
    }
    return out;
}

}  // namespace

EigenResult lowest_eigenvalues(const OperatorHandle& op, const EigenOptions& options) {
    const auto blocks = components(op);
    if (blocks.size() <= 1) return lowest_eigenvalues(as_linear_operator(op), options);

    const std::size_t n = op.basis().dim();
    std::vector<std::ptrdiff_t> local(n);
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.size(); ++i) local[b[i]] = std::ptrdiff_t(i);

    struct Candidate {
        double value;
        double residual;
        std::size_t block;
        Eigen::VectorXd vector;
    };
    std::vector<Candidate> all;
    EigenResult r;
    std::string methods;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& b = blocks[bi];
        const std::size_t m = b.size();
        LinearOperator sub;
        sub.dim = m;
        sub.apply = [&op, &b, &local](const double* x, double* y) {
            std::fill(y, y + b.size(), 0.0);
            std::vector<Connection> conn;
            for (std::size_t j = 0; j < b.size(); ++j) {
                conn.clear();
                op.column(b[j], conn);
                for (const auto& c : conn) y[local[c.target]] += c.amplitude * x[j];
            }
        };
        sub.dense = [&op, &b, &local]() {
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(Eigen::Index(b.size()), Eigen::Index(b.size()));
            std::vector<Connection> conn;
            for (std::size_t j = 0; j < b.size(); ++j) {
                conn.clear();
                op.column(b[j], conn);
                for (const auto& c : conn) A(local[c.target], Eigen::Index(j)) += c.amplitude;
            }
            return A;
        };
        EigenOptions o = options;
        o.count = int(std::min<std::size_t>(std::size_t(options.count), m));
        const EigenResult br = lowest_eigenvalues(sub, o);
        r.restarts += br.restarts;
        r.applies += br.applies;
        if (methods.find(br.method) == std::string::npos) methods += (methods.empty() ? "" : "+") + br.method;
        for (std::size_t k = 0; k < br.values.size(); ++k)
            all.push_back({br.values[k], br.residuals[k], bi,
                           options.vectors ? Eigen::VectorXd(br.vectors.col(Eigen::Index(k))) : Eigen::VectorXd()});
    }
    std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    const std::size_t want = std::min<std::size_t>(std::size_t(options.count), all.size());
    r.method = "blocks(" + std::to_string(blocks.size()) + "):" + methods;
    if (options.vectors) r.vectors = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(want));
    for (std::size_t k = 0; k < want; ++k) {
        r.values.push_back(all[k].value);
        r.residuals.push_back(all[k].residual);
        if (!options.vectors) continue;
        const auto& b = blocks[all[k].block];
        for (std::size_t i = 0; i < b.size(); ++i) r.vectors(Eigen::Index(b[i]), Eigen::Index(k)) = all[k].vector(Eigen::Index(i));
    }
    return r;
}

std::vector<int> eigenvalue_clusters(const std::vector<double>& values, double tol) {
    std::vector<int> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0 && std::abs(values[i] - values[i - 1]) <= tol)
            ++out.back();
        else
            out.push_back(1);
    }
    return out;
}

}  // namespace bfmix
