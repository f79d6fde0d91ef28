// Test-only reference implementations, kept independent of the library paths
// they check.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <vector>

#include "gstar/weights.hpp"

namespace oracle {

// All-pairs shortest paths by Floyd-Warshall, capped at `cap`.
inline Eigen::MatrixXi floyd_warshall(const gstar::AdjacencyGraph& g, int cap) {
    const int k = g.size();
    const int inf = 1 << 20;
    Eigen::MatrixXi d = Eigen::MatrixXi::Constant(k, k, inf);
    for (int i = 0; i < k; ++i) d(i, i) = 0;
    for (auto [a, b] : g.edge_indices()) d(a, b) = d(b, a) = 1;
    for (int m = 0; m < k; ++m)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (d(i, m) + d(m, j) < d(i, j)) d(i, j) = d(i, m) + d(m, j);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (d(i, j) > cap) d(i, j) = cap;
    return d;
}

// Minimizer of 0.5*||u - v||^2 + tau * sum_g ||v_g|| by block coordinate
// descent on the dual (projection onto a sum of group-supported balls).
// Works for any group list, nested or not.
inline Eigen::VectorXd prox_dual_cd(const Eigen::VectorXd& u,
                                    const std::vector<std::vector<int>>& groups,
                                    double tau, int max_sweeps = 200000,
                                    double tol = 1e-12) {
    std::vector<Eigen::VectorXd> xi(groups.size());
    for (size_t g = 0; g < groups.size(); ++g)
        xi[g] = Eigen::VectorXd::Zero(static_cast<int>(groups[g].size()));
    Eigen::VectorXd v = u;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (size_t g = 0; g < groups.size(); ++g) {
            const auto& idx = groups[g];
            Eigen::VectorXd r(static_cast<int>(idx.size()));
            for (size_t q = 0; q < idx.size(); ++q)
                r[static_cast<int>(q)] = v[idx[q]] + xi[g][static_cast<int>(q)];
            const double norm = r.norm();
            Eigen::VectorXd xi_new = norm > tau ? (tau / norm) * r : r;
            for (size_t q = 0; q < idx.size(); ++q) {
                const double delta = xi_new[static_cast<int>(q)] - xi[g][static_cast<int>(q)];
                v[idx[q]] -= delta;
                max_change = std::max(max_change, std::abs(delta));
            }
            xi[g] = std::move(xi_new);
        }
        if (max_change < tol) break;
    }
    return v;
}

// sqrt of the top eigenvalue of Z'Z via a dense symmetric eigensolver.
inline double top_singular_value_eig(const Eigen::MatrixXd& Z) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Z.transpose() * Z);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

inline double spectral_radius_eig(const Eigen::MatrixXd& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Stationary covariance of a VAR(1) x_t = A x_{t-1} + e_t, cov(e) = S:
// vec(G0) = (I - kron(A, A))^{-1} vec(S).
inline Eigen::MatrixXd var1_stationary_cov(const Eigen::MatrixXd& A,
                                           const Eigen::MatrixXd& S) {
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXd K(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            K.block(i * n, j * n, n, n) = A(i, j) * A;
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n * n, n * n) - K;
    Eigen::VectorXd vecS(n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) vecS[j * n + i] = S(i, j);
    Eigen::VectorXd vecG = lhs.fullPivLu().solve(vecS);
    Eigen::MatrixXd G(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) G(i, j) = vecG[j * n + i];
    return G;
}

}  // namespace oracle
