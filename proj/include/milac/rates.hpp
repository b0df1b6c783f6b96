// SPDX-License-Identifier: Apache-2.0
//
// Sum-rate evaluation, the low-dimensional channel representation and the
// Wirtinger gradient of the rate. All rates are in bits (log base 2).
//
// Most routines work on the K x K "gain" matrix A with A(k, j) = h_k^H w_j,
// which is all the sum rate depends on.

#ifndef MILAC_RATES_HPP
#define MILAC_RATES_HPP

#include "milac/linalg.hpp"

#include <numbers>

namespace milac {

inline double sum_rate_from_gains(const CMat& A, double noise) {
    if (!(noise > 0.0)) throw ValidationError("sum_rate: noise power must be positive");
    require_dims(A.rows() == A.cols(), "sum_rate: gain matrix must be square");
    double rate = 0.0;
    for (Index k = 0; k < A.rows(); ++k) {
        const double total = A.row(k).squaredNorm() + noise;
        const double interference = total - std::norm(A(k, k));
        rate += std::log2(total / interference);
    }
    return rate;
}

/// sum_k log2(1 + |h_k^H w_k|^2 / (sum_{j != k} |h_k^H w_j|^2 + noise)).
inline double sum_rate(const CMat& H, const CMat& W, double noise) {
    require_dims(H.cols() == W.rows() && H.rows() == W.cols(), "sum_rate: H is K x N, W must be N x K");
    return sum_rate_from_gains(H * W, noise);
}

/// Rate of the split parametrisation: gains C Y diag(p)^{1/2}.
inline double split_sum_rate(const CMat& C, const CMat& Y, const RVec& p, double noise) {
    return sum_rate_from_gains(C * Y * diag_sqrt(p), noise);
}

/// Derivative of the rate (bits) with respect to conj(A).
inline CMat rate_gradient_gains(const CMat& A, double noise) {
    const Index K = A.rows();
    CMat G(K, K);
    for (Index k = 0; k < K; ++k) {
        const double total = A.row(k).squaredNorm() + noise;
        const double interference = total - std::norm(A(k, k));
        G.row(k) = A.row(k) * (1.0 / total - 1.0 / interference);
        G(k, k) = A(k, k) / total;
    }
    return G / std::numbers::ln2;
}

/// H (K x N) together with Hbar = H H^H, Hhat = Hbar^{1/2} and Hbar^{-1/2}.
/// Row k of Hbar is hbar_k^H; row k of Hhat is hhat_k^H.
struct ReducedChannel {
    CMat H;
    CMat Hbar;
    CMat Hhat;
    CMat Hbar_inv_sqrt;

    Index users() const { return H.rows(); }
    Index antennas() const { return H.cols(); }
};

inline ReducedChannel reduce_dimension(const CMat& H, double rank_tol = 1e-10) {
    require_dims(H.rows() >= 1 && H.cols() >= H.rows(), "reduce_dimension: need K >= 1 and N >= K");
    ReducedChannel rc;
    rc.H = H;
    rc.Hbar = hermitian_part(H * H.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(rc.Hbar);
    const RVec lam = es.eigenvalues();
    if (!(lam(0) > rank_tol * lam(lam.size() - 1)))
        throw InfeasibleError(
            "reduce_dimension: H is rank deficient; project onto a basis of Ran(H^H) "
            "of dimension rank(H) first");
    const CMat& V = es.eigenvectors();
    const RVec root = lam.cwiseSqrt();
    rc.Hhat = V * root.cast<cplx>().asDiagonal() * V.adjoint();
    rc.Hbar_inv_sqrt = V * root.cwiseInverse().cast<cplx>().asDiagonal() * V.adjoint();
    return rc;
}

/// W = H^H X; then H W = Hbar X, so reduced and full rates coincide.
inline CMat lift_solution(const CMat& X, const CMat& H) {
    require_dims(X.rows() == H.rows(), "lift_solution: X must be K x K");
    return H.adjoint() * X;
}

inline double reduced_sum_rate(const ReducedChannel& rc, const CMat& X, double noise) {
    return sum_rate_from_gains(rc.Hbar * X, noise);
}

/// Orthogonal projection of W onto Ran(H^H).
inline CMat project_onto_channel_range(const ReducedChannel& rc, const CMat& W) {
    return rc.H.adjoint() * rc.Hbar.ldlt().solve(rc.H * W);
}

} // namespace milac

#endif // MILAC_RATES_HPP
