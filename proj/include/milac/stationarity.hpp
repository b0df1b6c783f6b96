// SPDX-License-Identifier: Apache-2.0
//
// First-order stationarity residuals. For a smooth objective R over a
// closed convex set S,
//
//     r(x) = || x - Proj_S(x + eta * grad R(x)) || / eta
//
// vanishes exactly at KKT points. The MiLAC-constrained problems are
// measured in the split coordinates (Y, p) with ||Y||_2 <= 1 and the capped
// simplex {p >= 0, 1^T p <= P_T}, where both projections are explicit.

#ifndef MILAC_STATIONARITY_HPP
#define MILAC_STATIONARITY_HPP

#include "milac/linalg.hpp"
#include "milac/rates.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace milac {

/// Euclidean projection onto {p >= 0, sum(p) <= budget}.
inline RVec project_capped_simplex(const RVec& v, double budget) {
    RVec p = v.cwiseMax(0.0);
    if (p.sum() <= budget) return p;
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cum = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cum += sorted[i];
        const double t = (cum - budget) / static_cast<double>(i + 1);
        if (sorted[i] - t > 0.0) theta = t;
    }
    return (v.array() - theta).cwiseMax(0.0).matrix();
}

struct StationarityReport {
    double residual = 0.0;
    double gradient_norm = 0.0;

    double relative() const { return gradient_norm > 0.0 ? residual / gradient_norm : residual; }
};

inline constexpr double kStationarityStep = 1e-4;

struct SplitGradient {
    CMat dY;  // real-gradient convention: 2 dR/dconj(Y)
    RVec dp;
};

/// Gradient of the rate of gains C Y diag(p)^{1/2} with respect to Y and p.
inline SplitGradient split_rate_gradient(const CMat& C, const CMat& Y, const RVec& p, double noise) {
    const CMat a = C * Y;
    const CMat A = a * diag_sqrt(p);
    const CMat GA = rate_gradient_gains(A, noise);
    const Index K = A.rows();
    SplitGradient g;
    g.dY = 2.0 * C.adjoint() * GA * diag_sqrt(p);
    g.dp = RVec::Zero(K);
    for (Index k = 0; k < K; ++k) {
        const double total = A.row(k).squaredNorm() + noise;
        const double interference = total - std::norm(A(k, k));
        for (Index j = 0; j < K; ++j) {
            const double w = j == k ? 1.0 / total : 1.0 / total - 1.0 / interference;
            g.dp(j) += std::norm(a(k, j)) * w / std::numbers::ln2;
        }
    }
    return g;
}

/// Residual in split coordinates for channel C (K x M), Y (M x K), p.
inline StationarityReport split_stationarity(const CMat& C, const CMat& Y, const RVec& p, double noise,
                                             double budget, double step = kStationarityStep) {
    const SplitGradient g = split_rate_gradient(C, Y, p, noise);
    StationarityReport r;
    r.gradient_norm = std::sqrt(g.dY.squaredNorm() + g.dp.squaredNorm());
    if (r.gradient_norm == 0.0) return r;
    const double eta = step * std::max(1.0, budget) / r.gradient_norm;
    const CMat Yn = spectral_ball_projection(Y + eta * g.dY);
    const RVec pn = project_capped_simplex(p + eta * g.dp, budget);
    r.residual = std::sqrt((Y - Yn).squaredNorm() + (p - pn).squaredNorm()) / eta;
    return r;
}

namespace detail {

inline CMat split_from_beamformer(const CMat& B, const RVec& p, double budget, double tol) {
    require_dims(B.cols() == p.size(), "stationarity: p must have one entry per column");
    if ((p.array() < -tol).any() || p.sum() > budget * (1.0 + tol) + tol)
        throw InfeasibleError("stationarity: power vector is infeasible");
    RVec inv = RVec::Zero(p.size());
    for (Index i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) inv(i) = 1.0 / p(i);
    CMat Y = B * diag_sqrt(inv);
    if (spectral_norm(Y) > 1.0 + 1e-6) throw InfeasibleError("stationarity: W^H W exceeds diag(p)");
    return Y;
}

} // namespace detail

/// Reduced problem in (X, p): converted through Y = Hhat X diag(p^dagger)^{1/2}.
inline StationarityReport stationarity_residual(const CMat& X, const RVec& p, const ReducedChannel& rc,
                                                double noise, double budget, double tol = 1e-9) {
    const CMat Y = detail::split_from_beamformer(rc.Hhat * X, p, budget, tol);
    return split_stationarity(rc.Hhat, Y, p, noise, budget);
}

/// Full-dimension problem in (W, p): Y = W diag(p^dagger)^{1/2}, channel H.
inline StationarityReport stationarity_residual_fulldim(const CMat& W, const RVec& p, const CMat& H,
                                                        double noise, double budget, double tol = 1e-9) {
    const CMat Y = detail::split_from_beamformer(W, p, budget, tol);
    return split_stationarity(H, Y, p, noise, budget);
}

/// Digital problem ||W||_F^2 <= budget in reduced coordinates Z (W = H^H Hbar^{-1/2} Z).
inline StationarityReport digital_stationarity(const CMat& Hhat, const CMat& Z, double noise, double budget,
                                               double step = kStationarityStep) {
    const CMat dZ = 2.0 * Hhat.adjoint() * rate_gradient_gains(Hhat * Z, noise);
    StationarityReport r;
    r.gradient_norm = dZ.norm();
    if (r.gradient_norm == 0.0) return r;
    const double eta = step * std::max(1.0, budget) / r.gradient_norm;
    CMat Zn = Z + eta * dZ;
    const double radius = std::sqrt(budget);
    if (Zn.norm() > radius) Zn *= radius / Zn.norm();
    r.residual = (Z - Zn).norm() / eta;
    return r;
}

} // namespace milac

#endif // MILAC_STATIONARITY_HPP
