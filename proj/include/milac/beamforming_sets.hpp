// SPDX-License-Identifier: Apache-2.0
//
// Membership tests and constructions for the beamforming-matrix sets:
//
//   MiLAC    { W = F diag(p)^{1/2} : ||F||_2 <= 1, 1^T p <= P_T }
//            = { W : W^H W <= diag(p), 1^T p <= P_T }      (convex form)
//   digital  { W : ||W||_F^2 <= P_T }
//   phase shifters  |[W_A]_{ij}| = 1 / sqrt(NK)
//   hybrid digital-MiLAC  W = F P,  ||F||_2 <= 1, ||P||_F^2 <= P_T

#ifndef MILAC_BEAMFORMING_SETS_HPP
#define MILAC_BEAMFORMING_SETS_HPP

#include "milac/linalg.hpp"
#include "milac/random.hpp"
#include "milac/simplex.hpp"

#include <sstream>

namespace milac {

struct MilacBeamformer {
    CMat F;
    RVec p;
    double budget = 0.0;

    CMat W() const { return F * diag_sqrt(p); }
};

struct DigitalBeamformer {
    CMat W;
    double budget = 0.0;
};

struct PhaseShifterMatrix {
    RMat phases;
    CMat W;
};

struct HybridDecomposition {
    CMat F;  // N x K, semi-unitary
    CMat P;  // K x K digital stage
};

inline constexpr double kMembershipTol = 1e-9;

/// Fixed-power membership: lambda_min(diag(p) - W^H W) >= -tol * ||W||_2^2.
inline bool milac_membership_with_power(const CMat& W, const RVec& p, double tol = kMembershipTol) {
    require_dims(W.cols() == p.size(), "milac_membership_with_power: p must have one entry per column");
    if ((p.array() < 0.0).any()) return false;
    const CMat gram = W.adjoint() * W;
    CMat slack = -gram;
    slack.diagonal() += p.cast<cplx>();
    const double scale = std::max(spectral_norm(W) * spectral_norm(W), 1e-300);
    return min_eigenvalue(slack) >= -tol * scale;
}

struct EnvelopeOptions {
    double tol = 1e-9;  // relative to ||W||_2^2
    int max_cuts = 500;
};

/// Outcome of the cutting-plane search for the least total power p with
/// diag(p) >= W^H W. `total` is the LP value (a certified lower bound on the
/// optimum); p + (-min_eig)^+ 1 is a certified feasible point.
struct PowerEnvelope {
    RVec p;
    double total = 0.0;
    double min_eig = 0.0;
    int cuts = 0;
    bool converged = false;

    double feasible_upper_bound() const {
        return total + static_cast<double>(p.size()) * std::max(0.0, -min_eig);
    }
};

inline PowerEnvelope min_power_envelope(const CMat& W, const EnvelopeOptions& opt = {}) {
    const Index K = W.cols();
    require_dims(K >= 1 && K <= 64, "min_power_envelope: need 1 <= K <= 64");
    const CMat gram = hermitian_part(W.adjoint() * W);
    const double scale = std::max(spectral_norm(W) * spectral_norm(W), 1e-300);

    // Cut c: sum_i p_i |v_i|^2 >= v^H gram v. Start from the diagonal cuts.
    RMat cuts = RMat::Zero(K, K + opt.max_cuts);
    RVec rhs = RVec::Zero(K + opt.max_cuts);
    Index used = 0;
    for (Index i = 0; i < K; ++i) {
        cuts(i, used) = 1.0;
        rhs(used) = gram(i, i).real();
        ++used;
    }

    PowerEnvelope out;
    for (;;) {
        const PackingLpSolution lp = maximize_packing(cuts.leftCols(used), rhs.head(used));
        out.p = lp.prices;
        out.total = out.p.sum();
        CMat slack = -gram;
        slack.diagonal() += out.p.cast<cplx>();
        const MinEigenpair ev = min_eigenpair(slack);
        out.min_eig = ev.value;
        out.cuts = static_cast<int>(used);
        if (ev.value >= -opt.tol * scale) {
            out.converged = true;
            return out;
        }
        if (used - K >= opt.max_cuts) break;
        cuts.col(used) = ev.vector.cwiseAbs2();
        rhs(used) = (ev.vector.adjoint() * gram * ev.vector)(0, 0).real();
        ++used;
    }
    std::ostringstream msg;
    msg << "min_power_envelope: no convergence after " << opt.max_cuts
        << " cuts (lower bound " << out.total << ", feasible bound " << out.feasible_upper_bound() << ")";
    throw ConvergenceError(msg.str());
}

/// Budget membership in the MiLAC set, certified by the power envelope.
inline bool milac_member(const CMat& W, double budget, const EnvelopeOptions& opt = {}) {
    const PowerEnvelope env = min_power_envelope(W, opt);
    return env.total <= budget * (1.0 + opt.tol) + opt.tol;
}

/// F = W diag(p^dagger)^{1/2}; columns with p_i = 0 map to zero.
inline MilacBeamformer decompose_milac(const CMat& W, const RVec& p, double tol = kMembershipTol) {
    if (!milac_membership_with_power(W, p, tol))
        throw InfeasibleError("decompose_milac: W^H W is not dominated by diag(p)");
    RVec inv = RVec::Zero(p.size());
    for (Index i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) inv(i) = 1.0 / p(i);
    return {W * diag_sqrt(inv), p, p.sum()};
}

inline PhaseShifterMatrix phase_shifter_matrix(const RMat& phases) {
    const Index N = phases.rows();
    const Index K = phases.cols();
    require_dims(N > 0 && K > 0, "phase_shifter_matrix: empty phase matrix");
    const double amp = 1.0 / std::sqrt(static_cast<double>(N * K));
    CMat W(N, K);
    for (Index i = 0; i < N; ++i)
        for (Index j = 0; j < K; ++j) W(i, j) = std::polar(amp, phases(i, j));
    // ||W_A||_2 <= ||W_A||_F = 1 places W_A inside the MiLAC response set.
    if (spectral_norm(W) > 1.0 + 1e-12)
        throw InfeasibleError("phase_shifter_matrix: spectral norm above one");
    return {phases, std::move(W)};
}

/// W = U D V^H  ->  F = U(:, 1:K),  P = D(1:K, :) V^H.
inline HybridDecomposition hybrid_digital_milac_decompose(const DigitalBeamformer& digital,
                                                          double tol = 1e-9) {
    const CMat& W = digital.W;
    const Index N = W.rows();
    const Index K = W.cols();
    if (N < K) throw DimensionError("hybrid_digital_milac_decompose: requires N >= K");
    if (W.squaredNorm() > digital.budget * (1.0 + tol) + tol)
        throw InfeasibleError("hybrid_digital_milac_decompose: ||W||_F^2 exceeds the budget");
    if (W.squaredNorm() == 0.0) return {CMat::Identity(N, K), CMat::Zero(K, K)};

    const Svd d = svd(W);
    return {d.U, d.s.cast<cplx>().asDiagonal() * d.V.adjoint()};
}

/// Random full-power boundary point of the MiLAC set: ||F||_2 = 1 and
/// sum(p) = budget.
inline MilacBeamformer sample_milac_boundary(Index N, Index K, double budget, Philox& rng) {
    require_dims(N >= K && K >= 1, "sample_milac_boundary: requires N >= K >= 1");
    CMat G(N, K);
    for (Index j = 0; j < K; ++j)
        for (Index i = 0; i < N; ++i) G(i, j) = rng.complex_normal();
    const CMat F = G / spectral_norm(G);

    RVec p(K);
    for (Index k = 0; k < K; ++k) p(k) = -std::log(1.0 - rng.uniform());
    p *= budget / p.sum();
    return {F, p, budget};
}

} // namespace milac

#endif // MILAC_BEAMFORMING_SETS_HPP
