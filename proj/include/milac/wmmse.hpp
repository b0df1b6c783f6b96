// SPDX-License-Identifier: Apache-2.0
//
// WMMSE block-coordinate solvers for MU-MISO sum-rate maximisation.
//
// The MiLAC solvers use the split form W ~ Y diag(p)^{1/2} with
// ||Y||_2 <= 1 and 1^T p <= P_T, and cycle through four blocks:
//
//   u  receiver scalars   (closed form)
//   w  MSE weights        (closed form, w_k = 1 + SINR_k)
//   p  powers             (KKT + multiplier bisection)
//   Y  spectral-ball block (projected gradient, step 1/Lipschitz)
//
// The same engine runs against the reduced K x K channel Hhat = (H H^H)^{1/2}
// (wmmse_lc) or against H itself (wmmse_lc_fulldim). The digital baseline
// replaces the (Y, p) blocks by one regularised least-squares update under
// the Frobenius budget.
//
// Noise is the normalised sigma^2 = 4 sigma_n^2.

#ifndef MILAC_WMMSE_HPP
#define MILAC_WMMSE_HPP

#include "milac/beamforming_sets.hpp"
#include "milac/linalg.hpp"
#include "milac/power_allocation.hpp"
#include "milac/rates.hpp"
#include "milac/stationarity.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace milac {

struct SolverConfig {
    double eps_out = 1e-6;
    double eps_in = 1e-6;
    int max_outer = 500;
    int max_inner = 2000;
    double noise = 1.0;   // sigma^2 = 4 sigma_n^2
    double budget = 1.0;  // P_T
};

/// sigma^2 = 4 sigma_n^2 with sigma_n^2 = P_T / SNR.
inline double normalized_noise(double snr_db, double budget) {
    return 4.0 * budget / std::pow(10.0, snr_db / 10.0);
}

struct WmmseState {
    CVec u;
    RVec omega;
    CMat Y;
    RVec p;
    std::vector<double> surrogate;  // sum_k log2(omega_k), one per outer iteration
};

struct BlockDiagnostics {
    int block_updates = 0;
    int violations = 0;        // weighted-MSE objective increased across a block update
    int inner_steps = 0;
    int inner_violations = 0;  // PGD objective increased across an inner step
    double worst_increase = 0.0;
};

struct SumRateResult {
    double rate = 0.0;
    CMat W;
    RVec p;
    int iterations = 0;
    bool converged = false;
    StationarityReport stationarity;
    WmmseState state;
    BlockDiagnostics diagnostics;
};

using IterateObserver = std::function<void(const WmmseState&)>;

/// Optional starting point (Y, p) for the split solvers.
struct SplitInit {
    CMat Y;
    RVec p;
};

// ---------------------------------------------------------------------------
// Block updates. `channel` is C (K x M): Hhat for the reduced problem, H for
// the full-dimension one. Gains are A = C Y diag(p)^{1/2}.

inline CMat split_gains(const CMat& channel, const CMat& Y, const RVec& p) {
    return channel * Y * diag_sqrt(p);
}

inline CVec update_u(const WmmseState& s, const CMat& channel, double noise) {
    const CMat A = split_gains(channel, s.Y, s.p);
    CVec u(A.rows());
    for (Index k = 0; k < A.rows(); ++k) u(k) = A(k, k) / (A.row(k).squaredNorm() + noise);
    return u;
}

/// omega_k = (1 - conj(u_k) A_kk)^{-1}; requires u freshly updated so the
/// denominator is the minimum MSE in (0, 1].
inline RVec update_omega(const WmmseState& s, const CMat& channel, double noise) {
    const CMat A = split_gains(channel, s.Y, s.p);
    RVec omega(A.rows());
    for (Index k = 0; k < A.rows(); ++k) {
        const cplx d = 1.0 - std::conj(s.u(k)) * A(k, k);
        if (!(d.real() > 0.0) || std::abs(d.imag()) > 1e-9)
            throw ContractError("update_omega: MSE denominator not in (0, 1]; u is stale");
        if (d.real() < 1e-14) {
            const double total = A.row(k).squaredNorm() + noise;
            omega(k) = 1.0 + std::norm(A(k, k)) / (total - std::norm(A(k, k)));
        } else {
            omega(k) = 1.0 / d.real();
        }
    }
    return omega;
}

inline double weighted_mse_objective(const WmmseState& s, const CMat& channel, double noise) {
    const CMat A = split_gains(channel, s.Y, s.p);
    double obj = 0.0;
    for (Index k = 0; k < A.rows(); ++k) {
        const double cross = A.row(k).squaredNorm() - std::norm(A(k, k));
        const double e = std::norm(1.0 - std::conj(s.u(k)) * A(k, k)) + std::norm(s.u(k)) * (cross + noise);
        obj += s.omega(k) * e - std::log(s.omega(k));
    }
    return obj;
}

/// alpha_k = w_k Re(conj(u_k) c_k^H y_k), beta_k = sum_j w_j |u_j|^2 |c_j^H y_k|^2.
inline PowerAllocation update_p(const WmmseState& s, const CMat& channel, double budget) {
    const CMat a = channel * s.Y;
    const Index K = a.rows();
    RVec alpha(K);
    RVec beta = RVec::Zero(K);
    for (Index k = 0; k < K; ++k) {
        alpha(k) = s.omega(k) * (std::conj(s.u(k)) * a(k, k)).real();
        for (Index j = 0; j < K; ++j) beta(k) += s.omega(j) * std::norm(s.u(j)) * std::norm(a(j, k));
    }
    return allocate_power(alpha, beta, budget);
}

struct YSubproblem {
    CMat Q;  // C^H diag(w |u|^2) C
    CMat L;  // diag(w conj(u)) C
};

inline YSubproblem y_subproblem_terms(const WmmseState& s, const CMat& channel) {
    const RVec d = s.omega.cwiseProduct(s.u.cwiseAbs2());
    const CVec l = s.omega.cast<cplx>().cwiseProduct(s.u.conjugate());
    YSubproblem t;
    t.Q = hermitian_part(channel.adjoint() * d.cast<cplx>().asDiagonal() * channel);
    t.L = l.asDiagonal() * channel;
    return t;
}

/// tr(diag(p) Y^H Q Y) - 2 Re tr(diag(p)^{1/2} L Y).
inline double y_objective(const CMat& Y, const CMat& Q, const CMat& L, const RVec& p) {
    const CMat P = p.cast<cplx>().asDiagonal();
    return (P * Y.adjoint() * Q * Y).trace().real() - 2.0 * (diag_sqrt(p) * L * Y).trace().real();
}

/// G = Q Y diag(p) - L^H diag(p)^{1/2}; the real gradient of y_objective is 2G.
inline CMat y_gradient(const CMat& Y, const CMat& Q, const CMat& L, const RVec& p) {
    return Q * Y * p.cast<cplx>().asDiagonal() - L.adjoint() * diag_sqrt(p);
}

struct PgdReport {
    CMat Y;
    int iterations = 0;
    int violations = 0;
    bool converged = false;
};

inline double largest_eigenvalue(const CMat& hermitian) {
    if (hermitian.size() == 0) return 0.0;
    const RVec ev = Eigen::SelfAdjointEigenSolver<CMat>(hermitian, Eigen::EigenvaluesOnly).eigenvalues();
    return std::max(0.0, ev(ev.size() - 1));
}

/// Projected gradient descent on the spectral-norm ball with step
/// (||Q||_2 max_k p_k)^{-1}.
inline PgdReport y_subproblem_pgd(const CMat& Y0, const CMat& Q, const CMat& L, const RVec& p,
                                  const SolverConfig& cfg) {
    PgdReport r{Y0};
    const double pmax = p.size() ? p.maxCoeff() : 0.0;
    if (pmax <= 0.0) {
        r.converged = true;
        return r;
    }
    const double qnorm = largest_eigenvalue(Q);
    if (qnorm <= 0.0) {
        // Linear objective: minimiser over the ball is the polar factor of
        // the descent direction.
        const CMat dir = L.adjoint() * diag_sqrt(p);
        if (dir.norm() > 0.0) {
            const Svd d = svd(dir);
            const double smax = d.s(0);
            CMat Y = CMat::Zero(dir.rows(), dir.cols());
            for (Index i = 0; i < d.s.size(); ++i)
                if (d.s(i) > 1e-12 * smax) Y += d.U.col(i) * d.V.col(i).adjoint();
            r.Y = Y;
        }
        r.converged = true;
        return r;
    }
    const double eta = 1.0 / (qnorm * pmax);
    double f = y_objective(r.Y, Q, L, p);
    for (int t = 0; t < cfg.max_inner; ++t) {
        const CMat prev = r.Y;
        r.Y = spectral_ball_projection(prev - eta * y_gradient(prev, Q, L, p));
        ++r.iterations;
        const double fn = y_objective(r.Y, Q, L, p);
        if (fn > f + 1e-12 * std::max(1.0, std::abs(f))) ++r.violations;
        f = fn;
        const double base = r.Y.norm();
        const double change = (r.Y - prev).norm();
        if (base > 0.0 ? change <= cfg.eps_in * base : change <= cfg.eps_in) {
            r.converged = true;
            break;
        }
    }
    return r;
}

namespace detail {

struct SplitRun {
    WmmseState state;
    int iterations = 0;
    bool converged = false;
    BlockDiagnostics diag;
};

class MonotonicityTracker {
public:
    explicit MonotonicityTracker(BlockDiagnostics& d) : d_(d) {}

    void record(double value) {
        ++d_.block_updates;
        if (has_last_) {
            const double increase = value - last_;
            if (increase > 1e-10 * std::max(1.0, std::abs(last_))) {
                ++d_.violations;
            }
            d_.worst_increase = std::max(d_.worst_increase, increase);
        }
        last_ = value;
        has_last_ = true;
    }

private:
    BlockDiagnostics& d_;
    double last_ = 0.0;
    bool has_last_ = false;
};

inline double log2_sum(const RVec& omega) { return omega.array().log().sum() / std::numbers::ln2; }

inline bool relative_change_below(double now, double before, double eps) {
    const double scale = std::abs(before);
    return scale > 0.0 ? std::abs(now - before) <= eps * scale : std::abs(now - before) <= eps;
}

inline SplitRun run_split_bcd(const CMat& channel, const CMat& Y0, const SolverConfig& cfg,
                              const IterateObserver& observer, const std::optional<SplitInit>& init) {
    if (!(cfg.noise > 0.0) || !(cfg.budget > 0.0)) throw ValidationError("solver: noise and budget must be positive");
    if (!(cfg.eps_out > 0.0) || !(cfg.eps_in > 0.0)) throw ValidationError("solver: tolerances must be positive");
    const Index K = channel.rows();
    SplitRun run;
    WmmseState& s = run.state;
    s.Y = Y0;
    s.p = RVec::Constant(K, cfg.budget / static_cast<double>(K));
    if (init) {
        require_dims(init->Y.rows() == Y0.rows() && init->Y.cols() == K && init->p.size() == K,
                     "solver: warm start has the wrong shape");
        s.Y = spectral_ball_projection(init->Y);
        s.p = project_capped_simplex(init->p, cfg.budget);
    }
    s.omega = RVec::Ones(K);
    s.u = update_u(s, channel, cfg.noise);
    s.omega = update_omega(s, channel, cfg.noise);
    s.surrogate.push_back(log2_sum(s.omega));

    MonotonicityTracker track(run.diag);
    track.record(weighted_mse_objective(s, channel, cfg.noise));

    for (int it = 0; it < cfg.max_outer; ++it) {
        s.p = update_p(s, channel, cfg.budget).p;
        track.record(weighted_mse_objective(s, channel, cfg.noise));

        const YSubproblem terms = y_subproblem_terms(s, channel);
        const PgdReport pgd = y_subproblem_pgd(s.Y, terms.Q, terms.L, s.p, cfg);
        s.Y = pgd.Y;
        run.diag.inner_steps += pgd.iterations;
        run.diag.inner_violations += pgd.violations;
        track.record(weighted_mse_objective(s, channel, cfg.noise));

        s.u = update_u(s, channel, cfg.noise);
        track.record(weighted_mse_objective(s, channel, cfg.noise));
        s.omega = update_omega(s, channel, cfg.noise);
        track.record(weighted_mse_objective(s, channel, cfg.noise));

        const double before = s.surrogate.back();
        s.surrogate.push_back(log2_sum(s.omega));
        ++run.iterations;
        if (observer) observer(s);
        if (relative_change_below(s.surrogate.back(), before, cfg.eps_out)) {
            run.converged = true;
            break;
        }
    }
    return run;
}

} // namespace detail

inline SumRateResult wmmse_lc(const ReducedChannel& rc, const SolverConfig& cfg,
                              const IterateObserver& observer = {},
                              const std::optional<SplitInit>& init = std::nullopt) {
    const CMat Y0 = rc.Hhat / spectral_norm(rc.Hhat);
    detail::SplitRun run = detail::run_split_bcd(rc.Hhat, Y0, cfg, observer, init);
    SumRateResult r;
    r.p = run.state.p;
    r.W = rc.H.adjoint() * rc.Hbar_inv_sqrt * run.state.Y * diag_sqrt(run.state.p);
    r.rate = sum_rate(rc.H, r.W, cfg.noise);
    r.iterations = run.iterations;
    r.converged = run.converged;
    r.stationarity = split_stationarity(rc.Hhat, run.state.Y, run.state.p, cfg.noise, cfg.budget);
    r.state = std::move(run.state);
    r.diagnostics = run.diag;
    return r;
}

/// Low-complexity WMMSE on the reduced problem; W = H^H Hbar^{-1/2} Y diag(p)^{1/2}.
inline SumRateResult wmmse_lc(const CMat& H, const SolverConfig& cfg, const IterateObserver& observer = {},
                              const std::optional<SplitInit>& init = std::nullopt) {
    return wmmse_lc(reduce_dimension(H), cfg, observer, init);
}

/// Same block scheme with an N x K spectral-ball variable against H directly.
inline SumRateResult wmmse_lc_fulldim(const CMat& H, const SolverConfig& cfg,
                                      const IterateObserver& observer = {},
                                      const std::optional<SplitInit>& init = std::nullopt) {
    require_dims(H.rows() >= 1 && H.cols() >= 1, "wmmse_lc_fulldim: empty channel");
    const double hn = spectral_norm(H);
    if (!(hn > 0.0)) throw InfeasibleError("wmmse_lc_fulldim: zero channel");
    const CMat Y0 = H.adjoint() / hn;
    detail::SplitRun run = detail::run_split_bcd(H, Y0, cfg, observer, init);
    SumRateResult r;
    r.p = run.state.p;
    r.W = run.state.Y * diag_sqrt(run.state.p);
    r.rate = sum_rate(H, r.W, cfg.noise);
    r.iterations = run.iterations;
    r.converged = run.converged;
    r.stationarity = split_stationarity(H, run.state.Y, run.state.p, cfg.noise, cfg.budget);
    r.state = std::move(run.state);
    r.diagnostics = run.diag;
    return r;
}

// ---------------------------------------------------------------------------
// Digital baseline, ||W||_F^2 <= P_T. Runs on Z = Hbar^{1/2} X (K x K) with
// W = H^H Hbar^{-1/2} Z, so ||W||_F = ||Z||_F and the gains are Hhat Z.

struct DigitalUpdate {
    CMat Z;
    double mu = 0.0;
};

/// argmin tr(Z^H Q Z) - 2 Re tr(B^H Z) s.t. ||Z||_F^2 <= budget, i.e.
/// Z = (Q + mu I)^{-1} B with mu >= 0 from bisection on the budget.
inline DigitalUpdate digital_z_update(const CMat& Q, const CMat& B, double budget) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(Q));
    const RVec lam = es.eigenvalues().cwiseMax(0.0);
    const CMat C = es.eigenvectors().adjoint() * B;
    const RVec rows = C.rowwise().squaredNorm();
    const Index K = lam.size();

    auto power = [&](double mu) {
        double s = 0.0;
        for (Index i = 0; i < K; ++i) {
            if (rows(i) == 0.0) continue;
            const double d = lam(i) + mu;
            if (d <= 0.0) return std::numeric_limits<double>::infinity();
            s += rows(i) / (d * d);
        }
        return s;
    };
    auto solve = [&](double mu) {
        RVec inv(K);
        for (Index i = 0; i < K; ++i) inv(i) = rows(i) == 0.0 ? 0.0 : 1.0 / (lam(i) + mu);
        return CMat(es.eigenvectors() * inv.cast<cplx>().asDiagonal() * C);
    };

    const double lmax = lam.size() ? lam.maxCoeff() : 0.0;
    const bool invertible = lam.size() && lam.minCoeff() > 1e-12 * std::max(lmax, 1e-300);
    if (invertible && power(0.0) <= budget) return {solve(0.0), 0.0};

    double lo = 0.0;
    double hi = std::sqrt(rows.sum() / budget);
    if (hi == 0.0) return {CMat::Zero(B.rows(), B.cols()), 0.0};
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (power(mid) > budget)
            lo = mid;
        else
            hi = mid;
    }
    return {solve(hi), hi};
}

inline double digital_wmse_objective(const CMat& A, const CVec& u, const RVec& omega, double noise) {
    double obj = 0.0;
    for (Index k = 0; k < A.rows(); ++k) {
        const double cross = A.row(k).squaredNorm() - std::norm(A(k, k));
        const double e = std::norm(1.0 - std::conj(u(k)) * A(k, k)) + std::norm(u(k)) * (cross + noise);
        obj += omega(k) * e - std::log(omega(k));
    }
    return obj;
}

/// Classical WMMSE under the Frobenius budget. `warm_start`, when given, is
/// an N x K beamformer whose projection onto Ran(H^H) seeds the iteration.
inline SumRateResult digital_wmmse(const ReducedChannel& rc, const SolverConfig& cfg,
                                   const std::optional<CMat>& warm_start = std::nullopt) {
    if (!(cfg.noise > 0.0) || !(cfg.budget > 0.0)) throw ValidationError("solver: noise and budget must be positive");
    const Index K = rc.users();
    const CMat& Hhat = rc.Hhat;

    CMat Z;
    if (warm_start) {
        require_dims(warm_start->rows() == rc.antennas() && warm_start->cols() == K,
                     "digital_wmmse: warm start must be N x K");
        Z = rc.Hbar_inv_sqrt * rc.H * *warm_start;
        const double n2 = Z.squaredNorm();
        if (n2 > cfg.budget) Z *= std::sqrt(cfg.budget / n2);
    } else {
        Z = Hhat * std::sqrt(cfg.budget / static_cast<double>(K)) / spectral_norm(Hhat);
    }

    auto gains = [&](const CMat& z) { return CMat(Hhat * z); };
    auto u_of = [&](const CMat& A) {
        CVec u(K);
        for (Index k = 0; k < K; ++k) u(k) = A(k, k) / (A.row(k).squaredNorm() + cfg.noise);
        return u;
    };
    auto omega_of = [&](const CMat& A, const CVec& u) {
        RVec w(K);
        for (Index k = 0; k < K; ++k) {
            const double total = A.row(k).squaredNorm() + cfg.noise;
            const double d = 1.0 - (std::conj(u(k)) * A(k, k)).real();
            w(k) = d >= 1e-14 ? 1.0 / d : 1.0 + std::norm(A(k, k)) / (total - std::norm(A(k, k)));
        }
        return w;
    };

    SumRateResult r;
    WmmseState& s = r.state;
    CMat A = gains(Z);
    s.u = u_of(A);
    s.omega = omega_of(A, s.u);
    s.surrogate.push_back(detail::log2_sum(s.omega));
    detail::MonotonicityTracker track(r.diagnostics);
    track.record(digital_wmse_objective(A, s.u, s.omega, cfg.noise));

    for (int it = 0; it < cfg.max_outer; ++it) {
        const RVec d = s.omega.cwiseProduct(s.u.cwiseAbs2());
        const CMat Q = Hhat.adjoint() * d.cast<cplx>().asDiagonal() * Hhat;
        const CVec wu = s.omega.cast<cplx>().cwiseProduct(s.u);
        const CMat B = Hhat.adjoint() * wu.asDiagonal();
        Z = digital_z_update(Q, B, cfg.budget).Z;
        A = gains(Z);
        track.record(digital_wmse_objective(A, s.u, s.omega, cfg.noise));
        s.u = u_of(A);
        track.record(digital_wmse_objective(A, s.u, s.omega, cfg.noise));
        s.omega = omega_of(A, s.u);
        track.record(digital_wmse_objective(A, s.u, s.omega, cfg.noise));

        const double before = s.surrogate.back();
        s.surrogate.push_back(detail::log2_sum(s.omega));
        ++r.iterations;
        if (detail::relative_change_below(s.surrogate.back(), before, cfg.eps_out)) {
            r.converged = true;
            break;
        }
    }

    s.Y = Z;
    r.W = rc.H.adjoint() * rc.Hbar_inv_sqrt * Z;
    r.p = r.W.colwise().squaredNorm().transpose();
    s.p = r.p;
    r.rate = sum_rate(rc.H, r.W, cfg.noise);
    r.stationarity = digital_stationarity(Hhat, Z, cfg.noise, cfg.budget);
    return r;
}

inline SumRateResult digital_wmmse(const CMat& H, const SolverConfig& cfg,
                                   const std::optional<CMat>& warm_start = std::nullopt) {
    return digital_wmmse(reduce_dimension(H), cfg, warm_start);
}

} // namespace milac

#endif // MILAC_WMMSE_HPP
