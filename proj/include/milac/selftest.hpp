// SPDX-License-Identifier: Apache-2.0
//
// Built-in invariant checks, run by `milac_cli selftest`.

#ifndef MILAC_SELFTEST_HPP
#define MILAC_SELFTEST_HPP

#include "milac/beamforming_sets.hpp"
#include "milac/channels.hpp"
#include "milac/linalg.hpp"
#include "milac/network.hpp"
#include "milac/power_allocation.hpp"
#include "milac/random.hpp"
#include "milac/rates.hpp"
#include "milac/wmmse.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace milac {

struct SelfTestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

namespace selftest {

inline std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

/// Worst relative error between y_gradient and central differences of
/// y_objective, entry by entry in real and imaginary parts.
inline double gradient_fd_error(int instances, std::uint64_t seed) {
    double worst = 0.0;
    for (int t = 0; t < instances; ++t) {
        Philox rng(seed, static_cast<std::uint64_t>(t));
        const Index M = 2 + t % 5;
        const Index K = 1 + t % 4;
        const CMat C = complex_gaussian(K, M, rng);
        const CMat Q = C.adjoint() * C;
        const CMat L = complex_gaussian(K, M, rng);
        RVec p(K);
        for (Index k = 0; k < K; ++k) p(k) = 0.1 + rng.uniform();
        const CMat Y = complex_gaussian(M, K, rng);
        const CMat G = 2.0 * y_gradient(Y, Q, L, p);
        const double h = 1e-4;
        RVec fd(2 * M * K), an(2 * M * K);
        Index i = 0;
        for (Index r = 0; r < M; ++r)
            for (Index c = 0; c < K; ++c)
                for (cplx dir : {cplx(1, 0), kJ}) {
                    CMat Yp = Y, Ym = Y;
                    Yp(r, c) += h * dir;
                    Ym(r, c) -= h * dir;
                    fd(i) = (y_objective(Yp, Q, L, p) - y_objective(Ym, Q, L, p)) / (2.0 * h);
                    an(i) = (std::conj(G(r, c)) * dir).real();
                    ++i;
                }
        worst = std::max(worst, (fd - an).norm() / an.norm());
    }
    return worst;
}

/// Worst KKT residual of allocate_power: relative complementary slackness
/// |lambda (sum p - P)| / (P max(lambda, 1)), budget excess, and the
/// stationarity of every active user.
inline double bisection_kkt_residual(int instances, std::uint64_t seed) {
    double worst = 0.0;
    for (int t = 0; t < instances; ++t) {
        Philox rng(seed, static_cast<std::uint64_t>(t));
        const Index K = 1 + t % 6;
        RVec a(K), b(K);
        for (Index k = 0; k < K; ++k) {
            a(k) = 3.0 * rng.uniform();
            b(k) = 0.05 + 2.0 * rng.uniform();
        }
        const double P = 0.1 + 5.0 * rng.uniform();
        const PowerAllocation pa = allocate_power(a, b, P);
        const double slack = pa.lambda * (pa.p.sum() - P) / (P * std::max(pa.lambda, 1.0));
        const double excess = std::max(0.0, pa.p.sum() - P) / P;
        double stat = 0.0;
        for (Index k = 0; k < K; ++k)
            if (pa.p(k) > 0.0)
                stat = std::max(stat, std::abs(a(k) / std::sqrt(pa.p(k)) - b(k) - pa.lambda) / (b(k) + pa.lambda));
        if (pa.lambda < 0.0) stat = std::max(stat, -pa.lambda);
        worst = std::max({worst, std::abs(slack), excess, stat});
    }
    return worst;
}

/// Number of (input, candidate) pairs where a random feasible candidate is
/// strictly closer to the input than its projection.
inline long projection_losses(int inputs, int candidates, std::uint64_t seed) {
    long losses = 0;
    for (int t = 0; t < inputs; ++t) {
        Philox rng(seed, static_cast<std::uint64_t>(t));
        const Index r = 1 + t % 5;
        const Index c = 1 + (t / 5) % 4;
        const CMat M = complex_gaussian(r, c, rng) * (0.5 + 2.0 * rng.uniform());
        const CMat P = spectral_ball_projection(M);
        const double dp = (P - M).norm();
        for (int j = 0; j < candidates; ++j) {
            CMat Z;
            if (j % 2 == 0) {
                Z = complex_gaussian(r, c, rng);
                Z *= rng.uniform() / spectral_norm(Z);
            } else {
                Z = spectral_ball_projection(P + 0.05 * rng.uniform() * complex_gaussian(r, c, rng));
            }
            if ((Z - M).norm() < dp - 1e-12) ++losses;
        }
    }
    return losses;
}

/// Number of weighted-MSE or inner PGD objective increases.
inline int monotonicity_violations(int runs, std::uint64_t seed) {
    int violations = 0;
    const RngStreams streams(seed);
    for (int t = 0; t < runs; ++t) {
        const ChannelMatrix ch = rayleigh_channel(16, 3, streams, static_cast<std::uint32_t>(t));
        SolverConfig cfg;
        cfg.noise = normalized_noise(10.0, 1.0);
        const SumRateResult r = wmmse_lc(ch.H, cfg);
        violations += r.diagnostics.violations + r.diagnostics.inner_violations;
    }
    return violations;
}

inline double completion_defect(int instances, std::uint64_t seed) {
    double worst = 0.0;
    for (int t = 0; t < instances; ++t) {
        Philox rng(seed, static_cast<std::uint64_t>(t));
        const Index N = 1 + t % 12;
        const Index K = 1 + t % 5;
        CMat F = complex_gaussian(N, K, rng);
        F /= spectral_norm(F);
        if (t % 3 == 1) F *= rng.uniform();
        const ScatteringMatrix S = complete_scattering(MilacResponse{F});
        const auto rep = is_lossless_reciprocal(S, 1e-9);
        const double block = (S.theta.bottomLeftCorner(N, K) - F).norm();
        worst = std::max({worst, rep.symmetric_defect, rep.unitary_defect, block});
    }
    return worst;
}

} // namespace selftest

/// Runs the numerical-kernel checks; every check reports its own worst case.
inline std::vector<SelfTestCheck> run_selftest(std::uint64_t seed = 20240601) {
    std::vector<SelfTestCheck> out;
    auto timed = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        SelfTestCheck c{name};
        try {
            auto [ok, detail] = fn();
            c.passed = ok;
            c.detail = detail;
        } catch (const std::exception& e) {
            c.passed = false;
            c.detail = std::string("exception: ") + e.what();
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(c);
    };

    timed("gradient_finite_difference", [&] {
        const double e = selftest::gradient_fd_error(200, seed);
        return std::pair{e <= 1e-6, selftest::fmt("worst relative error %.3e (limit 1e-6)", e)};
    });
    timed("power_bisection_kkt", [&] {
        const double e = selftest::bisection_kkt_residual(1000, seed + 1);
        return std::pair{e <= 1e-9, selftest::fmt("worst KKT residual %.3e (limit 1e-9)", e)};
    });
    timed("spectral_projection_optimality", [&] {
        const long losses = selftest::projection_losses(100, 1000, seed + 2);
        return std::pair{losses == 0,
                         selftest::fmt("%.0f of 100000 candidates closer than the projection", double(losses))};
    });
    timed("wmse_monotonicity", [&] {
        const int v = selftest::monotonicity_violations(20, seed + 3);
        return std::pair{v == 0, selftest::fmt("%.0f objective increases over 20 runs", double(v))};
    });
    timed("scattering_completion", [&] {
        const double e = selftest::completion_defect(200, seed + 4);
        return std::pair{e <= 1e-9, selftest::fmt("worst symmetry/unitarity/block defect %.3e", e)};
    });
    return out;
}

} // namespace milac

#endif // MILAC_SELFTEST_HPP
