// SPDX-License-Identifier: Apache-2.0
//
// Ground-truth references for tiny instances: closed forms for one user and
// for orthogonal users, and an exhaustive grid search over the reduced
// MiLAC-feasible set for K <= 2.

#ifndef MILAC_ORACLE_HPP
#define MILAC_ORACLE_HPP

#include "milac/linalg.hpp"
#include "milac/rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace milac {

/// Single user: full power on the matched beam.
inline double single_user_optimum(const CVec& h, double budget, double noise) {
    return std::log2(1.0 + budget * h.squaredNorm() / noise);
}

struct WaterFilling {
    RVec p;
    double level = 0.0;
    double rate = 0.0;
};

/// Parallel channels with gains g_k: p_k = max(0, mu - noise / g_k), sum p = budget.
inline WaterFilling water_filling(const RVec& gains, double budget, double noise) {
    if (!(budget > 0.0) || !(noise > 0.0)) throw ValidationError("water_filling: budget and noise must be positive");
    const Index K = gains.size();
    std::vector<double> floors;
    for (Index k = 0; k < K; ++k)
        if (gains(k) > 0.0) floors.push_back(noise / gains(k));
    std::sort(floors.begin(), floors.end());
    double mu = 0.0;
    double cum = 0.0;
    for (std::size_t m = 0; m < floors.size(); ++m) {
        cum += floors[m];
        const double level = (budget + cum) / static_cast<double>(m + 1);
        if (m + 1 == floors.size() || level <= floors[m + 1]) {
            mu = level;
            break;
        }
    }
    WaterFilling wf{RVec::Zero(K), mu, 0.0};
    for (Index k = 0; k < K; ++k) {
        if (gains(k) <= 0.0) continue;
        wf.p(k) = std::max(0.0, mu - noise / gains(k));
        wf.rate += std::log2(1.0 + wf.p(k) * gains(k) / noise);
    }
    return wf;
}

struct OracleGrid {
    int angle_steps = 8;     // per phase / rotation angle
    int singular_steps = 5;  // per singular value on [0, 1]
    int power_steps = 9;     // splits of the budget
    int refine_starts = 6;   // best grid points polished by pattern search
    double refine_tol = 1e-7;
};

struct OracleResult {
    double rate = 0.0;
    CMat Y;
    RVec p;
    long evaluations = 0;
};

namespace detail {

// Reduced K = 2 point: Y = U diag(s) R(phi)^T with U = [[a, -conj(b)], [b, conj(a)]],
// a = cos(t) e^{j alpha}, b = sin(t) e^{j beta}, p = budget (x, 1 - x).
// Column phases of Y and a global phase do not change the rate, so these
// seven coordinates cover the feasible set up to rate-preserving symmetries.
struct Oracle2Point {
    std::array<double, 7> x{};  // t, alpha, beta, phi, s1, s2, split
};

inline CMat oracle2_y(const Oracle2Point& q) {
    const double t = q.x[0];
    const cplx a = std::polar(std::cos(t), q.x[1]);
    const cplx b = std::polar(std::sin(t), q.x[2]);
    CMat U(2, 2);
    U << a, -std::conj(b), b, std::conj(a);
    CMat S = CMat::Zero(2, 2);
    S(0, 0) = q.x[4];
    S(1, 1) = q.x[5];
    const double c = std::cos(q.x[3]);
    const double s = std::sin(q.x[3]);
    CMat Rt(2, 2);
    Rt << c, s, -s, c;
    return U * S * Rt;
}

inline RVec oracle2_p(const Oracle2Point& q, double budget) {
    RVec p(2);
    p << budget * q.x[6], budget * (1.0 - q.x[6]);
    return p;
}

inline void clamp_oracle2(Oracle2Point& q) {
    for (int i = 4; i < 7; ++i) q.x[static_cast<std::size_t>(i)] = std::clamp(q.x[static_cast<std::size_t>(i)], 0.0, 1.0);
}

} // namespace detail

/// Best sum rate over the reduced feasible set by grid search plus local
/// polishing. Requires K <= 2 and a full-row-rank channel.
inline OracleResult brute_force_oracle(const CMat& H, double budget, double noise, const OracleGrid& grid = {}) {
    if (H.rows() > 2) throw DimensionError("brute_force_oracle: only K <= 2 is tractable");
    if (!(budget > 0.0) || !(noise > 0.0)) throw ValidationError("brute_force_oracle: budget and noise must be positive");
    const ReducedChannel rc = reduce_dimension(H);
    OracleResult best;

    if (H.rows() == 1) {
        const double g = std::norm(rc.Hhat(0, 0));
        const int steps = std::max(2, grid.singular_steps * grid.power_steps);
        for (int i = 0; i <= steps; ++i) {
            const double y = static_cast<double>(i) / steps;
            for (int j = 0; j <= steps; ++j) {
                const double p = budget * static_cast<double>(j) / steps;
                const double r = std::log2(1.0 + g * y * y * p / noise);
                ++best.evaluations;
                if (r > best.rate) {
                    best.rate = r;
                    best.Y = CMat::Constant(1, 1, y);
                    best.p = RVec::Constant(1, p);
                }
            }
        }
        if (best.Y.size() == 0) {
            best.Y = CMat::Zero(1, 1);
            best.p = RVec::Zero(1);
        }
        return best;
    }

    using detail::Oracle2Point;
    auto rate_of = [&](const Oracle2Point& q) {
        ++best.evaluations;
        return split_sum_rate(rc.Hhat, detail::oracle2_y(q), detail::oracle2_p(q, budget), noise);
    };

    const double half_pi = 0.5 * std::numbers::pi;
    const double two_pi = 2.0 * std::numbers::pi;
    const int na = std::max(1, grid.angle_steps);
    const int ns = std::max(1, grid.singular_steps);
    const int np = std::max(1, grid.power_steps);
    auto frac = [](int i, int n) { return n == 1 ? 1.0 : static_cast<double>(i) / (n - 1); };

    struct Scored {
        double rate;
        Oracle2Point q;
    };
    std::vector<Scored> top;
    const std::size_t keep = static_cast<std::size_t>(std::max(1, grid.refine_starts));
    auto offer = [&](const Oracle2Point& q, double r) {
        if (top.size() < keep || r > top.back().rate) {
            top.push_back({r, q});
            std::sort(top.begin(), top.end(), [](const Scored& l, const Scored& rr) { return l.rate > rr.rate; });
            if (top.size() > keep) top.pop_back();
        }
    };

    Oracle2Point q;
    for (int it = 0; it < na; ++it) {
        q.x[0] = half_pi * frac(it, na);
        for (int ia = 0; ia < na; ++ia) {
            q.x[1] = two_pi * ia / na;
            for (int ib = 0; ib < na; ++ib) {
                q.x[2] = two_pi * ib / na;
                for (int ip = 0; ip < na; ++ip) {
                    q.x[3] = std::numbers::pi * ip / na;
                    for (int s1 = 0; s1 < ns; ++s1) {
                        q.x[4] = frac(s1, ns);
                        for (int s2 = 0; s2 < ns; ++s2) {
                            q.x[5] = frac(s2, ns);
                            for (int k = 0; k < np; ++k) {
                                q.x[6] = frac(k, np);
                                offer(q, rate_of(q));
                            }
                        }
                    }
                }
            }
        }
    }

    // Compass search from the best grid points.
    const std::array<double, 7> scale{half_pi / na, two_pi / na, two_pi / na, std::numbers::pi / na,
                                      1.0 / ns, 1.0 / ns, 1.0 / np};
    Scored winner = top.front();
    for (Scored s : top) {
        double step = 1.0;
        while (step * scale[4] > grid.refine_tol) {
            bool improved = false;
            for (std::size_t d = 0; d < 7; ++d) {
                for (double sign : {1.0, -1.0}) {
                    Oracle2Point c = s.q;
                    c.x[d] += sign * step * scale[d];
                    detail::clamp_oracle2(c);
                    const double r = rate_of(c);
                    if (r > s.rate) {
                        s = {r, c};
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (s.rate > winner.rate) winner = s;
    }

    best.rate = winner.rate;
    best.Y = detail::oracle2_y(winner.q);
    best.p = detail::oracle2_p(winner.q, budget);
    return best;
}

} // namespace milac

#endif // MILAC_ORACLE_HPP
