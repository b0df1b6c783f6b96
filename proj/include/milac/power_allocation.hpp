// SPDX-License-Identifier: Apache-2.0

#ifndef MILAC_POWER_ALLOCATION_HPP
#define MILAC_POWER_ALLOCATION_HPP

#include "milac/linalg.hpp"

#include <limits>

namespace milac {

struct PowerAllocation {
    RVec p;
    double lambda = 0.0;
};

/// Maximises sum_k (2 alpha_k sqrt(p_k) - beta_k p_k) subject to
/// 1^T p <= budget, p >= 0. Stationarity gives p_k = alpha_k^2/(beta_k+lambda)^2;
/// lambda = 0 when that is already feasible, otherwise the multiplier is found
/// by bisection on sum_k alpha_k^2/(beta_k+lambda)^2 = budget. Users with
/// alpha_k <= 0 receive no power.
inline PowerAllocation allocate_power(const RVec& alpha, const RVec& beta, double budget) {
    require_dims(alpha.size() == beta.size(), "allocate_power: alpha and beta sizes differ");
    if (!(budget > 0.0)) throw ValidationError("allocate_power: budget must be positive");
    const Index K = alpha.size();
    const RVec a = alpha.cwiseMax(0.0);
    PowerAllocation out{RVec::Zero(K), 0.0};
    if (a.maxCoeff() == 0.0) return out;

    auto total_at = [&](double lambda) {
        double s = 0.0;
        for (Index k = 0; k < K; ++k) {
            if (a(k) == 0.0) continue;
            const double d = beta(k) + lambda;
            if (d <= 0.0) return std::numeric_limits<double>::infinity();
            s += (a(k) / d) * (a(k) / d);
        }
        return s;
    };
    auto fill = [&](double lambda) {
        for (Index k = 0; k < K; ++k) {
            const double d = beta(k) + lambda;
            out.p(k) = a(k) == 0.0 ? 0.0 : (a(k) / d) * (a(k) / d);
        }
        out.lambda = lambda;
    };

    if (total_at(0.0) <= budget) {
        fill(0.0);
        return out;
    }

    // total_at(hi) <= sum a^2 / hi^2 = budget.
    double lo = 0.0;
    double hi = std::sqrt(a.squaredNorm() / budget);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (total_at(mid) > budget)
            lo = mid;
        else
            hi = mid;
    }
    fill(hi);
    return out;
}

} // namespace milac

#endif // MILAC_POWER_ALLOCATION_HPP
