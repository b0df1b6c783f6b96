// SPDX-License-Identifier: Apache-2.0
//
// Dense tableau simplex for the small packing LPs generated by the
// cutting-plane power-envelope solver:
//
//     maximize   b^T y   subject to   C y <= 1,  y >= 0,
//
// with C >= 0 and b >= 0. The slack basis is feasible from the start, and
// the optimal dual prices of the K rows solve
//
//     minimize 1^T p   subject to   C^T p >= b,  p >= 0.

#ifndef MILAC_SIMPLEX_HPP
#define MILAC_SIMPLEX_HPP

#include "milac/linalg.hpp"

#include <limits>
#include <vector>

namespace milac {

struct PackingLpSolution {
    RVec y;       // primal (one weight per column of C)
    RVec prices;  // dual (one per row of C)
    double value = 0.0;
    int pivots = 0;
};

inline PackingLpSolution maximize_packing(const RMat& C, const RVec& b, double eps = 1e-12) {
    const Index rows = C.rows();
    const Index cols = C.cols();
    require_dims(b.size() == cols, "maximize_packing: b must have one entry per column");

    const Index width = cols + rows + 1;
    const Index rhs = width - 1;
    RMat T = RMat::Zero(rows + 1, width);
    T.topLeftCorner(rows, cols) = C;
    for (Index i = 0; i < rows; ++i) {
        T(i, cols + i) = 1.0;
        T(i, rhs) = 1.0;
    }
    T.row(rows).head(cols) = -b.transpose();

    std::vector<Index> basis(static_cast<std::size_t>(rows));
    for (Index i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = cols + i;

    // Dantzig pricing, falling back to Bland's rule if it stalls.
    const int bland_after = static_cast<int>(20 * (rows + cols) + 100);
    const int hard_cap = 50 * bland_after;
    const double bscale = std::max(1.0, b.cwiseAbs().maxCoeff());
    int pivots = 0;
    for (;;) {
        const bool bland = pivots > bland_after;
        Index enter = -1;
        double best = -eps * bscale;
        for (Index j = 0; j < rhs; ++j) {
            const double rc = T(rows, j);
            if (rc < best) {
                enter = j;
                if (bland) break;
                best = rc;
            }
        }
        if (enter < 0) break;

        Index leave = -1;
        double ratio = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < rows; ++i) {
            const double a = T(i, enter);
            if (a <= eps) continue;
            const double r = T(i, rhs) / a;
            if (r < ratio - 1e-15 ||
                (leave >= 0 && r <= ratio + 1e-15 &&
                 basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                ratio = std::min(ratio, r);
                leave = i;
            }
        }
        if (leave < 0) throw ConvergenceError("maximize_packing: LP is unbounded");

        T.row(leave) /= T(leave, enter);
        for (Index i = 0; i <= rows; ++i) {
            if (i == leave) continue;
            const double f = T(i, enter);
            if (f != 0.0) T.row(i) -= f * T.row(leave);
        }
        basis[static_cast<std::size_t>(leave)] = enter;
        if (++pivots > hard_cap) throw ConvergenceError("maximize_packing: pivot limit reached");
    }

    PackingLpSolution sol;
    sol.y = RVec::Zero(cols);
    for (Index i = 0; i < rows; ++i) {
        const Index v = basis[static_cast<std::size_t>(i)];
        if (v < cols) sol.y(v) = T(i, rhs);
    }
    sol.prices = T.row(rows).segment(cols, rows).transpose().cwiseMax(0.0);
    sol.value = T(rows, rhs);
    sol.pivots = pivots;
    return sol;
}

} // namespace milac

#endif // MILAC_SIMPLEX_HPP
