// SPDX-License-Identifier: Apache-2.0

#include "milac/beamforming_sets.hpp"
#include "milac/simplex.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace milac;
using milac::test::Rng;
using milac::test::spectral_norm_eig;

namespace {

CMat duplicated_column(Index N, Rng& rng) {
    CVec f = rng.matrix(N, 1).col(0);
    f.normalize();
    CMat W(N, 2);
    W << f, f;
    return W;
}

CMat orthogonal_columns(Index N, const RVec& norms, Rng& rng) {
    Eigen::HouseholderQR<CMat> qr(rng.matrix(N, norms.size()));
    const CMat Q = qr.householderQ() * CMat::Identity(N, norms.size());
    return Q * norms.cast<cplx>().asDiagonal();
}

// Minimum of 1^T p over {C^T p >= b, p >= 0} by enumerating basic solutions.
double lp_vertex_oracle(const RMat& C, const RVec& b) {
    const Index m = C.rows();
    const Index n = C.cols();
    // Constraint rows a^T p >= c: columns of C, then p_i >= 0.
    RMat A(n + m, m);
    RVec c(n + m);
    A.topRows(n) = C.transpose();
    c.head(n) = b;
    A.bottomRows(m) = RMat::Identity(m, m);
    c.tail(m).setZero();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick(static_cast<std::size_t>(m));
    const Index total = n + m;
    std::function<void(Index, Index)> rec = [&](Index start, Index depth) {
        if (depth == m) {
            RMat S(m, m);
            RVec r(m);
            for (Index i = 0; i < m; ++i) {
                S.row(i) = A.row(pick[static_cast<std::size_t>(i)]);
                r(i) = c(pick[static_cast<std::size_t>(i)]);
            }
            Eigen::FullPivLU<RMat> lu(S);
            if (!lu.isInvertible()) return;
            const RVec p = lu.solve(r);
            if (((A * p - c).array() >= -1e-10).all()) best = std::min(best, p.sum());
            return;
        }
        for (Index i = start; i < total; ++i) {
            pick[static_cast<std::size_t>(depth)] = static_cast<int>(i);
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

} // namespace

TEST(Membership, FixedPowerExamples) {
    EXPECT_TRUE(milac_membership_with_power(CMat::Identity(2, 2), RVec::Ones(2)));
    Rng rng(21);
    const CMat W = duplicated_column(4, rng);
    EXPECT_FALSE(milac_membership_with_power(W, RVec::Ones(2)));
    EXPECT_TRUE(milac_membership_with_power(W, RVec::Constant(2, 2.0)));
    EXPECT_FALSE(milac_membership_with_power(W, RVec::Constant(2, 2.0 - 1e-6)));
}

TEST(Membership, NegativePowerRejected) {
    RVec p(2);
    p << 1.0, -0.1;
    EXPECT_FALSE(milac_membership_with_power(CMat::Zero(3, 2), p));
}

TEST(Simplex, MatchesVertexEnumeration) {
    Rng rng(22);
    for (int t = 0; t < 200; ++t) {
        const Index m = 1 + t % 3;
        const Index n = 1 + rng.integer(0, 5);
        RMat C(m, n);
        RVec b(n);
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < m; ++i) C(i, j) = rng.uniform();
            C.col(j) /= C.col(j).sum();
            b(j) = rng.uniform(0.0, 2.0);
        }
        const PackingLpSolution s = maximize_packing(C, b);
        const double oracle = lp_vertex_oracle(C, b);
        EXPECT_NEAR(s.value, oracle, 1e-9 * std::max(1.0, oracle));
        EXPECT_NEAR(s.prices.sum(), oracle, 1e-9 * std::max(1.0, oracle));
        EXPECT_TRUE(((C.transpose() * s.prices - b).array() >= -1e-10).all());
        EXPECT_TRUE((s.prices.array() >= -1e-12).all());
        EXPECT_TRUE(((C * s.y).array() <= 1.0 + 1e-10).all());
        EXPECT_TRUE((s.y.array() >= -1e-12).all());
    }
}

TEST(Envelope, DiagonalAndDuplicatedColumn) {
    const PowerEnvelope id = min_power_envelope(CMat::Identity(2, 2));
    EXPECT_NEAR(id.p(0), 1.0, 1e-9);
    EXPECT_NEAR(id.p(1), 1.0, 1e-9);
    EXPECT_NEAR(id.total, 2.0, 1e-9);

    Rng rng(23);
    const CMat W = duplicated_column(8, rng);
    const PowerEnvelope env = min_power_envelope(W);
    EXPECT_TRUE(env.converged);
    EXPECT_NEAR(env.total, 4.0, 1e-6);
    // The optimum sits where a cut is tangent to (p1 - 1)(p2 - 1) = 1, so the
    // individual entries are only determined to about sqrt(tol).
    EXPECT_NEAR(env.p(0), 2.0, 1e-4);
    EXPECT_NEAR(env.p(1), 2.0, 1e-4);
    EXPECT_FALSE(milac_member(W, W.squaredNorm()));
}

// K = 2: minimum of p1 + p2 with (p1 - g11)(p2 - g22) >= |g12|^2 is
// g11 + g22 + 2|g12|.
TEST(Envelope, TwoColumnClosedForm) {
    Rng rng(24);
    for (int t = 0; t < 50; ++t) {
        const CMat W = rng.matrix(5, 2);
        const CMat g = W.adjoint() * W;
        const double expected = g(0, 0).real() + g(1, 1).real() + 2.0 * std::abs(g(0, 1));
        const PowerEnvelope env = min_power_envelope(W);
        EXPECT_LE(env.total, expected * (1.0 + 1e-8));
        EXPECT_GE(env.feasible_upper_bound(), expected * (1.0 - 1e-8));
        EXPECT_NEAR(env.total, expected, 1e-6 * expected);
    }
}

TEST(Envelope, OrthogonalColumnsNeedOnlyTheirNorms) {
    Rng rng(25);
    for (int t = 0; t < 30; ++t) {
        const Index K = 1 + t % 5;
        RVec norms(K);
        for (Index k = 0; k < K; ++k) norms(k) = rng.uniform(0.2, 2.0);
        const CMat W = orthogonal_columns(12, norms, rng);
        const PowerEnvelope env = min_power_envelope(W);
        for (Index k = 0; k < K; ++k) EXPECT_NEAR(env.p(k), norms(k) * norms(k), 1e-7);
        EXPECT_NEAR(env.total, W.squaredNorm(), 1e-7 * W.squaredNorm());
        EXPECT_TRUE(milac_member(W, W.squaredNorm()));
    }
}

TEST(Envelope, FullPowerMembershipForcesOrthogonality) {
    Rng rng(26);
    for (int t = 0; t < 30; ++t) {
        const CMat W = rng.matrix(10, 3);
        const PowerEnvelope env = min_power_envelope(W);
        const double excess = env.total - W.squaredNorm();
        double cross = 0.0;
        for (Index i = 0; i < 3; ++i)
            for (Index j = i + 1; j < 3; ++j) cross = std::max(cross, std::abs(W.col(i).dot(W.col(j))));
        EXPECT_GT(cross, 1e-8);
        EXPECT_GT(excess, 0.0);
    }
}

TEST(Envelope, CertifiedPowerIsFeasible) {
    Rng rng(27);
    for (int t = 0; t < 20; ++t) {
        const CMat W = rng.matrix(6, 1 + t % 6);
        const PowerEnvelope env = min_power_envelope(W);
        RVec p = env.p.array() + std::max(0.0, -env.min_eig);
        EXPECT_TRUE(milac_membership_with_power(W, p));
    }
}

TEST(Envelope, TooManyColumnsRejected) {
    EXPECT_THROW(min_power_envelope(CMat::Zero(70, 65)), DimensionError);
}

TEST(Decompose, IdentityAndZeroPower) {
    const MilacBeamformer b = decompose_milac(CMat::Identity(2, 2), RVec::Ones(2));
    EXPECT_LT((b.F - CMat::Identity(2, 2)).norm(), 1e-15);

    CMat W = CMat::Zero(3, 2);
    W(0, 0) = 1.0;
    RVec p(2);
    p << 1.0, 0.0;
    const MilacBeamformer z = decompose_milac(W, p);
    EXPECT_EQ(z.F.col(1).norm(), 0.0);
    EXPECT_LT((z.W() - W).norm(), 1e-15);
}

TEST(Decompose, OrthogonalColumnsGiveSemiUnitaryF) {
    Rng rng(28);
    RVec norms(3);
    norms << 0.5, 1.5, 1.0;
    const CMat W = orthogonal_columns(8, norms, rng);
    const RVec p = W.colwise().squaredNorm().transpose();
    const MilacBeamformer b = decompose_milac(W, p);
    EXPECT_NEAR(spectral_norm_eig(b.F), 1.0, 1e-12);
    EXPECT_LT((b.F.adjoint() * b.F - CMat::Identity(3, 3)).norm(), 1e-12);
    EXPECT_LT((b.W() - W).norm(), 1e-12);
}

TEST(Decompose, NonMemberRejected) {
    Rng rng(29);
    EXPECT_THROW(decompose_milac(duplicated_column(4, rng), RVec::Ones(2)), InfeasibleError);
}

TEST(PhaseShifter, ConstantModulusAndContainment) {
    const PhaseShifterMatrix zero = phase_shifter_matrix(RMat::Zero(4, 3));
    EXPECT_NEAR(spectral_norm_eig(zero.W), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(zero.W(2, 1)), 1.0 / std::sqrt(12.0), 1e-15);

    Rng rng(30);
    for (int t = 0; t < 50; ++t) {
        RMat ph(8, 2);
        for (Index i = 0; i < 8; ++i)
            for (Index j = 0; j < 2; ++j) ph(i, j) = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const PhaseShifterMatrix ps = phase_shifter_matrix(ph);
        EXPECT_NEAR(ps.W.norm(), 1.0, 1e-14);
        EXPECT_LE(spectral_norm_eig(ps.W), 1.0 + 1e-12);
        EXPECT_NEAR(ps.W.cwiseAbs().maxCoeff(), 0.25, 1e-15);
        EXPECT_NEAR(ps.W.cwiseAbs().minCoeff(), 0.25, 1e-15);
    }

    const PhaseShifterMatrix one = phase_shifter_matrix(RMat::Constant(1, 1, std::numbers::pi));
    EXPECT_NEAR(std::abs(one.W(0, 0) - cplx(-1, 0)), 0.0, 1e-15);
}

TEST(Hybrid, DiagonalExample) {
    CMat W = CMat::Zero(4, 2);
    W(0, 0) = 2.0;
    W(1, 1) = 1.0;
    const HybridDecomposition h = hybrid_digital_milac_decompose({W, 5.0});
    EXPECT_LT((h.F - CMat::Identity(4, 2)).norm(), 1e-14);
    CMat P = CMat::Zero(2, 2);
    P(0, 0) = 2.0;
    P(1, 1) = 1.0;
    EXPECT_LT((h.P - P).norm(), 1e-14);
}

TEST(Hybrid, ZeroBeamformer) {
    const HybridDecomposition h = hybrid_digital_milac_decompose({CMat::Zero(5, 3), 1.0});
    EXPECT_EQ(h.P.norm(), 0.0);
    EXPECT_LT((h.F - CMat::Identity(5, 3)).norm(), 1e-15);
}

TEST(Hybrid, RandomReconstruction) {
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        CMat W = rng.matrix(16, 4);
        const double budget = 2.0;
        W *= std::sqrt(budget * rng.uniform()) / W.norm();
        const HybridDecomposition h = hybrid_digital_milac_decompose({W, budget});
        EXPECT_LE((h.F * h.P - W).norm(), 1e-10);
        EXPECT_LE((h.F.adjoint() * h.F - CMat::Identity(4, 4)).norm(), 1e-10);
        EXPECT_LE(h.P.squaredNorm(), budget);
    }
}

TEST(Hybrid, Preconditions) {
    EXPECT_THROW(hybrid_digital_milac_decompose({CMat::Zero(2, 3), 1.0}), DimensionError);
    EXPECT_THROW(hybrid_digital_milac_decompose({CMat::Identity(3, 3), 1.0}), InfeasibleError);
}

TEST(Boundary, SamplesAreFullPowerMembers) {
    Philox rng(5, 0);
    for (int t = 0; t < 100; ++t) {
        const Index K = 1 + t % 4;
        const MilacBeamformer b = sample_milac_boundary(8, K, 3.0, rng);
        EXPECT_NEAR(spectral_norm_eig(b.F), 1.0, 1e-12);
        EXPECT_NEAR(b.p.sum(), 3.0, 1e-12);
        EXPECT_TRUE((b.p.array() >= 0.0).all());
        const CMat W = b.W();
        EXPECT_TRUE(milac_membership_with_power(W, b.p));
        EXPECT_LE(W.squaredNorm(), 3.0 * (1.0 + 1e-12));
        // Column norms never exceed the spectral norm.
        EXPECT_LE(b.F.colwise().norm().maxCoeff(), spectral_norm_eig(b.F) + 1e-12);
    }
    const MilacBeamformer single = sample_milac_boundary(6, 1, 2.0, rng);
    EXPECT_NEAR(single.F.norm(), 1.0, 1e-12);
    EXPECT_NEAR(single.p(0), 2.0, 1e-12);
}
