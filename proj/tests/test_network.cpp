// SPDX-License-Identifier: Apache-2.0

#include "milac/network.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace milac;
using milac::test::Rng;

namespace {

TunableAdmittances random_lossless_elements(Index ports, Rng& rng) {
    TunableAdmittances e(ports);
    for (Index n = 0; n < ports; ++n) e.ground(n) = kJ * rng.uniform(-0.02, 0.02);
    for (Index n = 0; n < ports; ++n)
        for (Index j = n + 1; j < ports; ++j) e.coupling(n, j) = kJ * rng.uniform(-0.02, 0.02);
    return e;
}

CMat random_contraction(Index N, Index K, Rng& rng, double norm) {
    CMat F = rng.matrix(N, K);
    return F * (norm / milac::test::spectral_norm_eig(F));
}

} // namespace

TEST(Admittances, ZeroNetworkGivesZeroMatrix) {
    const TunableAdmittances e(5);
    EXPECT_EQ(admittances_to_matrix(e, 3, 2).Y.norm(), 0.0);
}

TEST(Admittances, TwoPortCoupling) {
    TunableAdmittances e(2);
    e.coupling(0, 1) = cplx(0.0, 0.01);
    const CMat Y = admittances_to_matrix(e, 1, 1).Y;
    CMat expected(2, 2);
    expected << cplx(0, 0.01), cplx(0, -0.01), cplx(0, -0.01), cplx(0, 0.01);
    EXPECT_LT((Y - expected).norm(), 1e-15);
    EXPECT_EQ(e.coupling(1, 0), e.coupling(0, 1));
}

TEST(Admittances, CouplingRejectsDiagonalIndex) {
    TunableAdmittances e(3);
    EXPECT_THROW(e.coupling(1, 1), DimensionError);
    EXPECT_THROW(e.coupling(0, 3), DimensionError);
}

TEST(Admittances, DimensionMismatchThrows) {
    const TunableAdmittances e(4);
    EXPECT_THROW(admittances_to_matrix(e, 2, 1), DimensionError);
}

TEST(Admittances, MatrixIsExactlySymmetricAndRoundTrips) {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const Index ports = 2 + t % 7;
        const TunableAdmittances e = random_lossless_elements(ports, rng);
        const AdmittanceMatrix Y = admittances_to_matrix(e, ports - 1, 1);
        EXPECT_EQ((Y.Y - Y.Y.transpose()).norm(), 0.0);
        EXPECT_LT(Y.Y.real().cwiseAbs().maxCoeff(), 1e-18);
        const TunableAdmittances back = matrix_to_admittances(Y);
        EXPECT_TRUE(back.lossless());
        for (Index n = 0; n < ports; ++n) EXPECT_NEAR(std::abs(back.ground(n) - e.ground(n)), 0.0, 1e-15);
        for (Index n = 0; n < ports; ++n)
            for (Index j = n + 1; j < ports; ++j)
                EXPECT_NEAR(std::abs(back.coupling(n, j) - e.coupling(n, j)), 0.0, 1e-15);
    }
}

TEST(Admittances, InverseOfTwoPortExample) {
    CMat Y(2, 2);
    Y << cplx(0, 0.01), cplx(0, -0.01), cplx(0, -0.01), cplx(0, 0.01);
    const TunableAdmittances e = matrix_to_admittances({Y, 1, 1});
    EXPECT_NEAR(std::abs(e.coupling(0, 1) - cplx(0, 0.01)), 0.0, 1e-17);
    EXPECT_NEAR(std::abs(e.ground(0)), 0.0, 1e-17);
    EXPECT_NEAR(std::abs(e.ground(1)), 0.0, 1e-17);
}

TEST(Admittances, AsymmetricMatrixRejected) {
    CMat Y = CMat::Zero(2, 2);
    Y(0, 1) = cplx(0, 0.01);
    EXPECT_THROW(matrix_to_admittances({Y, 1, 1}), InfeasibleError);
}

TEST(Scattering, MatchedTerminationIsIdentity) {
    const ScatteringMatrix s = scattering_from_admittance({CMat::Zero(3, 3), 2, 1});
    EXPECT_LT((s.theta - CMat::Identity(3, 3)).norm(), 1e-15);
}

TEST(Scattering, OnePortScalar) {
    const ScatteringMatrix s = scattering_from_admittance({CMat::Constant(1, 1, cplx(0, 0.02)), 1, 0}, 50.0);
    EXPECT_NEAR(std::abs(s.theta(0, 0) - cplx(0, -1)), 0.0, 1e-15);
    const AdmittanceMatrix y = admittance_from_scattering(s, 50.0);
    EXPECT_NEAR(std::abs(y.Y(0, 0) - cplx(0, 0.02)), 0.0, 1e-15);
}

TEST(Scattering, IdentityScatteringGivesZeroAdmittance) {
    EXPECT_LT(admittance_from_scattering({CMat::Identity(4, 4), 3, 1}).Y.norm(), 1e-18);
}

TEST(Scattering, ShortCircuitIsSingular) {
    EXPECT_THROW(admittance_from_scattering({-CMat::Identity(3, 3), 2, 1}), SingularityError);
    CMat Y = CMat::Identity(2, 2) * (-1.0 / 50.0);
    EXPECT_THROW(scattering_from_admittance({Y, 1, 1}), SingularityError);
}

TEST(Scattering, LosslessAdmittanceGivesUnitarySymmetricAndRoundTrips) {
    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
        const Index ports = 2 + t % 9;
        const AdmittanceMatrix Y = admittances_to_matrix(random_lossless_elements(ports, rng), ports - 1, 1);
        const ScatteringMatrix s = scattering_from_admittance(Y);
        const auto rep = is_lossless_reciprocal(s, 1e-10);
        EXPECT_TRUE(rep.pass) << rep.symmetric_defect << " " << rep.unitary_defect;
        const AdmittanceMatrix back = admittance_from_scattering(s);
        EXPECT_LE((back.Y - Y.Y).norm(), 1e-9 * Y.Y.norm());
        EXPECT_LE(milac::test::spectral_norm_eig(response_from_scattering(s).F), 1.0 + 1e-12);
    }
}

TEST(Response, BlockReadOff) {
    const ScatteringMatrix id{CMat::Identity(3, 3), 2, 1};
    EXPECT_EQ(response_from_scattering(id).F.norm(), 0.0);
    CMat t(3, 3);
    t << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    const CMat F = response_from_scattering({t, 2, 1}).F;
    ASSERT_EQ(F.rows(), 2);
    ASSERT_EQ(F.cols(), 1);
    EXPECT_EQ(F(0, 0), cplx(1, 0));
    EXPECT_EQ(F(1, 0), cplx(0, 0));
}

TEST(Response, DimensionMismatchThrows) {
    EXPECT_THROW(response_from_scattering({CMat::Identity(3, 3), 3, 1}), DimensionError);
}

TEST(Response, TransposeSquaredUnitaryHasContractiveBlock) {
    Rng rng(13);
    for (int t = 0; t < 50; ++t) {
        const Index N = 1 + t % 6;
        const Index K = 1 + t % 3;
        const CMat Q = rng.unitary(N + K);
        const ScatteringMatrix s{Q.transpose() * Q, N, K};
        EXPECT_TRUE(is_lossless_reciprocal(s, 1e-10).pass);
        EXPECT_LE(milac::test::spectral_norm_eig(response_from_scattering(s).F), 1.0 + 1e-12);
    }
}

TEST(Completion, ZeroResponse) {
    const ScatteringMatrix s = complete_scattering({CMat::Zero(3, 2)});
    CMat expected = CMat::Zero(5, 5);
    expected.topLeftCorner(2, 2) = -CMat::Identity(2, 2);
    expected.bottomRightCorner(3, 3) = CMat::Identity(3, 3);
    EXPECT_LT((s.theta - expected).norm(), 1e-15);
}

TEST(Completion, UnitColumn) {
    CMat F(2, 1);
    F << 1, 0;
    const ScatteringMatrix s = complete_scattering({F});
    CMat expected(3, 3);
    expected << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    EXPECT_LT((s.theta - expected).norm(), 1e-14);
}

TEST(Completion, BalancedColumn) {
    CMat F(2, 1);
    F << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const ScatteringMatrix s = complete_scattering({F});
    EXPECT_LT(std::abs(s.theta(0, 0)), 1e-14);
    CMat t22(2, 2);
    t22 << 0.5, -0.5, -0.5, 0.5;
    EXPECT_LT((s.theta.bottomRightCorner(2, 2) - t22).norm(), 1e-14);
    EXPECT_TRUE(is_lossless_reciprocal(s, 1e-12).pass);
}

TEST(Completion, RandomContractionsIncludingRankDeficientAndBoundary) {
    Rng rng(14);
    for (int t = 0; t < 200; ++t) {
        const Index N = 1 + rng.integer(0, 15);
        const Index K = 1 + rng.integer(0, 5);
        CMat F;
        switch (t % 3) {
        case 0: F = random_contraction(N, K, rng, 1.0); break;
        case 1: F = random_contraction(N, K, rng, rng.uniform()); break;
        default: {
            const Index r = std::max<Index>(1, std::min(N, K) - 1);
            F = rng.matrix(N, r) * rng.matrix(r, K);
            F /= milac::test::spectral_norm_eig(F);
        }
        }
        const ScatteringMatrix s = complete_scattering({F});
        const auto rep = is_lossless_reciprocal(s, 1e-10);
        EXPECT_LE(rep.symmetric_defect, 1e-10);
        EXPECT_LE(rep.unitary_defect, 1e-9);
        EXPECT_LE((response_from_scattering(s).F - F).norm(), 1e-10);
    }
}

TEST(Completion, SlightlyAboveOneIsClipped) {
    Rng rng(15);
    const CMat F = random_contraction(4, 2, rng, 1.0 + 5e-10);
    const ScatteringMatrix s = complete_scattering({F});
    EXPECT_TRUE(s.theta.allFinite());
    EXPECT_LE(is_lossless_reciprocal(s, 1e-8).unitary_defect, 1e-8);
}

TEST(Completion, NormAboveOneRejected) {
    Rng rng(16);
    EXPECT_THROW(complete_scattering({random_contraction(4, 2, rng, 1.01)}), InfeasibleError);
}

TEST(Completion, DeterministicAcrossCalls) {
    Rng rng(17);
    const CMat F = random_contraction(6, 3, rng, 0.7);
    EXPECT_EQ((complete_scattering({F}).theta - complete_scattering({F}).theta).norm(), 0.0);
}

TEST(LosslessReciprocal, IdentityPassesDiagonalFails) {
    const auto ok = is_lossless_reciprocal(CMat::Identity(3, 3), 1e-12);
    EXPECT_TRUE(ok.pass);
    EXPECT_EQ(ok.symmetric_defect, 0.0);
    EXPECT_EQ(ok.unitary_defect, 0.0);
    CMat d = CMat::Identity(3, 3);
    d(0, 0) = 2.0;
    const auto bad = is_lossless_reciprocal(d, 1e-9);
    EXPECT_FALSE(bad.pass);
    EXPECT_GT(bad.unitary_defect, 0.0);
}
