// SPDX-License-Identifier: Apache-2.0
//
// Lossless reciprocal multiport networks: tunable admittances, the nodal
// admittance matrix Y, the scattering matrix Theta and the N x K response
// block F that maps the K RF-chain ports onto the N antenna ports.
//
// Port ordering is [RF chains 0..K-1, antennas K..K+N-1] throughout.

#ifndef MILAC_NETWORK_HPP
#define MILAC_NETWORK_HPP

#include "milac/linalg.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace milac {

inline constexpr double kDefaultReferenceImpedance = 50.0;

struct NetworkTolerances {
    double symmetry = 1e-9;        // relative asymmetry accepted in Y
    double min_rcond = 1e-12;      // singularity guard for the Cayley transforms
    double rank_cut = 1e-12;       // relative singular-value cut when completing F
    double norm_slack = 1e-9;      // ||F||_2 in (1, 1 + slack] is clipped to 1
};

/// Ground admittances Ybar_n for every port plus the coupling admittances
/// Ybar_{n,j}, n < j, packed row-major over the strict upper triangle.
class TunableAdmittances {
public:
    TunableAdmittances() = default;

    explicit TunableAdmittances(Index ports, double reference_impedance = kDefaultReferenceImpedance)
        : ground_(CVec::Zero(ports)),
          coupling_(static_cast<std::size_t>(ports * (ports - 1) / 2), cplx{}),
          z0_(reference_impedance) {}

    Index ports() const { return ground_.size(); }
    double reference_impedance() const { return z0_; }

    cplx& ground(Index n) { return ground_(n); }
    cplx ground(Index n) const { return ground_(n); }

    cplx& coupling(Index n, Index j) { return coupling_[slot(n, j)]; }
    cplx coupling(Index n, Index j) const { return coupling_[slot(n, j)]; }

    const CVec& ground_vector() const { return ground_; }
    const std::vector<cplx>& packed_coupling() const { return coupling_; }

    /// True when every element is purely imaginary (lossless) within tol.
    bool lossless(double tol = 1e-12) const {
        for (Index n = 0; n < ground_.size(); ++n)
            if (std::abs(ground_(n).real()) > tol) return false;
        for (const cplx& y : coupling_)
            if (std::abs(y.real()) > tol) return false;
        return true;
    }

private:
    std::size_t slot(Index n, Index j) const {
        if (n == j || n < 0 || j < 0 || n >= ports() || j >= ports())
            throw DimensionError("coupling index out of range");
        if (n > j) std::swap(n, j);
        const Index m = ports();
        return static_cast<std::size_t>(n * m - n * (n + 1) / 2 + (j - n - 1));
    }

    CVec ground_;
    std::vector<cplx> coupling_;
    double z0_ = kDefaultReferenceImpedance;
};

struct AdmittanceMatrix {
    CMat Y;
    Index N = 0;
    Index K = 0;
};

struct ScatteringMatrix {
    CMat theta;
    Index N = 0;
    Index K = 0;
};

/// F = [Theta]_{K+1:K+N, 1:K}. This is twice the physical port-to-port
/// response; the factor 1/2 is absorbed into the noise normalisation.
struct MilacResponse {
    CMat F;
};

inline AdmittanceMatrix admittances_to_matrix(const TunableAdmittances& elems, Index N, Index K) {
    require_dims(N >= 0 && K >= 0 && elems.ports() == N + K,
                 "admittances_to_matrix: element set does not match N + K ports");
    const Index m = N + K;
    CMat Y = CMat::Zero(m, m);
    for (Index n = 0; n < m; ++n) {
        cplx diag = elems.ground(n);
        for (Index j = 0; j < m; ++j) {
            if (j == n) continue;
            diag += elems.coupling(n, j);
            if (j > n) {
                Y(n, j) = -elems.coupling(n, j);
                Y(j, n) = Y(n, j);
            }
        }
        Y(n, n) = diag;
    }
    return {std::move(Y), N, K};
}

inline TunableAdmittances matrix_to_admittances(const AdmittanceMatrix& adm,
                                                double reference_impedance = kDefaultReferenceImpedance,
                                                double tol = NetworkTolerances{}.symmetry) {
    const CMat& Y = adm.Y;
    require_dims(Y.rows() == Y.cols() && Y.rows() == adm.N + adm.K,
                 "matrix_to_admittances: Y must be (N+K) x (N+K)");
    const double asym = (Y - Y.transpose()).norm();
    if (asym > tol * Y.norm())
        throw InfeasibleError("matrix_to_admittances: admittance matrix is not symmetric");

    const Index m = Y.rows();
    TunableAdmittances elems(m, reference_impedance);
    for (Index n = 0; n < m; ++n)
        for (Index j = n + 1; j < m; ++j) elems.coupling(n, j) = -Y(n, j);
    for (Index n = 0; n < m; ++n) {
        cplx off{};
        for (Index j = 0; j < m; ++j)
            if (j != n) off += elems.coupling(n, j);
        elems.ground(n) = Y(n, n) - off;
    }
    return elems;
}

namespace detail {

inline Eigen::PartialPivLU<CMat> guarded_lu(const CMat& a, double min_rcond, const char* what) {
    Eigen::PartialPivLU<CMat> lu(a);
    if (!(lu.rcond() >= min_rcond)) throw SingularityError(what);
    return lu;
}

} // namespace detail

/// Theta = (I + Z0 Y)^{-1} (I - Z0 Y).
inline ScatteringMatrix scattering_from_admittance(const AdmittanceMatrix& adm,
                                                   double z0 = kDefaultReferenceImpedance,
                                                   double min_rcond = NetworkTolerances{}.min_rcond) {
    require_dims(adm.Y.rows() == adm.Y.cols(), "scattering_from_admittance: Y must be square");
    const Index m = adm.Y.rows();
    const CMat I = CMat::Identity(m, m);
    const auto lu = detail::guarded_lu(I + z0 * adm.Y, min_rcond,
                                       "scattering_from_admittance: I + Z0*Y is singular");
    return {lu.solve(I - z0 * adm.Y), adm.N, adm.K};
}

/// Y = (1/Z0) (I + Theta)^{-1} (I - Theta).
inline AdmittanceMatrix admittance_from_scattering(const ScatteringMatrix& s,
                                                   double z0 = kDefaultReferenceImpedance,
                                                   double min_rcond = NetworkTolerances{}.min_rcond) {
    require_dims(s.theta.rows() == s.theta.cols(), "admittance_from_scattering: Theta must be square");
    const Index m = s.theta.rows();
    const CMat I = CMat::Identity(m, m);
    const auto lu = detail::guarded_lu(I + s.theta, min_rcond,
                                       "admittance_from_scattering: Theta has an eigenvalue at -1");
    return {lu.solve(I - s.theta) / z0, s.N, s.K};
}

inline MilacResponse response_from_scattering(const ScatteringMatrix& s) {
    require_dims(s.N >= 0 && s.K >= 0 && s.theta.rows() == s.N + s.K && s.theta.cols() == s.N + s.K,
                 "response_from_scattering: Theta dimensions disagree with (N, K)");
    return {s.theta.block(s.K, 0, s.N, s.K)};
}

/// Builds a unitary symmetric Theta whose lower-left block is F:
///   Theta = [[-conj(V) S_K V^H, F^T], [F, U S_N U^T]]
/// with F = U D V^H and S carrying sqrt(1 - sigma_i^2) on the numerical
/// rank and ones elsewhere. Requires ||F||_2 <= 1.
inline ScatteringMatrix complete_scattering(const MilacResponse& response,
                                            const NetworkTolerances& tol = {}) {
    const CMat& F = response.F;
    const Index N = F.rows();
    const Index K = F.cols();
    CMat theta = CMat::Zero(N + K, N + K);
    if (N == 0 || K == 0) {
        theta.topLeftCorner(K, K) = -CMat::Identity(K, K);
        theta.bottomRightCorner(N, N) = CMat::Identity(N, N);
        return {std::move(theta), N, K};
    }

    const Svd d = svd(F, /*full=*/true);
    const double smax = d.s(0);
    if (smax > 1.0 + tol.norm_slack)
        throw InfeasibleError("complete_scattering: ||F||_2 exceeds 1");

    RVec sk = RVec::Ones(K);
    RVec sn = RVec::Ones(N);
    for (Index i = 0; i < d.s.size(); ++i) {
        if (d.s(i) <= tol.rank_cut * smax) continue;
        const double sigma = std::min(d.s(i), 1.0);
        const double c = std::sqrt(std::max(0.0, (1.0 - sigma) * (1.0 + sigma)));
        sk(i) = c;
        sn(i) = c;
    }

    const CMat theta11 = -(d.V.conjugate() * sk.cast<cplx>().asDiagonal() * d.V.adjoint());
    const CMat theta22 = d.U * sn.cast<cplx>().asDiagonal() * d.U.transpose();
    theta.topLeftCorner(K, K) = theta11;
    theta.topRightCorner(K, N) = F.transpose();
    theta.bottomLeftCorner(N, K) = F;
    theta.bottomRightCorner(N, N) = theta22;
    return {std::move(theta), N, K};
}

struct LosslessReciprocalReport {
    double symmetric_defect = 0.0;
    double unitary_defect = 0.0;
    bool pass = false;
};

inline LosslessReciprocalReport is_lossless_reciprocal(const CMat& theta, double tol) {
    require_dims(theta.rows() == theta.cols(), "is_lossless_reciprocal: Theta must be square");
    LosslessReciprocalReport r;
    r.symmetric_defect = (theta - theta.transpose()).norm();
    r.unitary_defect = (theta.adjoint() * theta - CMat::Identity(theta.rows(), theta.cols())).norm();
    r.pass = r.symmetric_defect <= tol && r.unitary_defect <= tol;
    return r;
}

inline LosslessReciprocalReport is_lossless_reciprocal(const ScatteringMatrix& s, double tol) {
    return is_lossless_reciprocal(s.theta, tol);
}

} // namespace milac

#endif // MILAC_NETWORK_HPP
