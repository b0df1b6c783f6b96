// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear-algebra helpers shared by every milac module.

#ifndef MILAC_LINALG_HPP
#define MILAC_LINALG_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace milac {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr cplx kJ{0.0, 1.0};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be inverted is numerically singular.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// The input lies outside the feasible set the operation is defined on.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Caller broke an ordering contract (e.g. stale block variables).
class ContractError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

inline void require_dims(bool ok, const std::string& what) {
    if (!ok) throw DimensionError(what);
}

/// SVD with a reproducible phase convention: the first non-negligible entry
/// of every left-singular vector is real and positive. Paired right-singular
/// vectors receive the same phase so that M = U diag(s) V^H still holds.
struct Svd {
    CMat U;
    RVec s;
    CMat V;
};

namespace detail {

template <typename Col>
cplx leading_phase(const Col& v) {
    const double scale = v.norm();
    if (scale == 0.0) return {1.0, 0.0};
    for (Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > 1e-12 * scale) return v(i) / a;
    }
    return {1.0, 0.0};
}

} // namespace detail

inline Svd svd(const CMat& m, bool full = false) {
    const unsigned opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                               : (Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::JacobiSVD<CMat> solver(m, opts);
    Svd out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
    const Index r = out.s.size();
    for (Index i = 0; i < out.U.cols(); ++i) {
        const cplx fix = std::conj(detail::leading_phase(out.U.col(i)));
        out.U.col(i) *= fix;
        if (i < r) out.V.col(i) *= fix;
    }
    for (Index i = r; i < out.V.cols(); ++i) {
        out.V.col(i) *= std::conj(detail::leading_phase(out.V.col(i)));
    }
    return out;
}

inline RVec singular_values(const CMat& m) {
    if (m.size() == 0) return RVec{};
    return Eigen::JacobiSVD<CMat>(m).singularValues();
}

inline double spectral_norm(const CMat& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

/// Frobenius-nearest point of the spectral-norm ball {||Y||_2 <= 1}:
/// singular values are clipped at one, singular vectors kept.
inline CMat spectral_ball_projection(const CMat& m) {
    if (m.size() == 0) return m;
    const Svd d = svd(m);
    if (d.s(0) <= 1.0) return m;
    const RVec clipped = d.s.cwiseMin(1.0);
    return d.U * clipped.cast<cplx>().asDiagonal() * d.V.adjoint();
}

inline CMat hermitian_part(const CMat& a) { return 0.5 * (a + a.adjoint()); }

/// Principal square root of a Hermitian PSD matrix; negative roundoff
/// eigenvalues are clipped to zero.
inline CMat hermitian_sqrt(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(a));
    const RVec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

struct MinEigenpair {
    double value = 0.0;
    CVec vector;
};

inline MinEigenpair min_eigenpair(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(a));
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

inline double min_eigenvalue(const CMat& a) {
    if (a.size() == 0) return 0.0;
    return Eigen::SelfAdjointEigenSolver<CMat>(hermitian_part(a), Eigen::EigenvaluesOnly)
        .eigenvalues()(0);
}

inline CMat diag_sqrt(const RVec& p) {
    const CVec root = p.cwiseMax(0.0).cwiseSqrt().cast<cplx>();
    CMat out = root.asDiagonal();
    return out;
}

} // namespace milac

#endif // MILAC_LINALG_HPP
