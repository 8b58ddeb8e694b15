#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <stdexcept>

namespace iafb {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

namespace tol {
inline constexpr double hermitian = 1e-9;       // symmetry / orthonormality
inline constexpr double reconstruct = 1e-7;     // eigendecomposition residual
inline constexpr double rcond_singular = 1e-12; // below this, treat as singular
inline constexpr double rcond_warn = 1e-9;      // near-singular flag threshold
inline constexpr double unit_norm = 1e-12;
}  // namespace tol

struct LinalgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotHermitianError : LinalgError {
    using LinalgError::LinalgError;
};
struct NoConvergenceError : LinalgError {
    using LinalgError::LinalgError;
};
struct SingularMatrixError : LinalgError {
    using LinalgError::LinalgError;
};

/// Eigenvalues in ascending order with matching unit-norm eigenvector columns.
struct EigPairs {
    RVec values;
    CMat vectors;
};

inline double fro_norm_sq(const CMat& m) { return m.squaredNorm(); }

inline void check_hermitian(const CMat& a) {
    if (a.rows() != a.cols()) throw NotHermitianError("matrix is not square");
    const double scale = std::max(1.0, a.norm());
    if ((a - a.adjoint()).norm() > tol::hermitian * scale)
        throw NotHermitianError("matrix is not Hermitian within tolerance");
}

inline EigPairs hermitian_eig_ascending(const CMat& a) {
    check_hermitian(a);
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    if (es.info() != Eigen::Success)
        throw NoConvergenceError("Hermitian eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

/// Eigenvalues only, ascending. Hot path of the quantizer search; skips the
/// symmetry check (callers construct A = G G^H which is Hermitian by form).
inline RVec hermitian_eigenvalues(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NoConvergenceError("Hermitian eigensolver failed to converge");
    return es.eigenvalues();
}

inline double norm1(const CMat& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

/// 1-norm reciprocal condition estimate from a matrix and its computed inverse.
inline double rcond_estimate(const CMat& m, const CMat& inv) {
    const double a = norm1(m), b = norm1(inv);
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(b)) return 0.0;
    return 1.0 / (a * b);
}

inline CMat invert(const CMat& m) {
    if (m.rows() != m.cols()) throw SingularMatrixError("inverse of non-square matrix");
    Eigen::PartialPivLU<CMat> lu(m);
    CMat inv = lu.inverse();
    if (!inv.allFinite() || rcond_estimate(m, inv) < tol::rcond_singular)
        throw SingularMatrixError("matrix is numerically singular");
    return inv;
}

}  // namespace iafb
