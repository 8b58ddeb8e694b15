#pragma once

// Test-only helpers: an independent Jacobi eigensolver used as an oracle
// against the library's decomposition path, and small instance generators.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "iafb/linalg.hpp"

namespace testutil {

using iafb::CMat;
using iafb::CVec;
using iafb::cplx;

/// Eigenvalues of a Hermitian matrix via cyclic complex Jacobi rotations.
/// Independent of the library's eigensolver; ascending order.
inline std::vector<double> jacobi_eigenvalues(CMat a) {
    const Eigen::Index n = a.rows();
    const double scale = std::max(1.0, a.norm());
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) < 1e-14 * scale) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag < 1e-300) continue;
                const cplx phase = a(p, q) / mag;
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double sgn = theta >= 0.0 ? 1.0 : -1.0;
                const double t = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                CMat j = CMat::Identity(n, n);
                j(p, p) = c;
                j(q, q) = c;
                j(p, q) = s * phase;
                j(q, p) = -s * std::conj(phase);
                a = j.adjoint() * a * j;
            }
        }
    }
    std::vector<double> vals(n);
    for (Eigen::Index i = 0; i < n; ++i) vals[i] = a(i, i).real();
    std::sort(vals.begin(), vals.end());
    return vals;
}

inline double jacobi_rho_k(const CMat& a, int k) {
    const auto vals = jacobi_eigenvalues(a);
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += vals[i];
    return s;
}

inline CMat random_cmat(std::mt19937& gen, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(nd(gen), nd(gen));
    return m;
}

inline CMat random_hermitian(std::mt19937& gen, Eigen::Index n) {
    const CMat x = random_cmat(gen, n, n);
    return (x + x.adjoint()) / 2.0;
}

inline CMat random_psd(std::mt19937& gen, Eigen::Index n, Eigen::Index rank) {
    const CMat x = random_cmat(gen, n, rank);
    return x * x.adjoint();
}

inline CMat random_orthonormal(std::mt19937& gen, Eigen::Index n, Eigen::Index cols) {
    const CMat x = random_cmat(gen, n, n);
    Eigen::HouseholderQR<CMat> qr(x);
    CMat q = qr.householderQ();
    return q.leftCols(cols);
}

inline CVec random_unit(std::mt19937& gen, Eigen::Index n) {
    CVec v = random_cmat(gen, n, 1).col(0);
    v.normalize();
    return v;
}

}  // namespace testutil
