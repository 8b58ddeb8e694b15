#pragma once

#include <cmath>
#include <vector>

#include "iafb/linalg.hpp"

namespace iafb {

struct SingularEffectiveChannelError : SingularMatrixError {
    using SingularMatrixError::SingularMatrixError;
};

/// Compound interfering channel G~ = [G_1 v_1, ..., G_K v_K].
inline CMat compound_interference(const std::vector<CMat>& cross,
                                  const std::vector<CVec>& v) {
    const Eigen::Index n_r = cross.front().rows();
    const Eigen::Index k = static_cast<Eigen::Index>(cross.size());
    CMat g(n_r, k);
    for (Eigen::Index n = 0; n < k; ++n) g.col(n) = cross[n] * v[n];
    return g;
}

/// Interference Gram matrix A = G~ G~^H (Hermitian PSD, n_r x n_r).
inline CMat interference_gram(const std::vector<CMat>& cross,
                              const std::vector<CVec>& v) {
    const CMat g = compound_interference(cross, v);
    return g * g.adjoint();
}

/// Sum of the K smallest eigenvalues of a Hermitian PSD matrix: the least
/// interference power any K-dimensional orthonormal receive subspace must absorb.
inline double rho_k(const CMat& a, int k) {
    const RVec vals = hermitian_eigenvalues(a);
    return vals.head(k).sum();
}

/// Receive basis spanning the K eigenvectors of A with smallest eigenvalues.
inline CMat optimal_receive_basis(const CMat& a, int k) {
    const EigPairs eig = hermitian_eig_ascending(a);
    return eig.vectors.leftCols(k);
}

/// Overall residual inter-cell interference inside Col(U).
inline double residual_ici(const CMat& u, const std::vector<CMat>& cross,
                           const std::vector<CVec>& v) {
    double s = 0.0;
    for (std::size_t n = 0; n < cross.size(); ++n)
        s += (u.adjoint() * (cross[n] * v[n])).squaredNorm();
    return s;
}

/// Full receive chain at one BS: projection basis, intra-cell zero-forcing
/// filters, effective channel and the residual ICI it leaves.
struct RxDesign {
    CMat u_basis;               // n_r x K, orthonormal columns
    std::vector<CVec> filters;  // unit-norm r_k
    CMat eff_channel;           // K x K
    double residual = 0.0;
    bool cond_flag = false;     // effective channel near-singular
};

inline RxDesign build_rx(const CMat& u, const std::vector<CMat>& direct_home,
                         const std::vector<CVec>& v_home,
                         const std::vector<CMat>& cross,
                         const std::vector<CVec>& v_neighbor) {
    const int k = static_cast<int>(direct_home.size());
    RxDesign rx;
    rx.u_basis = u;
    rx.eff_channel = CMat(k, k);
    for (int j = 0; j < k; ++j)
        rx.eff_channel.col(j) = u.adjoint() * (direct_home[j] * v_home[j]);
    CMat inv;
    try {
        inv = invert(rx.eff_channel);
    } catch (const SingularMatrixError&) {
        throw SingularEffectiveChannelError("effective channel is singular");
    }
    rx.cond_flag = rcond_estimate(rx.eff_channel, inv) < tol::rcond_warn;
    rx.filters.reserve(k);
    for (int j = 0; j < k; ++j) {
        CVec r = inv.row(j).adjoint();  // r_j^H is the j-th row of H_e^{-1}
        r.normalize();
        rx.filters.push_back(std::move(r));
    }
    rx.residual = residual_ici(u, cross, v_neighbor);
    return rx;
}

/// Final residual ICI seen by one user after the cascaded filter r^H U^H.
inline double user_interference_power(const RxDesign& rx, int user,
                                      const std::vector<CMat>& cross,
                                      const std::vector<CVec>& v_neighbor) {
    double s = 0.0;
    for (std::size_t n = 0; n < cross.size(); ++n) {
        const cplx t = rx.filters[user].dot(rx.u_basis.adjoint() * (cross[n] * v_neighbor[n]));
        s += std::norm(t);
    }
    return s;
}

inline double user_signal_power(const RxDesign& rx, int user, const CMat& direct,
                                const CVec& v) {
    const cplx t = rx.filters[user].dot(rx.u_basis.adjoint() * (direct * v));
    return std::norm(t);
}

/// Per-user throughput, SNR linear.
inline double per_user_rate(const RxDesign& rx, int user, const CMat& direct,
                            const CVec& v, const std::vector<CMat>& cross,
                            const std::vector<CVec>& v_neighbor, double snr) {
    const double sig = user_signal_power(rx, user, direct, v);
    const double ici = user_interference_power(rx, user, cross, v_neighbor);
    return std::log2(1.0 + snr * sig / (1.0 + snr * ici));
}

/// Interference-free throughput of the perfect-feedback reference chain.
inline double perfect_feedback_rate(const CMat& direct, const CVec& v_ideal,
                                    const CMat& u_ideal, const CVec& r_ideal,
                                    double snr) {
    const cplx t = r_ideal.dot(u_ideal.adjoint() * (direct * v_ideal));
    return std::log2(1.0 + snr * std::norm(t));
}

}  // namespace iafb
