#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "iafb/channel.hpp"
#include "iafb/codebook.hpp"
#include "iafb/linalg.hpp"
#include "iafb/rng.hpp"
#include "iafb/rxdesign.hpp"

namespace iafb {

/// Chosen transmit beamforming vectors for the K users of one cell, plus the
/// compound index that gets exchanged over the backhaul.
struct TxSelection {
    int cell = 0;
    std::uint64_t m_star = 0;
    std::vector<CVec> vectors;
    // achieved residual-ICI objective; NaN for the chordal / ideal modes
    double objective = std::numeric_limits<double>::quiet_NaN();
};

/// Reference interference subspace at the victim BS for the ideal (perfect
/// feedback) alignment construction. `basis` spans the n_r-K dimensions the
/// interference is confined to, `complement` the K signal dimensions.
struct AlignmentTarget {
    int cell = 0;  // the interfering cell whose users align into this target
    CMat basis;
    CMat complement;
};

inline AlignmentTarget random_alignment_target(const SystemConfig& cfg, int cell,
                                               std::uint64_t seed, std::uint64_t trial,
                                               std::uint64_t attempt = 0) {
    TrialRng rng(seed, trial, StreamTag::align_target,
                 attempt * 2 + static_cast<std::uint64_t>(cell));
    const CMat q = rng.full_orthonormal(cfg.n_r);
    AlignmentTarget t;
    t.cell = cell;
    t.basis = q.leftCols(cfg.n_r - cfg.k_users);
    t.complement = q.rightCols(cfg.k_users);
    return t;
}

/// Joint quantization: exhaustive search over the 2^{KB} compound codewords
/// for the tuple minimizing the overall residual ICI rho_K(A). Ties go to the
/// lowest index.
inline TxSelection quantize_joint(const std::vector<CMat>& cross,
                                  const CodebookSet& cb, int cell) {
    const int k = static_cast<int>(cross.size());
    const Eigen::Index n_r = cross.front().rows();
    if (n_r <= k)
        throw InvalidConfigError("joint quantization requires n_r > k_users");

    // precompute the effective interference columns G_n c for every codeword
    const int per_user = cb.per_user_size();
    std::vector<CMat> cols(k);
    for (int n = 0; n < k; ++n) {
        cols[n] = CMat(n_r, per_user);
        for (int d = 0; d < per_user; ++d)
            cols[n].col(d) = cross[n] * cb.words[cell][n][d];
    }

    const std::uint64_t total = cb.compound_size();
    std::vector<int> digits(k, 0);
    CMat g(n_r, k);
    std::uint64_t best_m = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t m0 = 0; m0 < total; ++m0) {
        for (int n = 0; n < k; ++n) g.col(n) = cols[n].col(digits[n]);
        const CMat a = g * g.adjoint();
        const double rho = hermitian_eigenvalues(a).head(k).sum();
        if (rho < best) {
            best = rho;
            best_m = m0 + 1;
        }
        // odometer increment, user 0 least significant
        for (int n = 0; n < k; ++n) {
            if (++digits[n] < per_user) break;
            digits[n] = 0;
        }
    }

    TxSelection sel;
    sel.cell = cell;
    sel.m_star = best_m;
    sel.vectors = compound_codeword(cb, cell, best_m).vectors;
    sel.objective = best;
    return sel;
}

/// Reference quantizer: per user independently, minimum chordal distance to
/// the ideal vector, i.e. argmax |c^H v|. Ties go to the lowest index.
inline TxSelection quantize_chordal(const std::vector<CVec>& ideal,
                                    const CodebookSet& cb, int cell) {
    const int k = static_cast<int>(ideal.size());
    std::vector<int> digits(k);
    std::vector<CVec> chosen(k);
    for (int n = 0; n < k; ++n) {
        double best = -1.0;
        int best_d = 0;
        for (int d = 0; d < cb.per_user_size(); ++d) {
            const double corr = std::abs(cb.words[cell][n][d].dot(ideal[n]));
            if (corr > best) {
                best = corr;
                best_d = d;
            }
        }
        digits[n] = best_d;
        chosen[n] = cb.words[cell][n][best_d];
    }
    TxSelection sel;
    sel.cell = cell;
    sel.m_star = encode_compound_index(cb, digits);
    sel.vectors = std::move(chosen);
    return sel;
}

/// Perfect-CSI alignment: v_n = normalize(G_n^{-1} w), with w cycling over
/// the columns of the target basis, so every G_n v_n lands inside Col(target).
/// Requires square cross channels (n_t = n_r).
inline std::vector<CVec> ideal_alignment_tb(const std::vector<CMat>& cross,
                                            const AlignmentTarget& target) {
    const int k = static_cast<int>(cross.size());
    const Eigen::Index dims = target.basis.cols();
    std::vector<CVec> v(k);
    for (int n = 0; n < k; ++n) {
        if (cross[n].rows() != cross[n].cols())
            throw InvalidConfigError("ideal alignment requires n_t = n_r");
        CVec x = invert(cross[n]) * target.basis.col(n % dims);
        x.normalize();
        v[n] = std::move(x);
    }
    return v;
}

}  // namespace iafb
