#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "iafb/linalg.hpp"

namespace iafb {

/// Purpose tags keep the substreams of one trial disjoint.
enum class StreamTag : std::uint64_t {
    channel = 0x11,
    codebook = 0x22,
    align_target = 0x33,
    wishart = 0x44,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic per-(seed, trial, tag, attempt) random stream.
///
/// The key is a counter-style mix, so any trial can be generated on any
/// worker in any order and still produce bit-identical output. All
/// distributions are hand-rolled on top of mt19937_64 so the byte stream
/// does not depend on the standard library implementation.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial, StreamTag tag,
             std::uint64_t attempt = 0)
        : gen_(derive_key(seed, trial, static_cast<std::uint64_t>(tag), attempt)) {}

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t trial,
                                    std::uint64_t tag, std::uint64_t attempt) {
        std::uint64_t h = splitmix64(seed);
        h = splitmix64(h ^ trial);
        h = splitmix64(h ^ tag);
        h = splitmix64(h ^ attempt);
        return h;
    }

    /// Uniform in (0, 1).
    double uniform() {
        const std::uint64_t x = gen_();
        return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard complex Gaussian CN(0,1): real/imag parts N(0, 1/2).
    cplx cgaussian() {
        const double r = std::sqrt(-std::log(uniform()));  // Rayleigh of CN(0,1) has sigma^2=1/2 per part
        const double phi = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Real standard normal N(0,1).
    double gaussian() {
        const cplx z = cgaussian();
        return z.real() * std::numbers::sqrt2;
    }

    CMat cgaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
        CMat m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cgaussian();
        return m;
    }

    /// Uniform on the complex unit sphere in dimension n.
    CVec unit_vector(Eigen::Index n) {
        CVec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = cgaussian();
        v.normalize();
        return v;
    }

    /// n x n_cols matrix with orthonormal columns, Haar-ish via QR of a
    /// Gaussian draw. Also exposes the full square factor for complements.
    CMat orthonormal(Eigen::Index n, Eigen::Index n_cols) {
        return full_orthonormal(n).leftCols(n_cols);
    }

    CMat full_orthonormal(Eigen::Index n) {
        const CMat g = cgaussian_matrix(n, n);
        Eigen::HouseholderQR<CMat> qr(g);
        CMat q = qr.householderQ();
        // fix the phase so the factor is a deterministic function of g
        const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index j = 0; j < n; ++j) {
            const cplx d = r(j, j);
            if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
        }
        return q;
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace iafb
