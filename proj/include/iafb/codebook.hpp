#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "iafb/channel.hpp"
#include "iafb/linalg.hpp"
#include "iafb/rng.hpp"

namespace iafb {

struct IndexOutOfRangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Random vector-quantization codebooks: per cell, per user, 2^B unit-norm
/// codewords of length n_t. Regenerated fresh for every trial.
struct CodebookSet {
    // words[cell][user][m], m 0-based internally
    std::array<std::vector<std::vector<CVec>>, 2> words;
    int k_users = 0;
    int b_bits = 0;

    int per_user_size() const { return 1 << b_bits; }
    std::uint64_t compound_size() const {
        return std::uint64_t{1} << (static_cast<unsigned>(k_users) * b_bits);
    }
};

/// One entry of the Cartesian-product compound codebook: a K-tuple of
/// per-user codewords addressed by a single KB-bit index m in {1..2^{KB}}.
struct CompoundCodeword {
    int cell = 0;
    std::uint64_t m = 0;  // 1-based, as exchanged over the backhaul
    std::vector<CVec> vectors;
};

inline CodebookSet generate_codebooks(const SystemConfig& cfg, std::uint64_t seed,
                                      std::uint64_t trial, std::uint64_t attempt = 0) {
    cfg.validate();
    TrialRng rng(seed, trial, StreamTag::codebook, attempt);
    CodebookSet cb;
    cb.k_users = cfg.k_users;
    cb.b_bits = cfg.b_bits;
    const int size = 1 << cfg.b_bits;
    for (int i = 0; i < 2; ++i) {
        cb.words[i].resize(cfg.k_users);
        for (int n = 0; n < cfg.k_users; ++n) {
            cb.words[i][n].reserve(size);
            for (int m = 0; m < size; ++m)
                cb.words[i][n].push_back(rng.unit_vector(cfg.n_t));
        }
    }
    return cb;
}

/// Decode a 1-based compound index into 0-based per-user codeword indices.
/// User 0 is the least-significant base-2^B digit.
inline std::vector<int> decode_compound_index(const CodebookSet& cb, std::uint64_t m) {
    if (m < 1 || m > cb.compound_size())
        throw IndexOutOfRangeError("compound index out of range");
    std::uint64_t rem = m - 1;
    const std::uint64_t base = static_cast<std::uint64_t>(cb.per_user_size());
    std::vector<int> digits(cb.k_users);
    for (int n = 0; n < cb.k_users; ++n) {
        digits[n] = static_cast<int>(rem % base);
        rem /= base;
    }
    return digits;
}

inline std::uint64_t encode_compound_index(const CodebookSet& cb,
                                           const std::vector<int>& digits) {
    std::uint64_t m = 0;
    const std::uint64_t base = static_cast<std::uint64_t>(cb.per_user_size());
    for (int n = cb.k_users - 1; n >= 0; --n) {
        if (digits[n] < 0 || digits[n] >= cb.per_user_size())
            throw IndexOutOfRangeError("codeword digit out of range");
        m = m * base + static_cast<std::uint64_t>(digits[n]);
    }
    return m + 1;
}

inline CompoundCodeword compound_codeword(const CodebookSet& cb, int cell,
                                          std::uint64_t m) {
    const auto digits = decode_compound_index(cb, m);
    CompoundCodeword cw{cell, m, {}};
    cw.vectors.reserve(cb.k_users);
    for (int n = 0; n < cb.k_users; ++n)
        cw.vectors.push_back(cb.words[cell][n][digits[n]]);
    return cw;
}

}  // namespace iafb
