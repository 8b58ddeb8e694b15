#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "iafb/linalg.hpp"
#include "iafb/rng.hpp"

namespace iafb {

struct InvalidConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two-cell uplink configuration: K users per cell, N_t antennas per user,
/// N_r per base station, B feedback bits per user.
struct SystemConfig {
    int n_t = 0;
    int n_r = 0;
    int k_users = 0;
    int b_bits = 0;
    static constexpr int cells = 2;

    void validate() const {
        if (n_t < 1 || n_r < 1 || k_users < 1 || b_bits < 1)
            throw InvalidConfigError("n_t, n_r, k_users and b_bits must all be >= 1");
    }

    /// K < N_r < 2K is the validated default regime; anything else still
    /// runs, the harness just flags it.
    bool in_validated_regime() const {
        return k_users < n_r && n_r < 2 * k_users;
    }

    int compound_bits() const { return k_users * b_bits; }
    std::uint64_t compound_size() const {
        return std::uint64_t{1} << compound_bits();
    }
};

/// Per-trial channel realization. direct[i][k] is H_{i,k} (UE k of cell i to
/// its home BS), cross[i][k] is G_{i,k} (same user to the neighbor BS).
/// Cells are 0-indexed internally.
struct ChannelSet {
    std::array<std::vector<CMat>, 2> direct;
    std::array<std::vector<CMat>, 2> cross;
};

inline ChannelSet sample_channels(const SystemConfig& cfg, std::uint64_t seed,
                                  std::uint64_t trial, std::uint64_t attempt = 0) {
    cfg.validate();
    TrialRng rng(seed, trial, StreamTag::channel, attempt);
    ChannelSet cs;
    for (int i = 0; i < 2; ++i) {
        cs.direct[i].reserve(cfg.k_users);
        cs.cross[i].reserve(cfg.k_users);
        for (int k = 0; k < cfg.k_users; ++k)
            cs.direct[i].push_back(rng.cgaussian_matrix(cfg.n_r, cfg.n_t));
        for (int k = 0; k < cfg.k_users; ++k)
            cs.cross[i].push_back(rng.cgaussian_matrix(cfg.n_r, cfg.n_t));
    }
    return cs;
}

}  // namespace iafb
