#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "iafb/channel.hpp"
#include "iafb/linalg.hpp"
#include "iafb/rng.hpp"
#include "iafb/rxdesign.hpp"

namespace iafb {

struct BudgetExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Monte Carlo setup for E[min_m rho_K(A_(m))] over i.i.d. complex central
/// Wishart matrices CW_{dim}(dof, I).
struct WishartSpec {
    int dim = 0;            // n_r
    int dof = 0;            // K; dof < dim leaves dim-dof structurally zero eigenvalues
    std::uint64_t draws_per_min = 1;  // 2^{KB}
    std::uint64_t trials = 1;
};

inline CMat sample_wishart(int dim, int dof, TrialRng& rng) {
    const CMat x = rng.cgaussian_matrix(dim, dof);
    return x * x.adjoint();
}

struct MinRhoEstimate {
    double mean = 0.0;
    double std_err = 0.0;
};

inline constexpr std::uint64_t default_wishart_budget = 1'000'000'000ULL;

/// Mean over trials of the minimum rho_K across `draws_per_min` Wishart draws.
/// `pool_sizes` must be ascending; one estimate is returned per pool size,
/// each reusing the leading draws of the same stream (nested pools), so the
/// minima are monotone in the pool size by construction.
inline std::vector<MinRhoEstimate> min_rho_nested(const WishartSpec& spec,
                                                  std::uint64_t seed,
                                                  const std::vector<std::uint64_t>& pool_sizes,
                                                  std::uint64_t budget = default_wishart_budget) {
    if (spec.trials < 1) throw InvalidConfigError("wishart trials must be >= 1");
    const std::uint64_t max_pool = pool_sizes.back();
    if (max_pool * spec.trials > budget)
        throw BudgetExceededError("wishart draw budget exceeded");

    const std::size_t np = pool_sizes.size();
    std::vector<double> sum(np, 0.0), sumsq(np, 0.0);
    for (std::uint64_t t = 0; t < spec.trials; ++t) {
        TrialRng rng(seed, t, StreamTag::wishart);
        double running_min = std::numeric_limits<double>::infinity();
        std::size_t p = 0;
        for (std::uint64_t d = 0; d < max_pool && p < np; ++d) {
            const CMat a = sample_wishart(spec.dim, spec.dof, rng);
            const double rho = rho_k(a, spec.dof);
            if (rho < running_min) running_min = rho;
            while (p < np && d + 1 == pool_sizes[p]) {
                sum[p] += running_min;
                sumsq[p] += running_min * running_min;
                ++p;
            }
        }
    }
    std::vector<MinRhoEstimate> out(np);
    const double n = static_cast<double>(spec.trials);
    for (std::size_t p = 0; p < np; ++p) {
        out[p].mean = sum[p] / n;
        if (spec.trials > 1) {
            const double var = (sumsq[p] - sum[p] * sum[p] / n) / (n - 1.0);
            out[p].std_err = std::sqrt(std::max(var, 0.0) / n);
        }
    }
    return out;
}

inline MinRhoEstimate min_rho_expectation(const WishartSpec& spec, std::uint64_t seed,
                                          std::uint64_t budget = default_wishart_budget) {
    return min_rho_nested(spec, seed, {spec.draws_per_min}, budget).front();
}

/// Upper bound on the average per-user throughput loss.
inline double loss_upper_bound(double snr_linear, double emin) {
    return std::log2(1.0 + snr_linear * emin);
}

/// Lower bound on the average per-user throughput.
inline double rate_lower_bound(double mean_pfb_rate, double snr_linear, double emin) {
    return mean_pfb_rate - loss_upper_bound(snr_linear, emin);
}

/// Dominant-term flop model of the joint quantizer search.
inline std::uint64_t flop_estimate(const SystemConfig& cfg) {
    cfg.validate();
    return cfg.compound_size() * static_cast<std::uint64_t>(cfg.n_r) * cfg.k_users *
           static_cast<std::uint64_t>(3 * cfg.n_t + cfg.k_users - 1);
}

}  // namespace iafb
