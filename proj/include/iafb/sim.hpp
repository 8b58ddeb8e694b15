#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "iafb/channel.hpp"
#include "iafb/codebook.hpp"
#include "iafb/linalg.hpp"
#include "iafb/rxdesign.hpp"
#include "iafb/theory.hpp"
#include "iafb/txdesign.hpp"

namespace iafb {

struct DegenerateRunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scheme { proposed, baseline_chordal, perfect_feedback, lower_bound };

inline const char* scheme_tag(Scheme s) {
    switch (s) {
        case Scheme::proposed: return "proposed";
        case Scheme::baseline_chordal: return "baseline-chordal";
        case Scheme::perfect_feedback: return "perfect-feedback";
        case Scheme::lower_bound: return "lower-bound";
    }
    return "?";
}

inline Scheme parse_scheme(const std::string& tag) {
    if (tag == "proposed") return Scheme::proposed;
    if (tag == "baseline-chordal") return Scheme::baseline_chordal;
    if (tag == "perfect-feedback") return Scheme::perfect_feedback;
    if (tag == "lower-bound") return Scheme::lower_bound;
    throw InvalidConfigError("unknown scheme tag: " + tag);
}

inline constexpr std::uint64_t default_flop_cap = 100'000'000'000ULL;
inline constexpr int max_redraws_per_trial = 16;

struct SweepSpec {
    SystemConfig cfg;
    std::vector<double> snr_db;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    std::vector<Scheme> schemes;
    std::uint64_t flop_cap = default_flop_cap;
    int threads = 1;

    void validate() const {
        cfg.validate();
        if (trials < 1) throw InvalidConfigError("trials must be >= 1");
        if (snr_db.empty()) throw InvalidConfigError("snr_db list must be non-empty");
        if (schemes.empty()) throw InvalidConfigError("scheme list must be non-empty");
        for (Scheme s : schemes)
            if (s != Scheme::proposed && cfg.n_t != cfg.n_r)
                throw InvalidConfigError(
                    std::string(scheme_tag(s)) + " requires n_t = n_r");
        if (cfg.n_r <= cfg.k_users)
            throw InvalidConfigError("n_r must exceed k_users");
    }
};

struct SweepRecord {
    std::string scheme;
    double snr_db = 0.0;
    double mean_sum_rate = 0.0;
    double std_err = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t redraws = 0;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Per-user post-filter powers; rates at any SNR follow from these.
struct UserLink {
    double sig = 0.0;
    double ici = 0.0;
};

struct SchemeTrial {
    std::array<double, 2> cell_rho{};  // overall residual ICI per BS
    std::vector<UserLink> links;       // 2K entries, cell-major
    bool interference_free = false;    // perfect feedback: rate ignores ici
};

struct TrialOutcome {
    int redraws = 0;
    std::vector<SchemeTrial> per_scheme;  // parallel to the scheme list passed in
};

inline double link_rate(const UserLink& l, bool interference_free, double snr) {
    if (interference_free) return std::log2(1.0 + snr * l.sig);
    return std::log2(1.0 + snr * l.sig / (1.0 + snr * l.ici));
}

namespace detail {

inline SchemeTrial eval_quantized_chain(const SystemConfig& cfg, const ChannelSet& ch,
                                        const std::array<TxSelection, 2>& sel) {
    SchemeTrial out;
    out.links.resize(2 * cfg.k_users);
    for (int i = 0; i < 2; ++i) {
        const int ip = 1 - i;
        const CMat a = interference_gram(ch.cross[ip], sel[ip].vectors);
        const EigPairs eig = hermitian_eig_ascending(a);
        const CMat u = eig.vectors.leftCols(cfg.k_users);
        out.cell_rho[i] = eig.values.head(cfg.k_users).sum();
        const RxDesign rx = build_rx(u, ch.direct[i], sel[i].vectors, ch.cross[ip],
                                     sel[ip].vectors);
        for (int k = 0; k < cfg.k_users; ++k) {
            UserLink& l = out.links[i * cfg.k_users + k];
            l.sig = user_signal_power(rx, k, ch.direct[i][k], sel[i].vectors[k]);
            l.ici = user_interference_power(rx, k, ch.cross[ip], sel[ip].vectors);
        }
    }
    return out;
}

}  // namespace detail

/// One Monte Carlo trial: all requested schemes see the identical channel and
/// codebook realization (paired comparison), and the redraw decision on a
/// degenerate draw is shared across schemes.
inline TrialOutcome run_trial(const SweepSpec& spec, std::uint64_t trial,
                              const std::vector<Scheme>& schemes) {
    const SystemConfig& cfg = spec.cfg;
    const bool needs_ideal = std::any_of(schemes.begin(), schemes.end(), [](Scheme s) {
        return s != Scheme::proposed;
    });

    for (int attempt = 0; attempt < max_redraws_per_trial; ++attempt) {
        try {
            const ChannelSet ch = sample_channels(cfg, spec.seed, trial, attempt);
            const CodebookSet cb = generate_codebooks(cfg, spec.seed, trial, attempt);

            std::array<AlignmentTarget, 2> targets;
            std::array<std::vector<CVec>, 2> ideal;
            if (needs_ideal) {
                for (int c = 0; c < 2; ++c) {
                    targets[c] = random_alignment_target(cfg, c, spec.seed, trial, attempt);
                    ideal[c] = ideal_alignment_tb(ch.cross[c], targets[c]);
                }
            }

            TrialOutcome out;
            out.redraws = attempt;
            out.per_scheme.reserve(schemes.size());
            for (Scheme s : schemes) {
                switch (s) {
                    case Scheme::proposed: {
                        std::array<TxSelection, 2> sel;
                        for (int c = 0; c < 2; ++c)
                            sel[c] = quantize_joint(ch.cross[c], cb, c);
                        out.per_scheme.push_back(detail::eval_quantized_chain(cfg, ch, sel));
                        break;
                    }
                    case Scheme::baseline_chordal: {
                        std::array<TxSelection, 2> sel;
                        for (int c = 0; c < 2; ++c)
                            sel[c] = quantize_chordal(ideal[c], cb, c);
                        out.per_scheme.push_back(detail::eval_quantized_chain(cfg, ch, sel));
                        break;
                    }
                    case Scheme::perfect_feedback: {
                        SchemeTrial st;
                        st.interference_free = true;
                        st.links.resize(2 * cfg.k_users);
                        for (int i = 0; i < 2; ++i) {
                            const int ip = 1 - i;
                            // interference from cell ip is confined to
                            // targets[ip].basis at this BS; receive in its complement
                            const CMat& u = targets[ip].complement;
                            const RxDesign rx = build_rx(u, ch.direct[i], ideal[i],
                                                         ch.cross[ip], ideal[ip]);
                            st.cell_rho[i] = rx.residual;
                            for (int k = 0; k < cfg.k_users; ++k) {
                                UserLink& l = st.links[i * cfg.k_users + k];
                                l.sig = user_signal_power(rx, k, ch.direct[i][k], ideal[i][k]);
                                l.ici = user_interference_power(rx, k, ch.cross[ip], ideal[ip]);
                            }
                        }
                        out.per_scheme.push_back(std::move(st));
                        break;
                    }
                    case Scheme::lower_bound:
                        throw InvalidConfigError("lower-bound is not a per-trial scheme");
                }
            }
            return out;
        } catch (const SingularMatrixError&) {
            continue;  // degenerate draw, redraw the whole trial
        }
    }
    throw DegenerateRunError("trial exceeded the redraw limit");
}

inline TrialOutcome run_trial(const SweepSpec& spec, std::uint64_t trial) {
    return run_trial(spec, trial, spec.schemes);
}

inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const SystemConfig& cfg = spec.cfg;
    const bool wants = [&](Scheme s) {
        return std::find(spec.schemes.begin(), spec.schemes.end(), s) != spec.schemes.end();
    }(Scheme::lower_bound);

    if (wants || std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::proposed) !=
                     spec.schemes.end()) {
        if (flop_estimate(cfg) * spec.trials > spec.flop_cap)
            throw BudgetExceededError("joint-search flop budget exceeded");
    }

    // per-trial schemes actually simulated; lower-bound rides on perfect feedback
    std::vector<Scheme> sim_schemes;
    for (Scheme s : spec.schemes)
        if (s != Scheme::lower_bound) sim_schemes.push_back(s);
    const bool lower_bound = wants;
    if (lower_bound &&
        std::find(sim_schemes.begin(), sim_schemes.end(), Scheme::perfect_feedback) ==
            sim_schemes.end())
        sim_schemes.push_back(Scheme::perfect_feedback);

    std::vector<TrialOutcome> outcomes(spec.trials);
    const int nthreads = std::max(1, spec.threads);
    if (nthreads == 1 || spec.trials < 2) {
        for (std::uint64_t t = 0; t < spec.trials; ++t)
            outcomes[t] = run_trial(spec, t, sim_schemes);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(nthreads);
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::uint64_t t = w; t < spec.trials; t += nthreads)
                        outcomes[t] = run_trial(spec, t, sim_schemes);
                } catch (...) {
                    errs[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    std::uint64_t redraws = 0;
    for (const auto& o : outcomes) redraws += static_cast<std::uint64_t>(o.redraws);

    MinRhoEstimate emin;
    if (lower_bound) {
        WishartSpec ws{cfg.n_r, cfg.k_users, cfg.compound_size(), spec.trials};
        emin = min_rho_expectation(ws, spec.seed);
    }

    std::vector<SweepRecord> records;
    for (Scheme s : spec.schemes) {
        if (s == Scheme::lower_bound) continue;  // handled below, needs pfb stats
        const std::size_t idx = static_cast<std::size_t>(
            std::find(sim_schemes.begin(), sim_schemes.end(), s) - sim_schemes.begin());
        for (double snr_db : spec.snr_db) {
            const double snr = db_to_linear(snr_db);
            double sum = 0.0, sumsq = 0.0;
            for (const auto& o : outcomes) {
                const SchemeTrial& st = o.per_scheme[idx];
                double r = 0.0;
                for (const UserLink& l : st.links)
                    r += link_rate(l, st.interference_free, snr);
                sum += r;
                sumsq += r * r;
            }
            const double n = static_cast<double>(spec.trials);
            SweepRecord rec{scheme_tag(s), snr_db, sum / n, 0.0, spec.trials, redraws};
            if (spec.trials > 1) {
                const double var = (sumsq - sum * sum / n) / (n - 1.0);
                rec.std_err = std::sqrt(std::max(var, 0.0) / n);
            }
            records.push_back(std::move(rec));
        }
    }
    if (lower_bound) {
        const std::size_t pfb_idx = static_cast<std::size_t>(
            std::find(sim_schemes.begin(), sim_schemes.end(), Scheme::perfect_feedback) -
            sim_schemes.begin());
        const double users = 2.0 * cfg.k_users;
        for (double snr_db : spec.snr_db) {
            const double snr = db_to_linear(snr_db);
            double sum = 0.0, sumsq = 0.0;
            for (const auto& o : outcomes) {
                const SchemeTrial& st = o.per_scheme[pfb_idx];
                double r = 0.0;
                for (const UserLink& l : st.links) r += link_rate(l, true, snr);
                sum += r;
                sumsq += r * r;
            }
            const double n = static_cast<double>(spec.trials);
            const double pfb_mean = sum / n;
            double pfb_se = 0.0;
            if (spec.trials > 1) {
                const double var = (sumsq - sum * sum / n) / (n - 1.0);
                pfb_se = std::sqrt(std::max(var, 0.0) / n);
            }
            SweepRecord rec;
            rec.scheme = scheme_tag(Scheme::lower_bound);
            rec.snr_db = snr_db;
            rec.mean_sum_rate = pfb_mean - users * loss_upper_bound(snr, emin.mean);
            // propagate the emin standard error through d/d emin of the loss term
            const double demin = users * snr / ((1.0 + snr * emin.mean) * std::numbers::ln2);
            rec.std_err = std::sqrt(pfb_se * pfb_se + demin * demin * emin.std_err * emin.std_err);
            rec.trials = spec.trials;
            rec.redraws = redraws;
            records.push_back(std::move(rec));
        }
    }

    std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        if (a.scheme != b.scheme) return a.scheme < b.scheme;
        return a.snr_db < b.snr_db;
    });
    return records;
}

inline std::string format_g10(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline std::string to_csv(const std::vector<SweepRecord>& records) {
    std::string out = "scheme,snr_db,mean_sum_rate,std_err,trials,redraws\n";
    for (const auto& r : records) {
        out += r.scheme;
        out += ',';
        out += format_g10(r.snr_db);
        out += ',';
        out += format_g10(r.mean_sum_rate);
        out += ',';
        out += format_g10(r.std_err);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += std::to_string(r.redraws);
        out += '\n';
    }
    return out;
}

}  // namespace iafb
