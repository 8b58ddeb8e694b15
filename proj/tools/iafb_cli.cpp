// Command-line front end: Monte Carlo sweeps, analytic bound curves and a
// quick invariant self-check. CSV goes to --out, metadata to stderr.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "iafb/iafb.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid_config = 2;
constexpr int exit_budget_exceeded = 3;
constexpr int exit_degenerate_run = 4;

struct CommonOpts {
    int n_t = 3, n_r = 3, k = 2, b = 4;
    std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--nt", o.n_t, "transmit antennas per user");
    cmd->add_option("--nr", o.n_r, "receive antennas per BS");
    cmd->add_option("--k", o.k, "users per cell");
    cmd->add_option("--b", o.b, "feedback bits per user");
    cmd->add_option("--snr-db", o.snr_db, "SNR points in dB")->delimiter(',');
    cmd->add_option("--trials", o.trials, "Monte Carlo trials");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output CSV path")->required();
}

void write_output(const std::string& path, const std::string& csv) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << csv;
}

void warn_regime(const iafb::SystemConfig& cfg) {
    if (!cfg.in_validated_regime())
        std::cerr << "warning: configuration outside the validated regime K < N_r < 2K\n";
}

int run_simulate(const CommonOpts& o, const std::vector<std::string>& scheme_tags,
                 std::uint64_t flop_cap, int threads) {
    iafb::SweepSpec spec;
    spec.cfg = {o.n_t, o.n_r, o.k, o.b};
    spec.snr_db = o.snr_db;
    spec.trials = o.trials;
    spec.seed = o.seed;
    spec.flop_cap = flop_cap;
    spec.threads = threads;
    for (const auto& tag : scheme_tags) spec.schemes.push_back(iafb::parse_scheme(tag));
    warn_regime(spec.cfg);
    const auto records = iafb::run_sweep(spec);
    write_output(o.out, iafb::to_csv(records));
    std::cerr << "wrote " << records.size() << " rows to " << o.out
              << " (search flops/trial: " << iafb::flop_estimate(spec.cfg) << ")\n";
    return exit_ok;
}

int run_bound(const CommonOpts& o) {
    iafb::SweepSpec spec;
    spec.cfg = {o.n_t, o.n_r, o.k, o.b};
    spec.snr_db = o.snr_db;
    spec.trials = o.trials;
    spec.seed = o.seed;
    spec.schemes = {iafb::Scheme::perfect_feedback, iafb::Scheme::lower_bound};
    warn_regime(spec.cfg);
    auto records = iafb::run_sweep(spec);

    // add the loss-bound curve itself (summed over both cells' users)
    iafb::WishartSpec ws{spec.cfg.n_r, spec.cfg.k_users, spec.cfg.compound_size(),
                         spec.trials};
    const iafb::MinRhoEstimate emin = iafb::min_rho_expectation(ws, spec.seed);
    const double users = 2.0 * spec.cfg.k_users;
    for (double snr_db : spec.snr_db) {
        const double snr = iafb::db_to_linear(snr_db);
        iafb::SweepRecord r;
        r.scheme = "loss-upper-bound";
        r.snr_db = snr_db;
        r.mean_sum_rate = users * iafb::loss_upper_bound(snr, emin.mean);
        r.std_err = users * snr / ((1.0 + snr * emin.mean) * std::numbers::ln2) * emin.std_err;
        r.trials = spec.trials;
        records.push_back(std::move(r));
    }
    std::sort(records.begin(), records.end(),
              [](const iafb::SweepRecord& a, const iafb::SweepRecord& b) {
                  return a.scheme != b.scheme ? a.scheme < b.scheme : a.snr_db < b.snr_db;
              });
    write_output(o.out, iafb::to_csv(records));
    std::cerr << "wrote " << records.size() << " rows to " << o.out
              << " (E[min rho] = " << emin.mean << " +/- " << emin.std_err << ")\n";
    return exit_ok;
}

int run_selftest() {
    using namespace iafb;
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };

    {
        std::mt19937 gen(1);
        std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
        bool ok = true;
        for (int it = 0; it < 200; ++it) {
            std::vector<CMat> cross;
            std::vector<CVec> v;
            for (int n = 0; n < 2; ++n) {
                CMat m(3, 3);
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) m(r, c) = cplx(nd(gen), nd(gen));
                cross.push_back(m);
                CVec x(3);
                for (int r = 0; r < 3; ++r) x(r) = cplx(nd(gen), nd(gen));
                x.normalize();
                v.push_back(x);
            }
            const CMat a = interference_gram(cross, v);
            const CMat u = optimal_receive_basis(a, 2);
            if (std::abs(residual_ici(u, cross, v) - rho_k(a, 2)) > 1e-7) ok = false;
        }
        check("residual at optimal basis equals rho_K (200 instances)", ok);
    }
    {
        SweepSpec spec;
        spec.cfg = {3, 3, 2, 2};
        spec.snr_db = {10.0};
        spec.trials = 30;
        spec.seed = 7;
        bool ok = true;
        for (std::uint64_t t = 0; t < spec.trials; ++t) {
            const TrialOutcome o =
                run_trial(spec, t, {Scheme::proposed, Scheme::baseline_chordal});
            for (int i = 0; i < 2; ++i) {
                if (o.per_scheme[0].cell_rho[i] > o.per_scheme[1].cell_rho[i] + 1e-9)
                    ok = false;
                for (int k = 0; k < 2; ++k)
                    if (o.per_scheme[0].links[i * 2 + k].ici >
                        o.per_scheme[0].cell_rho[i] + 1e-9)
                        ok = false;
            }
        }
        check("joint quantizer dominates chordal; per-user ICI bounded (30 trials)", ok);
    }
    {
        SweepSpec spec;
        spec.cfg = {3, 3, 2, 2};
        spec.snr_db = {0.0, 20.0};
        spec.trials = 40;
        spec.seed = 11;
        spec.schemes = {Scheme::proposed, Scheme::perfect_feedback};
        const std::string a = to_csv(run_sweep(spec));
        spec.threads = 4;
        const std::string b = to_csv(run_sweep(spec));
        check("sweep determinism across worker counts", a == b);
    }
    {
        const WishartSpec ws{3, 2, 64, 200};
        const auto est = min_rho_nested(ws, 5, {1, 8, 64});
        check("nested Wishart minima monotone",
              est[1].mean <= est[0].mean && est[2].mean <= est[1].mean);
    }
    return failures == 0 ? exit_ok : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"limited-feedback interference alignment simulator (two-cell MIMO uplink)"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    std::vector<std::string> scheme_tags{"proposed", "baseline-chordal", "perfect-feedback",
                                         "lower-bound"};
    std::uint64_t flop_cap = iafb::default_flop_cap;
    int threads = 1;
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo throughput sweep");
    add_common(sim, sim_opts);
    sim->add_option("--schemes", scheme_tags,
                    "schemes: proposed, baseline-chordal, perfect-feedback, lower-bound")
        ->delimiter(',');
    sim->add_option("--flop-cap", flop_cap, "search flop budget (flops/trial x trials)");
    sim->add_option("--threads", threads, "worker threads (output is worker-count invariant)");

    CommonOpts bound_opts;
    CLI::App* bound = app.add_subcommand("bound", "throughput-loss bound curves");
    add_common(bound, bound_opts);

    CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(sim_opts, scheme_tags, flop_cap, threads);
        if (bound->parsed()) return run_bound(bound_opts);
        if (selftest->parsed()) return run_selftest();
    } catch (const iafb::InvalidConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return exit_invalid_config;
    } catch (const iafb::BudgetExceededError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return exit_budget_exceeded;
    } catch (const iafb::DegenerateRunError& e) {
        std::cerr << "degenerate run: " << e.what() << "\n";
        return exit_degenerate_run;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_ok;
}
