// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers: the per-block TDMA trial, the brute-force arm oracle,
// the learning loop with regret tracking, the policy sweep, and CSV output.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "thzsim/bandit.hpp"
#include "thzsim/beam_training.hpp"
#include "thzsim/scenario.hpp"

namespace thzsim {

// Substream purposes for the documented seed-splitting rule
// derive_seed(master, purpose, snr_key, unit). snr_key is the transmit SNR
// in milli-dB so distinct sweep points never share a stream.
enum StreamPurpose : std::uint64_t {
    kOracleStream = 1, // unit = arm index
    kLearnStream = 2,  // unit = run index
    kSweepStream = 3,  // unit = policy id
    kSweepLearnStream = 4 // unit = learning-run index within the sweep
};

inline std::uint64_t snr_stream_key(double snr_db) {
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(snr_db * 1000.0)) + (1LL << 40));
}

// One transmission block: fresh channels per hop, sequential (TDMA)
// training at the arm's levels, and the resulting instantaneous reward.
struct TrialResult {
    std::size_t arm_index = 0;
    std::vector<TrainingOutcome> hops;
    double snr_min = 0.0;
    int overhead = 0;
    double reward = 0.0; // bps/Hz
    bool any_miss = false;
};

inline TrialResult run_trial(const Scenario& scn, std::size_t arm_index,
                             double transmit_snr_db, RandomStream& rng,
                             std::ostream* trace = nullptr) {
    const Arm& arm = scn.arms().at(arm_index);
    const LevelVector levels = arm.training_levels(scn.max_levels());
    const MultiHopTopology& topo = scn.topology();

    TrialResult result;
    result.arm_index = arm_index;
    result.hops.reserve(levels.size());
    std::vector<double> snrs(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const int near_ue = topo.src + static_cast<int>(k); // 1-based
        const LinkBudget budget = scn.hop_budget(static_cast<int>(k), transmit_snr_db);
        const ChannelRealization ch = sample_channel(scn.config().sigma_beta, rng);
        TrainingOutcome outcome =
            train_hop(ch, scn.codebook(near_ue), scn.codebook(near_ue + 1), levels[k],
                      budget, scn.detector(), rng, trace);
        snrs[k] = outcome.post_snr;
        result.any_miss = result.any_miss || outcome.miss_detected;
        result.hops.push_back(std::move(outcome));
    }
    result.snr_min = *std::min_element(snrs.begin(), snrs.end());
    result.overhead = training_overhead(levels, topo);
    result.reward = multihop_rate(snrs, levels, topo, scn.frame().slots,
                                  scn.snr_threshold_linear(), OutageMode::instantaneous);
    return result;
}

// Per-arm expected rewards from independent Monte Carlo, with standard
// errors; the optimal arm breaks ties toward the lexicographically
// smallest arm (= smallest index, as arms are enumerated in that order).
struct OracleResult {
    std::vector<double> mean;
    std::vector<double> std_error;
    std::size_t best = 0;
};

inline OracleResult oracle_arm_means(const Scenario& scn, double transmit_snr_db,
                                     int samples, std::uint64_t master_seed) {
    if (samples < 1) {
        throw std::invalid_argument("oracle_arm_means: samples must be >= 1");
    }
    const std::size_t num_arms = scn.arms().size();
    OracleResult out;
    out.mean.resize(num_arms, 0.0);
    out.std_error.resize(num_arms, 0.0);
    const std::uint64_t key = snr_stream_key(transmit_snr_db);
    for (std::size_t a = 0; a < num_arms; ++a) {
        RandomStream rng = RandomStream::substream(master_seed, kOracleStream, key, a);
        double mean = 0.0;
        double m2 = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double r = run_trial(scn, a, transmit_snr_db, rng).reward;
            const double delta = r - mean;
            mean += delta / static_cast<double>(i + 1);
            m2 += delta * (r - mean);
        }
        out.mean[a] = mean;
        out.std_error[a] =
            samples > 1 ? std::sqrt(m2 / (static_cast<double>(samples) - 1.0) /
                                    static_cast<double>(samples))
                        : 0.0;
    }
    out.best = 0;
    for (std::size_t a = 1; a < num_arms; ++a) {
        if (out.mean[a] > out.mean[out.best]) {
            out.best = a;
        }
    }
    return out;
}

// Learning outcome over independent runs. avg_regret[t-1] is the
// run-averaged cumulative regret divided by t (expected-reward convention,
// with per-arm expected rewards from the oracle); instantaneous_regret is
// the run-averaged per-trial shortfall at trial t.
struct LearningResult {
    std::vector<double> avg_regret;
    std::vector<double> instantaneous_regret;
    std::vector<double> realized_regret;     // as avg_regret, but against the
                                             // realized instantaneous rewards
    std::vector<std::uint64_t> total_pulls;  // per arm, summed over runs
    std::vector<double> pooled_mean;         // pull-weighted mean reward per arm
    std::vector<int> output_arm_counts;      // runs whose final best arm is this arm
    std::size_t modal_output_arm = 0;
    OracleResult oracle;
};

inline LearningResult run_learning(const Scenario& scn, double transmit_snr_db) {
    const ScenarioConfig& cfg = scn.config();
    const std::size_t num_arms = scn.arms().size();
    const int trials = cfg.trials;
    const int runs = cfg.runs;

    LearningResult res;
    res.oracle = oracle_arm_means(scn, transmit_snr_db, cfg.oracle_samples, cfg.seed);
    res.avg_regret.assign(static_cast<std::size_t>(trials), 0.0);
    res.instantaneous_regret.assign(static_cast<std::size_t>(trials), 0.0);
    res.total_pulls.assign(num_arms, 0);
    res.pooled_mean.assign(num_arms, 0.0);
    res.output_arm_counts.assign(num_arms, 0);

    const double optimal = res.oracle.mean[res.oracle.best];
    const std::uint64_t key = snr_stream_key(transmit_snr_db);
    std::vector<double> weighted_mean(num_arms, 0.0);

    for (int run = 0; run < runs; ++run) {
        RandomStream rng = RandomStream::substream(cfg.seed, kLearnStream, key,
                                                   static_cast<std::uint64_t>(run));
        BanditState state(num_arms, cfg.epsilon0);
        double cum = 0.0;
        for (int t = 1; t <= trials; ++t) {
            const std::size_t arm = state.select_arm(rng);
            state.update_epsilon();
            const TrialResult trial = run_trial(scn, arm, transmit_snr_db, rng);
            state.update_reward(arm, trial.reward);
            const double gap = optimal - res.oracle.mean[arm];
            cum += gap;
            res.avg_regret[static_cast<std::size_t>(t - 1)] += cum / t;
            res.instantaneous_regret[static_cast<std::size_t>(t - 1)] += gap;
        }
        for (std::size_t a = 0; a < num_arms; ++a) {
            res.total_pulls[a] += state.pulls()[a];
            weighted_mean[a] += state.means()[a] * static_cast<double>(state.pulls()[a]);
        }
        res.output_arm_counts[state.best_mean_arm()] += 1;
    }
    for (auto& v : res.avg_regret) {
        v /= runs;
    }
    for (auto& v : res.instantaneous_regret) {
        v /= runs;
    }
    for (std::size_t a = 0; a < num_arms; ++a) {
        res.pooled_mean[a] = res.total_pulls[a] > 0
                                 ? weighted_mean[a] / static_cast<double>(res.total_pulls[a])
                                 : 0.0;
    }
    res.modal_output_arm = static_cast<std::size_t>(
        std::max_element(res.output_arm_counts.begin(), res.output_arm_counts.end()) -
        res.output_arm_counts.begin());
    return res;
}

// One (transmit SNR, policy) cell of the sweep.
struct SweepCell {
    double snr_db = 0.0;
    PolicyKind policy = PolicyKind::fixed;
    double mean_rate = 0.0;
    double std_error = 0.0;
    double p_miss = 0.0;
    std::vector<double> rates; // per evaluated block, unsorted
};

struct ExperimentReport {
    std::vector<SweepCell> cells;

    const SweepCell& cell(double snr_db, PolicyKind policy) const {
        for (const SweepCell& c : cells) {
            if (c.policy == policy && std::abs(c.snr_db - snr_db) < 1e-9) {
                return c;
            }
        }
        throw std::out_of_range("ExperimentReport: no such cell");
    }
};

// Evaluates the three policies at each transmit SNR over fresh blocks. The
// dynamic policy is trained first (a few independent runs of the full
// learning loop) and evaluated greedily on the learned means, blocks split
// evenly across the trained runs.
inline ExperimentReport run_sweep(const Scenario& scn) {
    const ScenarioConfig& cfg = scn.config();
    const std::size_t num_arms = scn.arms().size();
    ExperimentReport report;

    for (const double snr_db : cfg.snr_list_db) {
        const std::uint64_t key = snr_stream_key(snr_db);

        // train the dynamic policy
        const int learn_runs = std::clamp(cfg.runs, 1, 10);
        std::vector<std::size_t> learned_arm(static_cast<std::size_t>(learn_runs), 0);
        for (int run = 0; run < learn_runs; ++run) {
            RandomStream rng = RandomStream::substream(cfg.seed, kSweepLearnStream, key,
                                                       static_cast<std::uint64_t>(run));
            BanditState state(num_arms, cfg.epsilon0);
            for (int t = 1; t <= cfg.trials; ++t) {
                const std::size_t arm = state.select_arm(rng);
                state.update_epsilon();
                state.update_reward(arm, run_trial(scn, arm, snr_db, rng).reward);
            }
            learned_arm[static_cast<std::size_t>(run)] = state.best_mean_arm();
        }

        for (const PolicyKind policy :
             {PolicyKind::fixed, PolicyKind::random, PolicyKind::dynamic}) {
            RandomStream rng = RandomStream::substream(
                cfg.seed, kSweepStream, key, static_cast<std::uint64_t>(policy));
            SweepCell cell;
            cell.snr_db = snr_db;
            cell.policy = policy;
            cell.rates.reserve(static_cast<std::size_t>(cfg.sweep_blocks));
            double mean = 0.0;
            double m2 = 0.0;
            int misses = 0;
            for (int b = 0; b < cfg.sweep_blocks; ++b) {
                std::size_t arm = scn.fixed_arm_index();
                if (policy == PolicyKind::random) {
                    arm = static_cast<std::size_t>(rng.uniform_index(num_arms));
                } else if (policy == PolicyKind::dynamic) {
                    arm = learned_arm[static_cast<std::size_t>(b) %
                                      static_cast<std::size_t>(learn_runs)];
                }
                const TrialResult trial = run_trial(scn, arm, snr_db, rng);
                cell.rates.push_back(trial.reward);
                misses += trial.any_miss ? 1 : 0;
                const double delta = trial.reward - mean;
                mean += delta / static_cast<double>(b + 1);
                m2 += delta * (trial.reward - mean);
            }
            cell.mean_rate = mean;
            cell.std_error = cfg.sweep_blocks > 1
                                 ? std::sqrt(m2 / (cfg.sweep_blocks - 1.0) / cfg.sweep_blocks)
                                 : 0.0;
            cell.p_miss = static_cast<double>(misses) / cfg.sweep_blocks;
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

// ---- CSV output ---------------------------------------------------------

inline void write_regret_csv(std::ostream& os, const LearningResult& res) {
    os << "t,avg_regret\n";
    os.precision(17);
    for (std::size_t t = 0; t < res.avg_regret.size(); ++t) {
        os << t + 1 << ',' << res.avg_regret[t] << '\n';
    }
}

inline void write_arms_csv(std::ostream& os, const LearningResult& res,
                           std::span<const Arm> arms) {
    os << "arm,pulls,mean\n";
    os.precision(17);
    for (std::size_t a = 0; a < arms.size(); ++a) {
        os << arms[a].to_string() << ',' << res.total_pulls[a] << ','
           << res.pooled_mean[a] << '\n';
    }
}

inline void write_oracle_csv(std::ostream& os,
                             std::span<const std::pair<double, OracleResult>> entries,
                             std::span<const Arm> arms) {
    os << "snr_db,arm,mean,stderr,best\n";
    os.precision(17);
    for (const auto& [snr_db, oracle] : entries) {
        for (std::size_t a = 0; a < arms.size(); ++a) {
            os << snr_db << ',' << arms[a].to_string() << ',' << oracle.mean[a] << ','
               << oracle.std_error[a] << ',' << (a == oracle.best ? 1 : 0) << '\n';
        }
    }
}

inline void write_rate_vs_snr_csv(std::ostream& os, const ExperimentReport& report) {
    os << "snr_db,policy,mean_rate,stderr\n";
    os.precision(17);
    for (const SweepCell& c : report.cells) {
        os << c.snr_db << ',' << to_string(c.policy) << ',' << c.mean_rate << ','
           << c.std_error << '\n';
    }
}

inline void write_miss_csv(std::ostream& os, const ExperimentReport& report) {
    os << "snr_db,policy,p_miss\n";
    os.precision(17);
    for (const SweepCell& c : report.cells) {
        os << c.snr_db << ',' << to_string(c.policy) << ',' << c.p_miss << '\n';
    }
}

// Empirical CDF at one transmit SNR: each sorted block rate r_i contributes
// the row (policy, r_i, (i+1)/n), a right-continuous step function.
inline void write_rate_cdf_csv(std::ostream& os, const ExperimentReport& report,
                               double cdf_snr_db) {
    os << "policy,rate,cdf\n";
    os.precision(17);
    for (const PolicyKind policy :
         {PolicyKind::fixed, PolicyKind::random, PolicyKind::dynamic}) {
        const SweepCell& c = report.cell(cdf_snr_db, policy);
        std::vector<double> sorted = c.rates;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            os << to_string(policy) << ',' << sorted[i] << ','
               << static_cast<double>(i + 1) / static_cast<double>(sorted.size()) << '\n';
        }
    }
}

} // namespace thzsim
