// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: per-arm oracle estimates, the learning loop with the
// regret curve, the policy sweep across transmit SNRs, and codebook export.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "thzsim/thzsim.hpp"

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::ofstream os(dir / name);
    if (!os) {
        throw std::runtime_error("cannot open output file: " + (dir / name).string());
    }
    return os;
}

void write_manifest(const fs::path& dir, const CLI::App& app) {
    std::ofstream os(dir / "manifest");
    os << "# resolved configuration (defaults included)\n";
    os << app.config_to_str(true, true);
}

double snap_to_list(double wanted, const std::vector<double>& list) {
    double best = list.front();
    for (double v : list) {
        if (std::abs(v - wanted) < std::abs(best - wanted)) {
            best = v;
        }
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thzsim - link-level simulator for multi-hop THz hierarchical beam "
                 "training with dynamically optimized training levels"};
    app.set_config("--config", "", "Read options from an INI-style config file");
    app.require_subcommand(1);
    app.fallthrough(); // scenario options may follow the subcommand

    thzsim::ScenarioConfig cfg;
    std::string out_dir = ".";
    std::string policy_name = "dynamic";
    double learn_snr_db = 40.0;
    double cdf_snr_db = 50.0;
    int codebook_ue = 1;

    app.add_option("--seed", cfg.seed, "Master RNG seed")->capture_default_str();
    app.add_option("--out-dir", out_dir, "Directory for CSV outputs and the manifest")
        ->capture_default_str();
    app.add_option("--ue-count", cfg.ue_count, "Number of UEs on the chain")
        ->capture_default_str();
    app.add_option("--distances", cfg.hop_distances_m, "Per-hop distances in meters")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--branching", cfg.branching,
                   "Training signals per level (s) for each UE")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--num-antennas", cfg.num_antennas, "Antennas per array (power of s)")
        ->capture_default_str();
    app.add_option("--spacing-ratio", cfg.spacing_ratio, "Antenna spacing over wavelength")
        ->capture_default_str();
    app.add_option("--omega", cfg.phase_shift, "Codebook phase shift in radians")
        ->capture_default_str();
    app.add_option("--sigma-beta", cfg.sigma_beta, "Channel gain standard deviation")
        ->capture_default_str();
    app.add_option("--carrier-freq", cfg.carrier_frequency_hz, "Carrier frequency in Hz")
        ->capture_default_str();
    app.add_option("--scs", cfg.subcarrier_spacing_hz, "Subcarrier spacing in Hz")
        ->capture_default_str();
    app.add_option("--speed-kmh", cfg.max_speed_kmh, "Maximum UE speed in km/h")
        ->capture_default_str();
    app.add_option("--snr-list", cfg.snr_list_db, "Transmit SNR points in dB")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--noise-psd", cfg.noise_psd_dbm_hz, "Noise PSD in dBm/Hz")
        ->capture_default_str();
    app.add_option("--bandwidth", cfg.bandwidth_hz, "System bandwidth in Hz")
        ->capture_default_str();
    app.add_option("--path-loss-exponent", cfg.path_loss_exponent, "Path loss exponent")
        ->capture_default_str();
    app.add_option("--ref-distance", cfg.reference_distance_m,
                   "Free-space reference distance in meters")
        ->capture_default_str();
    app.add_option("--mf-length", cfg.matched_filter_length,
                   "Matched-filter length in samples (linear SNR gain)")
        ->capture_default_str();
    app.add_option("--snr-threshold", cfg.snr_threshold_db, "Outage SNR threshold in dB")
        ->capture_default_str();
    app.add_option("--pfa", cfg.p_fa, "Detector probability of false alarm")
        ->capture_default_str();
    app.add_option("--eps0", cfg.epsilon0, "Initial exploration rate")
        ->capture_default_str();
    app.add_option("--trials", cfg.trials, "Bandit trials per learning run")
        ->capture_default_str();
    app.add_option("--runs", cfg.runs, "Independent learning runs")
        ->capture_default_str();
    app.add_option("--oracle-samples", cfg.oracle_samples,
                   "Monte Carlo samples per arm for the oracle")
        ->capture_default_str();
    app.add_option("--blocks", cfg.sweep_blocks, "Evaluation blocks per sweep cell")
        ->capture_default_str();
    app.add_option("--policy", policy_name, "Policy: dynamic, fixed or random")
        ->check(CLI::IsMember({"dynamic", "fixed", "random"}))
        ->capture_default_str();
    bool trace = false;
    app.add_flag("--trace", trace,
                 "Also write trace.csv with the per-level measurements of one "
                 "diagnostic full-training block");

    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "Estimate per-arm expected rewards by brute force");
    CLI::App* learn_cmd = app.add_subcommand(
        "learn", "Run the epsilon-decay learning loop and write the regret curve");
    learn_cmd->add_option("--snr", learn_snr_db, "Transmit SNR in dB for learning")
        ->capture_default_str();
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Evaluate all policies across the transmit SNR list");
    sweep_cmd->add_option("--cdf-snr", cdf_snr_db,
                          "Transmit SNR in dB at which to export the rate CDF")
        ->capture_default_str();
    CLI::App* codebook_cmd =
        app.add_subcommand("codebook", "Export the multi-resolution codebook as CSV");
    codebook_cmd->add_option("--ue", codebook_ue, "UE whose codebook to export (1-based)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.policy = thzsim::policy_from_string(policy_name);
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        const thzsim::Scenario scenario(cfg);
        std::cout.precision(6);

        if (trace) {
            auto os = open_output(dir, "trace.csv");
            os << "side,level,candidate,power,winner,detected\n";
            thzsim::RandomStream rng =
                thzsim::RandomStream::substream(cfg.seed, 99);
            thzsim::run_trial(scenario, scenario.fixed_arm_index(),
                              cfg.snr_list_db.front(), rng, &os);
        }

        if (*codebook_cmd) {
            auto os = open_output(dir, "codebook.csv");
            thzsim::write_codebook_csv(scenario.codebook(codebook_ue), os);
            write_manifest(dir, app);
            std::cout << "wrote codebook.csv for UE " << codebook_ue << " ("
                      << scenario.codebook(codebook_ue).num_levels() << " levels)\n";
        } else if (*oracle_cmd) {
            std::vector<std::pair<double, thzsim::OracleResult>> entries;
            for (double snr : cfg.snr_list_db) {
                entries.emplace_back(
                    snr, thzsim::oracle_arm_means(scenario, snr, cfg.oracle_samples,
                                                  cfg.seed));
            }
            auto os = open_output(dir, "oracle.csv");
            thzsim::write_oracle_csv(os, entries, scenario.arms());
            write_manifest(dir, app);
            for (const auto& [snr, oracle] : entries) {
                std::cout << "snr " << std::setw(5) << snr << " dB: best arm "
                          << scenario.arms()[oracle.best].to_string() << " mean "
                          << oracle.mean[oracle.best] << " bps/Hz\n";
            }
        } else if (*learn_cmd) {
            if (cfg.policy != thzsim::PolicyKind::dynamic) {
                throw std::invalid_argument("learn requires --policy dynamic");
            }
            const thzsim::LearningResult res =
                thzsim::run_learning(scenario, learn_snr_db);
            {
                auto os = open_output(dir, "regret.csv");
                thzsim::write_regret_csv(os, res);
            }
            {
                auto os = open_output(dir, "arms.csv");
                thzsim::write_arms_csv(os, res, scenario.arms());
            }
            write_manifest(dir, app);
            std::cout << "learning at " << learn_snr_db << " dB over " << cfg.runs
                      << " runs x " << cfg.trials << " trials\n";
            std::cout << "output arm (modal over runs): "
                      << scenario.arms()[res.modal_output_arm].to_string() << "\n";
            std::cout << "oracle best arm: "
                      << scenario.arms()[res.oracle.best].to_string() << " mean "
                      << res.oracle.mean[res.oracle.best] << " bps/Hz\n";
            std::cout << "avg regret after " << cfg.trials << " trials: "
                      << res.avg_regret.back() << "\n";
        } else if (*sweep_cmd) {
            const thzsim::ExperimentReport report = thzsim::run_sweep(scenario);
            {
                auto os = open_output(dir, "rate_vs_snr.csv");
                thzsim::write_rate_vs_snr_csv(os, report);
            }
            {
                auto os = open_output(dir, "miss.csv");
                thzsim::write_miss_csv(os, report);
            }
            const double cdf_at = snap_to_list(cdf_snr_db, cfg.snr_list_db);
            {
                auto os = open_output(dir, "rate_cdf.csv");
                thzsim::write_rate_cdf_csv(os, report, cdf_at);
            }
            write_manifest(dir, app);
            if (cdf_at != cdf_snr_db) {
                std::cout << "note: CDF exported at " << cdf_at
                          << " dB (nearest point in --snr-list)\n";
            }
            for (const thzsim::SweepCell& c : report.cells) {
                std::cout << "snr " << std::setw(5) << c.snr_db << " dB  "
                          << std::setw(7) << thzsim::to_string(c.policy) << "  rate "
                          << c.mean_rate << " +- " << c.std_error << "  p_miss "
                          << c.p_miss << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
