#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specgame/analysis.hpp"
#include "specgame/config.hpp"
#include "specgame/market.hpp"

namespace specgame::experiments {

// Multi-trial protocol. Trial i runs with seed master_seed + i; trials are
// independent jobs, so a worker pool reproduces the sequential results
// bit-for-bit.
struct ExperimentSpec {
    GameConfig base;
    std::size_t n_trials = 100;
    std::vector<double> pb_grid;
    std::uint64_t master_seed = 1;
    std::string output_dir = ".";
    std::size_t n_threads = 0;  // 0 = hardware concurrency

    static ExperimentSpec from_json_file(const std::string& path);
};

struct EnsembleResult {
    GameConfig config;
    std::vector<std::uint64_t> seeds;
    std::vector<std::size_t> taus;
    std::vector<std::vector<double>> trial_sigmas;  // [trial][tau index]
    std::vector<double> avg_sigma;
    analysis::HurstFit fit;            // fit of the trial-averaged sigma table
    std::vector<double> trial_hurst;   // per-trial fits, for ensemble error bars
    double hurst_stderr = 0.0;
    std::vector<double> trial_kurtosis_h1;
    std::vector<double> trial_kurtosis_h100;
    std::vector<double> trial_max_abs_dev;  // max |p(t) - p(0)| per trial
    analysis::AcfResult avg_return_acf;     // trial-averaged, horizon-1 returns
    analysis::AcfResult avg_abs_return_acf;
    std::vector<double> pooled_returns_h1;  // all trials' horizon-1 returns
    PriceSeries first_trial_prices;
    std::vector<PriceSeries> series;  // per-trial, only when keep_series

    double mean_kurtosis_h1() const;
    double mean_kurtosis_h100() const;
    double mean_max_abs_dev() const;
};

struct SweepResult {
    std::vector<double> pb_values;
    std::vector<EnsembleResult> ensembles;
};

EnsembleResult run_ensemble(const GameConfig& config, std::size_t n_trials,
                            std::uint64_t master_seed, std::size_t n_threads = 0,
                            bool keep_series = false, std::size_t acf_max_lag = 20);

// run_ensemble per grid value, same master seed each, so the pb = 0 entry
// reproduces the baseline ensemble exactly.
SweepResult sweep_pb(const ExperimentSpec& spec);

// sweep.csv (pb,hurst,r2,excess_kurtosis) + per-pb histogram files + manifest.
std::vector<std::string> write_sweep_outputs(const SweepResult& sweep,
                                             const ExperimentSpec& spec);

// One CSV per figure: price trajectories (pb 0 and 0.25), sigma scaling with
// fitted line at both perturbations, histograms across pb, and hurst vs pb.
// Requires the sweep grid to contain 0, 0.25, 0.5 and 0.75.
std::vector<std::string> emit_figure_data(const SweepResult& sweep,
                                          const ExperimentSpec& spec);

} // namespace specgame::experiments
