#include "specgame/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "specgame/engine.hpp"
#include "specgame/io.hpp"
#include "specgame/version.hpp"

namespace specgame::experiments {

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

std::string format_pb(double pb) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", pb);
    return buf;
}

struct TrialOutput {
    std::vector<double> sigmas;
    double hurst = 0.0;
    double kurt_h1 = 0.0;
    double kurt_h100 = std::numeric_limits<double>::quiet_NaN();
    double max_abs_dev = 0.0;
    std::vector<double> return_acf;  // empty when the series is too short
    std::vector<double> abs_return_acf;
    std::vector<double> returns_h1;
    PriceSeries prices;
};

TrialOutput analyze_trial(const GameConfig& cfg, const std::vector<std::size_t>& taus,
                          std::size_t acf_max_lag) {
    RunResult rr = run(cfg);
    TrialOutput out;
    out.sigmas = analysis::sigma_table(rr.prices, taus);
    out.hurst = analysis::fit_loglog(taus, out.sigmas).hurst;

    out.returns_h1 = analysis::returns(rr.prices, 1);
    out.kurt_h1 = analysis::excess_kurtosis(out.returns_h1);
    if (rr.prices.size() > 100 && (rr.prices.size() - 1) / 100 >= 4)
        out.kurt_h100 = analysis::excess_kurtosis(analysis::returns(rr.prices, 100));

    const double p0 = rr.prices.front();
    for (double p : rr.prices) out.max_abs_dev = std::max(out.max_abs_dev, std::abs(p - p0));

    if (out.returns_h1.size() > acf_max_lag + 1) {
        out.return_acf = analysis::acf(out.returns_h1, acf_max_lag).values;
        std::vector<double> abs_rets(out.returns_h1.size());
        for (std::size_t i = 0; i < abs_rets.size(); ++i)
            abs_rets[i] = std::abs(out.returns_h1[i]);
        out.abs_return_acf = analysis::acf(abs_rets, acf_max_lag).values;
    }

    out.prices = std::move(rr.prices);
    return out;
}

} // namespace

double EnsembleResult::mean_kurtosis_h1() const { return mean_of(trial_kurtosis_h1); }
double EnsembleResult::mean_kurtosis_h100() const { return mean_of(trial_kurtosis_h100); }
double EnsembleResult::mean_max_abs_dev() const { return mean_of(trial_max_abs_dev); }

EnsembleResult run_ensemble(const GameConfig& config, std::size_t n_trials,
                            std::uint64_t master_seed, std::size_t n_threads,
                            bool keep_series, std::size_t acf_max_lag) {
    if (n_trials < 1) throw std::invalid_argument("run_ensemble: n_trials must be >= 1");
    config.validate();

    EnsembleResult out;
    out.config = config;
    out.taus = analysis::default_tau_grid(config.horizon + 1);
    if (out.taus.size() < 3)
        throw std::invalid_argument(
            "run_ensemble: horizon too short for a 3-point tau grid (need >= 39 steps)");

    out.seeds.resize(n_trials);
    for (std::size_t i = 0; i < n_trials; ++i) out.seeds[i] = master_seed + i;

    std::vector<TrialOutput> trials(n_trials);
    if (n_threads == 0) n_threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, n_trials);

    const auto worker_body = [&](std::size_t trial) {
        GameConfig cfg = config;
        cfg.rng_seed = out.seeds[trial];
        trials[trial] = analyze_trial(cfg, out.taus, acf_max_lag);
    };

    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n_trials; ++i) worker_body(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t w = 0; w < n_threads; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t trial = next.fetch_add(1);
                    if (trial >= n_trials) return;
                    try {
                        worker_body(trial);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    // ordered aggregation keeps parallel runs bit-identical to sequential ones
    const bool has_acf = !trials.front().return_acf.empty();
    if (has_acf) {
        out.avg_return_acf.lags.resize(acf_max_lag + 1);
        out.avg_return_acf.values.assign(acf_max_lag + 1, 0.0);
        for (std::size_t lag = 0; lag <= acf_max_lag; ++lag)
            out.avg_return_acf.lags[lag] = lag;
        out.avg_abs_return_acf = out.avg_return_acf;
    }
    out.trial_sigmas.reserve(n_trials);
    for (std::size_t i = 0; i < n_trials; ++i) {
        TrialOutput& t = trials[i];
        out.trial_sigmas.push_back(std::move(t.sigmas));
        out.trial_hurst.push_back(t.hurst);
        out.trial_kurtosis_h1.push_back(t.kurt_h1);
        if (!std::isnan(t.kurt_h100)) out.trial_kurtosis_h100.push_back(t.kurt_h100);
        out.trial_max_abs_dev.push_back(t.max_abs_dev);
        if (has_acf) {
            for (std::size_t lag = 0; lag <= acf_max_lag; ++lag) {
                out.avg_return_acf.values[lag] += t.return_acf[lag];
                out.avg_abs_return_acf.values[lag] += t.abs_return_acf[lag];
            }
        }
        out.pooled_returns_h1.insert(out.pooled_returns_h1.end(), t.returns_h1.begin(),
                                     t.returns_h1.end());
        if (i == 0) out.first_trial_prices = t.prices;
        if (keep_series) out.series.push_back(std::move(t.prices));
    }
    if (has_acf) {
        for (std::size_t lag = 0; lag <= acf_max_lag; ++lag) {
            out.avg_return_acf.values[lag] /= static_cast<double>(n_trials);
            out.avg_abs_return_acf.values[lag] /= static_cast<double>(n_trials);
        }
    }

    out.avg_sigma = analysis::average_sigma_across_trials(out.trial_sigmas);
    out.fit = analysis::fit_loglog(out.taus, out.avg_sigma);
    out.hurst_stderr = stderr_of(out.trial_hurst);
    return out;
}

SweepResult sweep_pb(const ExperimentSpec& spec) {
    if (spec.pb_grid.empty()) throw std::invalid_argument("sweep_pb: empty pb grid");
    SweepResult out;
    for (double pb : spec.pb_grid) {
        if (pb < 0.0) throw std::invalid_argument("sweep_pb: perturbation must be >= 0");
        GameConfig cfg = spec.base;
        cfg.perturbation = pb;
        out.pb_values.push_back(pb);
        out.ensembles.push_back(
            run_ensemble(cfg, spec.n_trials, spec.master_seed, spec.n_threads));
    }
    return out;
}

ExperimentSpec ExperimentSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open experiment spec: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("experiment spec is not valid JSON: ") + e.what());
    }
    ExperimentSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (key == "config") spec.base = GameConfig::from_json_text(value.dump());
        else if (key == "n_trials") spec.n_trials = value.get<std::size_t>();
        else if (key == "pb_grid") spec.pb_grid = value.get<std::vector<double>>();
        else if (key == "master_seed") spec.master_seed = value.get<std::uint64_t>();
        else if (key == "output_dir") spec.output_dir = value.get<std::string>();
        else if (key == "n_threads") spec.n_threads = value.get<std::size_t>();
        else throw std::invalid_argument("unknown experiment spec key: " + key);
    }
    return spec;
}

namespace {

void write_manifest(const ExperimentSpec& spec, const std::string& command,
                    const std::vector<std::string>& files) {
    nlohmann::json seeds{{"rule", "master_seed + trial_index"},
                         {"master_seed", spec.master_seed},
                         {"n_trials", spec.n_trials}};
    nlohmann::json manifest{{"version", SPECGAME_VERSION},
                            {"command", command},
                            {"config", nlohmann::json::parse(spec.base.to_json(0))},
                            {"config_hash", spec.base.hash_hex()},
                            {"pb_grid", spec.pb_grid},
                            {"seeds", seeds},
                            {"files", files}};
    io::write_text_file((std::filesystem::path(spec.output_dir) / "manifest.json").string(),
                        manifest.dump(2) + "\n");
}

const EnsembleResult& ensemble_at(const SweepResult& sweep, double pb) {
    for (std::size_t i = 0; i < sweep.pb_values.size(); ++i)
        if (sweep.pb_values[i] == pb) return sweep.ensembles[i];
    throw std::invalid_argument("sweep grid is missing pb = " + format_pb(pb));
}

} // namespace

std::vector<std::string> write_sweep_outputs(const SweepResult& sweep,
                                             const ExperimentSpec& spec) {
    const std::filesystem::path dir(spec.output_dir);
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;

    {
        std::ostringstream csv;
        csv << "pb,hurst,r2,excess_kurtosis\n";
        for (std::size_t i = 0; i < sweep.pb_values.size(); ++i) {
            const auto& e = sweep.ensembles[i];
            csv << format_pb(sweep.pb_values[i]) << ',' << io::format_double(e.fit.hurst)
                << ',' << io::format_double(e.fit.r_squared) << ','
                << io::format_double(e.mean_kurtosis_h1()) << '\n';
        }
        io::write_text_file((dir / "sweep.csv").string(), csv.str());
        files.push_back("sweep.csv");
    }

    for (std::size_t i = 0; i < sweep.pb_values.size(); ++i) {
        const auto name = "hist_pb" + format_pb(sweep.pb_values[i]) + ".csv";
        io::write_histogram_csv(
            (dir / name).string(),
            analysis::return_histogram(sweep.ensembles[i].pooled_returns_h1));
        files.push_back(name);
    }

    write_manifest(spec, "sweep", files);
    files.push_back("manifest.json");
    return files;
}

std::vector<std::string> emit_figure_data(const SweepResult& sweep,
                                          const ExperimentSpec& spec) {
    const std::filesystem::path dir(spec.output_dir);
    std::filesystem::create_directories(dir);
    const EnsembleResult& baseline = ensemble_at(sweep, 0.0);
    const EnsembleResult& perturbed = ensemble_at(sweep, 0.25);
    std::vector<std::string> files;

    io::write_price_csv((dir / "fig1.csv").string(), baseline.first_trial_prices);
    files.push_back("fig1.csv");
    io::write_fitted_sigma_csv((dir / "fig2.csv").string(), baseline.fit);
    files.push_back("fig2.csv");
    io::write_price_csv((dir / "fig3.csv").string(), perturbed.first_trial_prices);
    files.push_back("fig3.csv");
    io::write_fitted_sigma_csv((dir / "fig4.csv").string(), perturbed.fit);
    files.push_back("fig4.csv");

    {
        std::ostringstream csv;
        csv << "pb,bin_center,density\n";
        for (double pb : {0.25, 0.5, 0.75}) {
            const auto hist =
                analysis::return_histogram(ensemble_at(sweep, pb).pooled_returns_h1);
            for (std::size_t b = 0; b < hist.bin_centers.size(); ++b)
                csv << format_pb(pb) << ',' << io::format_double(hist.bin_centers[b]) << ','
                    << io::format_double(hist.densities[b]) << '\n';
        }
        io::write_text_file((dir / "fig5.csv").string(), csv.str());
        files.push_back("fig5.csv");
    }

    {
        std::ostringstream csv;
        csv << "pb,hurst\n";
        for (std::size_t i = 0; i < sweep.pb_values.size(); ++i)
            csv << format_pb(sweep.pb_values[i]) << ','
                << io::format_double(sweep.ensembles[i].fit.hurst) << '\n';
        io::write_text_file((dir / "fig6.csv").string(), csv.str());
        files.push_back("fig6.csv");
    }

    write_manifest(spec, "figures", files);
    files.push_back("manifest.json");
    return files;
}

} // namespace specgame::experiments
