// specgame: simulate / analyze / sweep / figures front end.
// Exit codes: 0 success, 1 invalid configuration or arguments, 2 runtime error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specgame/analysis.hpp"
#include "specgame/engine.hpp"
#include "specgame/experiments.hpp"
#include "specgame/io.hpp"
#include "specgame/stats/kernels.hpp"
#include "specgame/version.hpp"

namespace {

using namespace specgame;

struct ConfigFlags {
    std::string config_path;
    GameConfig values;
    CLI::App* app = nullptr;
};

// Model flags, mirrored one-to-one onto config keys. File values load first;
// any flag the user actually passed wins. For the ensemble subcommands --seed
// is the master seed that per-trial seeds derive from.
void add_config_flags(CLI::App& app, ConfigFlags& flags) {
    flags.app = &app;
    app.add_option("--config", flags.config_path, "JSON config file");
    app.add_option("-N,--players", flags.values.n_players, "number of players");
    app.add_option("-M,--memory", flags.values.memory, "history digits per lookup");
    app.add_option("-S,--strategies", flags.values.n_strategies, "strategies per player");
    app.add_option("-B,--board-lot", flags.values.board_lot, "wealth units per order unit");
    app.add_option("-C,--threshold", flags.values.cognitive_threshold,
                   "big-move recognition threshold");
    app.add_option("--pb", flags.values.perturbation, "perturbation half-width");
    app.add_option("-T,--horizon", flags.values.horizon, "steps to simulate");
    app.add_option("--price0", flags.values.initial_price, "initial price");
    app.add_option("--seed", flags.values.rng_seed, "RNG seed (master seed for ensembles)");
}

void apply_flag_overrides(GameConfig& cfg, const ConfigFlags& flags) {
    const CLI::App& app = *flags.app;
    if (app.count("--players")) cfg.n_players = flags.values.n_players;
    if (app.count("--memory")) cfg.memory = flags.values.memory;
    if (app.count("--strategies")) cfg.n_strategies = flags.values.n_strategies;
    if (app.count("--board-lot")) cfg.board_lot = flags.values.board_lot;
    if (app.count("--threshold")) cfg.cognitive_threshold = flags.values.cognitive_threshold;
    if (app.count("--pb")) cfg.perturbation = flags.values.perturbation;
    if (app.count("--horizon")) cfg.horizon = flags.values.horizon;
    if (app.count("--price0")) cfg.initial_price = flags.values.initial_price;
    if (app.count("--seed")) cfg.rng_seed = flags.values.rng_seed;
}

GameConfig merge_config(const ConfigFlags& flags) {
    GameConfig cfg;
    if (!flags.config_path.empty()) cfg = GameConfig::from_json_file(flags.config_path);
    apply_flag_overrides(cfg, flags);
    return cfg;
}

void report_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::string meta_path_for(const std::string& data_path) {
    std::filesystem::path p(data_path);
    p.replace_extension(".meta.json");
    return p.string();
}

int cmd_simulate(const ConfigFlags& flags, const std::string& out_path,
                 const std::string& format, bool print_config) {
    GameConfig cfg = merge_config(flags);
    report_warnings(cfg.validate());
    if (print_config) std::cout << cfg.to_json(2) << '\n';

    RunResult result = run(cfg);
    if (format == "jsonl") io::write_steps_jsonl(out_path, result);
    else io::write_steps_csv(out_path, result);
    io::write_run_metadata(meta_path_for(out_path), result, out_path, format);
    std::cout << "wrote " << out_path << " (" << result.records.size() << " steps), "
              << meta_path_for(out_path) << '\n';
    return 0;
}

int cmd_analyze(const std::string& input, const std::string& out_dir, std::size_t max_lag,
                const std::vector<std::size_t>& horizons, std::size_t histogram_bins,
                bool log_returns) {
    const io::ParsedRun parsed = io::read_steps_csv(input);
    const std::vector<double>& prices = parsed.prices;

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    const auto taus = analysis::default_tau_grid(prices.size());
    if (taus.size() < 3)
        throw std::runtime_error("series too short: need >= 39 steps for the tau grid");
    const auto sigmas = analysis::sigma_table(prices, taus);
    const auto fit = analysis::fit_loglog(taus, sigmas);
    io::write_sigma_csv((dir / "sigma.csv").string(), taus, sigmas);
    io::write_fit_csv((dir / "fit.csv").string(), fit);

    // distribution/ACF diagnostics, optionally on log differences
    std::vector<double> basis = prices;
    if (log_returns) {
        for (auto& p : basis) {
            if (!(p > 0.0))
                throw std::runtime_error("log-returns requested but prices are not all positive");
            p = std::log(p);
        }
    }
    const auto rets = analysis::returns(basis, 1);
    if (rets.size() > max_lag + 1) {
        io::write_acf_csv((dir / "acf_returns.csv").string(), analysis::acf(rets, max_lag));
        std::vector<double> abs_rets(rets.size());
        for (std::size_t i = 0; i < rets.size(); ++i) abs_rets[i] = std::abs(rets[i]);
        io::write_acf_csv((dir / "acf_abs_returns.csv").string(),
                          analysis::acf(abs_rets, max_lag));
    }
    std::vector<std::size_t> usable_horizons;
    for (std::size_t h : horizons)
        if (h >= 1 && h < basis.size() && (basis.size() - 1) / h >= 4)
            usable_horizons.push_back(h);
    if (!usable_horizons.empty())
        io::write_kurtosis_csv(
            (dir / "kurtosis.csv").string(),
            analysis::aggregational_gaussianity_profile(basis, usable_horizons));
    io::write_histogram_csv((dir / "histogram.csv").string(),
                            analysis::return_histogram(rets, histogram_bins));

    nlohmann::json meta{{"version", SPECGAME_VERSION},
                        {"input", input},
                        {"rows", parsed.rows},
                        {"hurst", fit.hurst},
                        {"intercept", fit.intercept},
                        {"r_squared", fit.r_squared},
                        {"log_returns", log_returns},
                        {"max_lag", max_lag},
                        {"kernel_backend", stats::backend_name()}};
    io::write_text_file((dir / "analysis.json").string(), meta.dump(2) + "\n");

    std::printf("hurst=%.6f intercept=%.6f r2=%.6f (outputs in %s)\n", fit.hurst,
                fit.intercept, fit.r_squared, out_dir.c_str());
    return 0;
}

experiments::ExperimentSpec build_spec(const ConfigFlags& flags, const std::string& spec_path,
                                       std::size_t trials, std::size_t threads,
                                       const std::vector<double>& pb_grid,
                                       const std::string& out_dir) {
    const CLI::App& app = *flags.app;
    experiments::ExperimentSpec spec;
    if (!spec_path.empty()) {
        if (app.count("--config"))
            throw std::invalid_argument("--spec and --config are mutually exclusive");
        spec = experiments::ExperimentSpec::from_json_file(spec_path);
        apply_flag_overrides(spec.base, flags);
        if (app.count("--out-dir")) spec.output_dir = out_dir;
    } else {
        spec.base = merge_config(flags);
        spec.output_dir = out_dir;
    }
    if (app.count("--trials")) spec.n_trials = trials;
    if (app.count("--threads")) spec.n_threads = threads;
    const CLI::Option* grid_opt = app.get_option_no_throw("--pb-grid");
    if (grid_opt != nullptr && grid_opt->count() > 0) spec.pb_grid = pb_grid;
    if (app.count("--seed")) spec.master_seed = flags.values.rng_seed;
    return spec;
}

int cmd_sweep(const experiments::ExperimentSpec& spec, bool print_config) {
    report_warnings(spec.base.validate());
    if (print_config) std::cout << spec.base.to_json(2) << '\n';
    const auto sweep = experiments::sweep_pb(spec);
    const auto files = experiments::write_sweep_outputs(sweep, spec);
    std::cout << "wrote " << files.size() << " files to " << spec.output_dir << '\n';
    return 0;
}

int cmd_figures(const experiments::ExperimentSpec& spec, bool print_config) {
    report_warnings(spec.base.validate());
    if (print_config) std::cout << spec.base.to_json(2) << '\n';
    const auto sweep = experiments::sweep_pb(spec);
    const auto files = experiments::emit_figure_data(sweep, spec);
    std::cout << "wrote " << files.size() << " files to " << spec.output_dir << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"speculation-game market simulator and statistics suite"};
    app.set_version_flag("--version", SPECGAME_VERSION);
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "run one game and write per-step records");
    ConfigFlags sim_flags;
    add_config_flags(*simulate, sim_flags);
    std::string sim_out = "run.csv";
    std::string sim_format = "csv";
    bool sim_print_config = false;
    simulate->add_option("-o,--out", sim_out, "output path");
    simulate->add_option("--format", sim_format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    simulate->add_flag("--print-config", sim_print_config, "echo the merged config");

    auto* analyze = app.add_subcommand("analyze", "scaling fit and diagnostics for a run CSV");
    std::string an_input;
    std::string an_out_dir = "analysis";
    std::size_t an_max_lag = 50;
    std::vector<std::size_t> an_horizons{1, 2, 5, 10, 20, 50, 100};
    std::size_t an_bins = 101;
    bool an_log_returns = false;
    analyze->add_option("-i,--input", an_input, "run CSV to analyze")->required();
    analyze->add_option("--out-dir", an_out_dir, "output directory");
    analyze->add_option("--max-lag", an_max_lag, "highest autocorrelation lag");
    analyze->add_option("--horizons", an_horizons, "kurtosis profile horizons")->delimiter(',');
    analyze->add_option("--histogram-bins", an_bins, "histogram bin count");
    analyze->add_flag("--log-returns", an_log_returns,
                      "use log differences for the distribution diagnostics");

    auto* sweep = app.add_subcommand("sweep", "ensembles across a perturbation grid");
    ConfigFlags sw_flags;
    add_config_flags(*sweep, sw_flags);
    std::string sw_spec_path;
    std::vector<double> sw_grid{0.0, 0.25, 0.5, 0.75};
    std::size_t sw_trials = 100;
    std::size_t sw_threads = 0;
    std::string sw_out_dir = "sweep";
    bool sw_print_config = false;
    sweep->add_option("--spec", sw_spec_path, "experiment spec JSON file");
    sweep->add_option("--pb-grid", sw_grid, "perturbation values")->delimiter(',');
    sweep->add_option("--trials", sw_trials, "trials per grid value");
    sweep->add_option("--threads", sw_threads, "worker threads (0 = auto)");
    sweep->add_option("--out-dir", sw_out_dir, "output directory");
    sweep->add_flag("--print-config", sw_print_config, "echo the merged config");

    auto* figures = app.add_subcommand("figures", "reproduce the reference figure data files");
    ConfigFlags fg_flags;
    add_config_flags(*figures, fg_flags);
    std::string fg_spec_path;
    std::vector<double> fg_grid;
    std::size_t fg_trials = 100;
    std::size_t fg_threads = 0;
    std::string fg_out_dir = "figures";
    bool fg_print_config = false;
    figures->add_option("--spec", fg_spec_path, "experiment spec JSON file");
    figures->add_option("--pb-grid", fg_grid,
                        "perturbation values (must cover 0, 0.25, 0.5, 0.75)")
        ->delimiter(',');
    figures->add_option("--trials", fg_trials, "trials per ensemble");
    figures->add_option("--threads", fg_threads, "worker threads (0 = auto)");
    figures->add_option("--out-dir", fg_out_dir, "output directory");
    figures->add_flag("--print-config", fg_print_config, "echo the merged config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(sim_flags, sim_out, sim_format, sim_print_config);
        if (analyze->parsed())
            return cmd_analyze(an_input, an_out_dir, an_max_lag, an_horizons, an_bins,
                               an_log_returns);
        if (sweep->parsed()) {
            auto spec = build_spec(sw_flags, sw_spec_path, sw_trials, sw_threads, sw_grid,
                                   sw_out_dir);
            if (spec.pb_grid.empty()) spec.pb_grid = sw_grid;
            return cmd_sweep(spec, sw_print_config);
        }
        if (figures->parsed()) {
            auto spec = build_spec(fg_flags, fg_spec_path, fg_trials, fg_threads, fg_grid,
                                   fg_out_dir);
            if (spec.pb_grid.empty()) spec.pb_grid = {0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
            return cmd_figures(spec, fg_print_config);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
