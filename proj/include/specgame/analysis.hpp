#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace specgame::analysis {

/// Result of the log-log scaling regression: hurst is the slope of
/// log sigma(tau) on log tau over the usable (sigma > 0) grid points.
struct HurstFit {
    std::vector<std::size_t> taus;
    std::vector<double> sigmas;
    double hurst = 0.0;
    double intercept = 0.0;  // natural-log intercept
    double r_squared = 0.0;
};

struct AcfResult {
    std::vector<std::size_t> lags;  // 0..max_lag
    std::vector<double> values;     // values[0] == 1
};

struct TailStats {
    std::vector<double> bin_centers;
    std::vector<double> densities;  // sum(density * bin_width) == 1 over binned values
    double bin_width = 0.0;
    double excess_kurtosis = 0.0;
};

/// Standard deviation of tau-step price changes over all overlapping windows
/// (population form). Returns 0 for a degenerate window set; throws
/// std::invalid_argument when tau is 0 or >= the series length.
double sigma_tau(std::span<const double> prices, std::size_t tau);

std::vector<double> sigma_table(std::span<const double> prices,
                                std::span<const std::size_t> taus);

/// Dyadic grid tau = 2^k, k = 0..12, kept while tau <= length/10.
std::vector<std::size_t> default_tau_grid(std::size_t length);

/// OLS of log sigma on log tau; grid points with sigma <= 0 are dropped.
/// Throws std::invalid_argument when fewer than 3 usable points remain.
HurstFit fit_loglog(std::span<const std::size_t> taus, std::span<const double> sigmas);

HurstFit fit_hurst(std::span<const double> prices);
HurstFit fit_hurst(std::span<const double> prices, std::span<const std::size_t> taus);

/// Element-wise mean of per-trial sigma tables sharing one tau grid.
std::vector<double> average_sigma_across_trials(
    const std::vector<std::vector<double>>& per_trial);

/// Price differences p(t+horizon) - p(t) at stride = horizon (non-overlapping).
std::vector<double> returns(std::span<const double> prices, std::size_t horizon);

/// Sample autocorrelation with the global mean and global variance; each lag
/// averages its T-k products. Requires length > max_lag + 1 and nonzero
/// variance.
AcfResult acf(std::span<const double> values, std::size_t max_lag);

/// m4/m2^2 - 3 from central sample moments. Requires length >= 4 and nonzero
/// variance.
double excess_kurtosis(std::span<const double> values);

/// Excess kurtosis of non-overlapping returns per horizon.
std::vector<std::pair<std::size_t, double>> aggregational_gaussianity_profile(
    std::span<const double> prices, std::span<const std::size_t> horizons);

/// Density histogram over uniform bins spanning +/- span_sigmas sample
/// standard deviations around the mean; values outside are dropped and the
/// densities normalize over what remains.
TailStats return_histogram(std::span<const double> values, std::size_t bins = 101,
                           double span_sigmas = 6.0);

} // namespace specgame::analysis
