#include "specgame/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specgame/stats/kernels.hpp"

namespace specgame::analysis {

using stats::active_kernels;

double sigma_tau(std::span<const double> prices, std::size_t tau) {
    if (tau == 0) throw std::invalid_argument("sigma_tau: tau must be >= 1");
    if (tau >= prices.size())
        throw std::invalid_argument("sigma_tau: tau must be smaller than the series length");
    const std::size_t count = prices.size() - tau;
    const auto& k = active_kernels();
    const double mean = k.lagged_diff_sum(prices.data(), prices.size(), tau) /
                        static_cast<double>(count);
    const double ssd = k.lagged_diff_sq_dev(prices.data(), prices.size(), tau, mean);
    return std::sqrt(std::max(ssd / static_cast<double>(count), 0.0));
}

std::vector<double> sigma_table(std::span<const double> prices,
                                std::span<const std::size_t> taus) {
    std::vector<double> out;
    out.reserve(taus.size());
    for (std::size_t tau : taus) out.push_back(sigma_tau(prices, tau));
    return out;
}

std::vector<std::size_t> default_tau_grid(std::size_t length) {
    std::vector<std::size_t> taus;
    for (int k = 0; k <= 12; ++k) {
        const std::size_t tau = std::size_t{1} << k;
        if (tau * 10 > length) break;
        taus.push_back(tau);
    }
    return taus;
}

HurstFit fit_loglog(std::span<const std::size_t> taus, std::span<const double> sigmas) {
    if (taus.size() != sigmas.size())
        throw std::invalid_argument("fit_loglog: tau and sigma lengths differ");
    HurstFit fit;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (sigmas[i] > 0.0) {
            fit.taus.push_back(taus[i]);
            fit.sigmas.push_back(sigmas[i]);
        }
    }
    const std::size_t n = fit.taus.size();
    if (n < 3)
        throw std::invalid_argument("fit_loglog: fewer than 3 usable (sigma > 0) grid points");

    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(static_cast<double>(fit.taus[i]));
        ys[i] = std::log(fit.sigmas[i]);
    }
    const auto& k = active_kernels();
    const double xbar = k.sum(xs.data(), n) / static_cast<double>(n);
    const double ybar = k.sum(ys.data(), n) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    fit.hurst = sxy / sxx;
    fit.intercept = ybar - fit.hurst * xbar;

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ys[i] - (fit.intercept + fit.hurst * xs[i]);
        ss_res += resid * resid;
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return fit;
}

HurstFit fit_hurst(std::span<const double> prices, std::span<const std::size_t> taus) {
    const std::vector<double> sigmas = sigma_table(prices, taus);
    return fit_loglog(taus, sigmas);
}

HurstFit fit_hurst(std::span<const double> prices) {
    const std::vector<std::size_t> taus = default_tau_grid(prices.size());
    return fit_hurst(prices, taus);
}

std::vector<double> average_sigma_across_trials(
    const std::vector<std::vector<double>>& per_trial) {
    if (per_trial.empty())
        throw std::invalid_argument("average_sigma_across_trials: no trials");
    const std::size_t width = per_trial.front().size();
    std::vector<double> avg(width, 0.0);
    for (const auto& trial : per_trial) {
        if (trial.size() != width)
            throw std::invalid_argument("average_sigma_across_trials: mismatched tau grids");
        for (std::size_t i = 0; i < width; ++i) avg[i] += trial[i];
    }
    for (auto& v : avg) v /= static_cast<double>(per_trial.size());
    return avg;
}

std::vector<double> returns(std::span<const double> prices, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("returns: horizon must be >= 1");
    if (horizon >= prices.size())
        throw std::invalid_argument("returns: horizon must be smaller than the series length");
    std::vector<double> out;
    out.reserve(prices.size() / horizon);
    for (std::size_t t = 0; t + horizon < prices.size(); t += horizon)
        out.push_back(prices[t + horizon] - prices[t]);
    return out;
}

AcfResult acf(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (max_lag == 0) throw std::invalid_argument("acf: max_lag must be >= 1");
    if (n <= max_lag + 1)
        throw std::invalid_argument("acf: series length must exceed max_lag + 1");
    const auto& k = active_kernels();
    const double mean = k.sum(values.data(), n) / static_cast<double>(n);
    const double variance = k.sum_sq_dev(values.data(), n, mean) / static_cast<double>(n);
    if (!(variance > 0.0)) throw std::invalid_argument("acf: series has zero variance");

    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = values[i] - mean;

    AcfResult out;
    out.lags.reserve(max_lag + 1);
    out.values.reserve(max_lag + 1);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        const std::size_t count = n - lag;
        const double cov = k.dot(dev.data(), dev.data() + lag, count) /
                           static_cast<double>(count);
        out.lags.push_back(lag);
        out.values.push_back(cov / variance);
    }
    return out;
}

double excess_kurtosis(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 4) throw std::invalid_argument("excess_kurtosis: need at least 4 values");
    const auto& k = active_kernels();
    const double mean = k.sum(values.data(), n) / static_cast<double>(n);
    double m2_sum = 0.0, m4_sum = 0.0;
    k.central_moments_2_4(values.data(), n, mean, &m2_sum, &m4_sum);
    const double m2 = m2_sum / static_cast<double>(n);
    const double m4 = m4_sum / static_cast<double>(n);
    if (!(m2 > 0.0)) throw std::invalid_argument("excess_kurtosis: zero variance");
    return m4 / (m2 * m2) - 3.0;
}

std::vector<std::pair<std::size_t, double>> aggregational_gaussianity_profile(
    std::span<const double> prices, std::span<const std::size_t> horizons) {
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(horizons.size());
    for (std::size_t h : horizons) {
        const std::vector<double> rets = returns(prices, h);
        out.emplace_back(h, excess_kurtosis(rets));
    }
    return out;
}

TailStats return_histogram(std::span<const double> values, std::size_t bins,
                           double span_sigmas) {
    if (bins == 0) throw std::invalid_argument("return_histogram: need at least 1 bin");
    if (values.size() < 2)
        throw std::invalid_argument("return_histogram: need at least 2 values");
    const auto& k = active_kernels();
    const std::size_t n = values.size();
    const double mean = k.sum(values.data(), n) / static_cast<double>(n);
    const double sd = std::sqrt(k.sum_sq_dev(values.data(), n, mean) / static_cast<double>(n));
    if (!(sd > 0.0)) throw std::invalid_argument("return_histogram: zero variance");

    TailStats stats;
    const double lo = mean - span_sigmas * sd;
    const double hi = mean + span_sigmas * sd;
    stats.bin_width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    std::size_t inside = 0;
    for (double v : values) {
        if (v < lo || v > hi) continue;
        auto b = static_cast<std::size_t>((v - lo) / stats.bin_width);
        if (b >= bins) b = bins - 1;  // v == hi lands in the top bin
        ++counts[b];
        ++inside;
    }
    stats.bin_centers.resize(bins);
    stats.densities.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        stats.bin_centers[b] = lo + (static_cast<double>(b) + 0.5) * stats.bin_width;
        stats.densities[b] = inside > 0
            ? static_cast<double>(counts[b]) / (static_cast<double>(inside) * stats.bin_width)
            : 0.0;
    }
    stats.excess_kurtosis = excess_kurtosis(values);
    return stats;
}

} // namespace specgame::analysis
