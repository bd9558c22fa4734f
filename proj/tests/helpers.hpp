#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "specgame/rng.hpp"

// Test-only distributions and series generators, independent of the library's
// analysis path.

namespace testutil {

class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        do { u = rng_.uniform01(); } while (u == 0.0);
        const double v = rng_.uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

private:
    specgame::Rng rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline std::vector<double> gaussian_sample(std::size_t n, std::uint64_t seed) {
    Gaussian g(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = g.next();
    return out;
}

// unit-variance Laplace via inverse CDF (scale b = 1/sqrt(2))
inline std::vector<double> laplace_sample(std::size_t n, std::uint64_t seed) {
    specgame::Rng rng(seed);
    const double b = 1.0 / std::sqrt(2.0);
    std::vector<double> out(n);
    for (auto& x : out) {
        double u = 0.0;
        do { u = rng.uniform01() - 0.5; } while (u == -0.5 || u == 0.5);
        x = -b * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
    }
    return out;
}

inline std::vector<double> random_walk(std::size_t steps, std::uint64_t seed,
                                       double start = 0.0) {
    Gaussian g(seed);
    std::vector<double> prices;
    prices.reserve(steps + 1);
    prices.push_back(start);
    for (std::size_t i = 0; i < steps; ++i) prices.push_back(prices.back() + g.next());
    return prices;
}

inline std::vector<double> laplace_walk(std::size_t steps, std::uint64_t seed,
                                        double start = 0.0) {
    const auto increments = laplace_sample(steps, seed);
    std::vector<double> prices;
    prices.reserve(steps + 1);
    prices.push_back(start);
    for (double d : increments) prices.push_back(prices.back() + d);
    return prices;
}

} // namespace testutil
