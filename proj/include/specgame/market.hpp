#pragma once

#include <cstdint>
#include <vector>

#include "specgame/config.hpp"

namespace specgame {

// Shared market state. cognitive_price is the running sum of the quantized
// moves appended since step 1 (the seed digits are pre-game context only).
struct MarketState {
    double price = 0.0;
    double cognitive_price = 0.0;
    std::vector<std::int8_t> history;  // seed digits followed by one digit per step
    std::uint64_t time = 0;
};

struct StepRecord {
    std::uint64_t t = 0;
    double price = 0.0;         // p(t)
    double dp = 0.0;            // imbalance + perturbation
    double imbalance = 0.0;     // speculative order imbalance
    double perturbation = 0.0;  // the uniform draw; exactly 0 when Pb = 0
    std::int8_t h = 0;          // quantized move
    std::uint64_t volume = 0;   // sum of |quantity| over submitted orders
};

using PriceSeries = std::vector<double>;

struct RunResult {
    GameConfig config;
    PriceSeries prices;  // p(0), p(1), ..., p(horizon)
    std::vector<StepRecord> records;
};

} // namespace specgame
