#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#include "specgame/rng.hpp"

namespace specgame {

// An open round-trip leg in the real market. quantity is fixed at opening
// time; the close must submit exactly the same quantity.
struct RealPosition {
    bool is_open = false;
    std::int8_t action = 0;       // +1 long, -1 short
    std::int64_t quantity = 0;
    double open_cognitive = 0.0;  // cognitive price at the opening step
    void clear() { *this = RealPosition{}; }
};

// One strategy's background round trip, scored purely in cognitive prices.
// Quantities do not enter the gain, so none is tracked.
struct VirtualPosition {
    bool is_open = false;
    std::int8_t action = 0;
    double open_cognitive = 0.0;
    void clear() { *this = VirtualPosition{}; }
};

struct Player {
    double wealth = 0.0;
    std::vector<std::int8_t> tables;        // n_strategies * table_size entries in {-1,0,+1}
    std::vector<double> gains;              // accumulated round-trip gain per strategy
    std::vector<VirtualPosition> virtuals;  // one per strategy; virtuals[active] mirrors real
    RealPosition real;
    std::uint32_t active = 0;
    std::int32_t pending_switch = -1;       // strategy to adopt at the start of the next step

    // wealth-audit bookkeeping: wealth == initial_wealth + settled_total at all times
    double initial_wealth = 0.0;
    double settled_total = 0.0;
};

// floor(B + u) with u in [0, 100); integral result in [B, B+99], so a fresh
// player can always order at least one unit.
inline double wealth_from_uniform(std::uint32_t board_lot, double u) {
    assert(u >= 0.0 && u < 100.0);
    return std::floor(static_cast<double>(board_lot) + u);
}

inline double draw_initial_wealth(std::uint32_t board_lot, Rng& rng) {
    return wealth_from_uniform(board_lot, rng.uniform01() * 100.0);
}

// floor(wealth / B); 0 means the player cannot place an order.
inline std::int64_t order_quantity(double wealth, std::uint32_t board_lot) {
    assert(wealth >= 0.0 && board_lot >= 1);
    return static_cast<std::int64_t>(wealth / static_cast<double>(board_lot));
}

} // namespace specgame
