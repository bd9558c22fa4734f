#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "specgame/config.hpp"
#include "specgame/market.hpp"
#include "specgame/player.hpp"
#include "specgame/rng.hpp"
#include "specgame/strategy.hpp"

namespace specgame {

// Quantized price move against the big-move threshold:
//   2 if dp > C, 1 if 0 < dp <= C, 0 if dp = 0, -1 if -C <= dp < 0, -2 if dp < -C.
inline std::int8_t quantize_move(double dp, double threshold) {
    if (dp > threshold) return 2;
    if (dp > 0.0) return 1;
    if (dp == 0.0) return 0;
    if (dp >= -threshold) return -1;
    return -2;
}

inline double update_cognitive_price(double previous, int digit) {
    return previous + static_cast<double>(digit);
}

// Round-trip gain in cognitive prices: a(t0) * (P(close) - P(open)).
inline double round_trip_gain(int open_action, double open_cognitive, double close_cognitive) {
    return static_cast<double>(open_action) * (close_cognitive - open_cognitive);
}

// What a player submits this step, given her position and the active
// strategy's recommendation:
//   flat  + rec ±1 and q >= 1  -> open (a = rec, q = floor(w/B))
//   flat  + rec 0 or q = 0     -> nothing
//   open  + rec == open action -> hold
//   open  + rec == 0           -> hold
//   open  + rec == -open action-> close, submitting the opposite action with
//                                 the opening quantity
struct OrderIntent {
    std::int8_t action = 0;  // 0 = no order
    std::int64_t quantity = 0;
    bool closes = false;
};

inline OrderIntent resolve_order(const RealPosition& position, double wealth,
                                 std::uint32_t board_lot, std::int8_t recommendation) {
    if (!position.is_open) {
        if (recommendation == 0) return {};
        const std::int64_t q = order_quantity(wealth, board_lot);
        if (q < 1) return {};
        return {recommendation, q, false};
    }
    if (recommendation == -position.action)
        return {static_cast<std::int8_t>(-position.action), position.quantity, true};
    return {};
}

inline std::int8_t recommend_action(const Player& p, std::size_t strategy,
                                    std::size_t pattern_index, std::size_t table_size) {
    return p.tables[strategy * table_size + pattern_index];
}

// Order imbalance plus optional uniform perturbation. The draw is shared by
// the whole market and redrawn in the measure-zero case where it would cancel
// the imbalance exactly, so dp != 0 whenever pb > 0.
struct PriceMove {
    double dp = 0.0;
    double imbalance = 0.0;
    double draw = 0.0;
};

PriceMove perturbed_move(double imbalance, double pb, Rng& rng);
PriceMove aggregate_price_change(std::span<const OrderIntent> orders, std::uint32_t n_players,
                                 double pb, Rng& rng);

// Adds the gain to the strategy's accumulated total and clears the settled
// position. Real settlements also convert the gain into wealth at the opening
// quantity and clear the mirrored virtual leg.
void settle_round_trip(Player& p, std::size_t strategy, double gain,
                       std::int64_t quantity_at_open, bool is_real);

// Post-settlement review: adopt the best-scoring strategy (ties keep the
// incumbent, then lowest index). A winning strategy with a background trade
// still open has it closed at the current cognitive price before the switch,
// which takes effect at the start of the next step.
void review_best_strategy(Player& p, double cognitive_price);

// The repeated game. Construction seeds the history with M uniform digits
// from the active alphabet and draws every player's tables and wealth; step()
// then advances the market one tick:
//   1. pending strategy switches take effect; all players look up the last M
//      digits and decide real orders (active strategy) and background orders
//      (every other strategy against its own virtual position)
//   2. orders aggregate into dp; p(t) = p(t-1) + dp
//   3. dp quantizes into h(t); history and cognitive price update
//   4. settlements at P(t): background closes, then real closes (wealth
//      adjustment, strategy review, bankruptcy replacement), then openings
// RNG draw order is fixed (history, then players in index order; per step:
// perturbation, then replacements in player order), so a run is a pure
// function of its config.
class Game {
public:
    explicit Game(GameConfig cfg);

    StepRecord step();

    const GameConfig& config() const { return cfg_; }
    const MarketState& market() const { return market_; }
    std::size_t pattern_value() const { return pattern_.value(); }
    std::size_t table_size() const { return pattern_.table_size(); }
    std::size_t alphabet() const { return pattern_.alphabet(); }

    std::size_t n_players() const { return players_.size(); }
    const Player& player(std::size_t i) const { return players_[i]; }
    // Mutable state access for tests and replay tooling.
    Player& player_mut(std::size_t i) { return players_[i]; }
    // Replace the seed history (exactly M digits from the active alphabet).
    void set_history(std::span<const std::int8_t> digits);

private:
    void reinit_player(Player& p);

    GameConfig cfg_;
    Rng rng_;
    PatternIndex pattern_;
    MarketState market_;
    std::vector<Player> players_;
    std::vector<std::int8_t> recs_;  // per-step scratch, n_players * n_strategies
};

// Validates the config, plays `horizon` steps, returns the full trajectory.
RunResult run(const GameConfig& cfg);

} // namespace specgame
