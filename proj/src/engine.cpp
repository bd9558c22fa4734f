#include "specgame/engine.hpp"

#include <cassert>
#include <stdexcept>

namespace specgame {

PriceMove perturbed_move(double imbalance, double pb, Rng& rng) {
    PriceMove move;
    move.imbalance = imbalance;
    if (pb > 0.0) {
        move.draw = rng.uniform(-pb, pb);
        while (imbalance + move.draw == 0.0) move.draw = rng.uniform(-pb, pb);
    }
    move.dp = imbalance + move.draw;
    return move;
}

PriceMove aggregate_price_change(std::span<const OrderIntent> orders, std::uint32_t n_players,
                                 double pb, Rng& rng) {
    std::int64_t sum = 0;
    for (const auto& o : orders) {
        assert(o.quantity >= 1 || o.action == 0);
        sum += static_cast<std::int64_t>(o.action) * o.quantity;
    }
    return perturbed_move(static_cast<double>(sum) / static_cast<double>(n_players), pb, rng);
}

void settle_round_trip(Player& p, std::size_t strategy, double gain,
                       std::int64_t quantity_at_open, bool is_real) {
    assert(p.virtuals[strategy].is_open);
    assert(quantity_at_open >= 1);
    p.gains[strategy] += gain;
    if (is_real) {
        assert(p.real.is_open && strategy == p.active);
        const double adjustment = gain * static_cast<double>(quantity_at_open);
        p.wealth += adjustment;
        p.settled_total += adjustment;
        p.real.clear();
    }
    p.virtuals[strategy].clear();
}

void review_best_strategy(Player& p, double cognitive_price) {
    std::size_t best = p.active;
    double best_gain = p.gains[p.active];
    for (std::size_t j = 0; j < p.gains.size(); ++j) {
        if (p.gains[j] > best_gain) {
            best = j;
            best_gain = p.gains[j];
        }
    }
    if (best == p.active) return;
    auto& v = p.virtuals[best];
    if (v.is_open) {
        p.gains[best] += round_trip_gain(v.action, v.open_cognitive, cognitive_price);
        v.clear();
    }
    p.pending_switch = static_cast<std::int32_t>(best);
}

Game::Game(GameConfig cfg)
    : cfg_(std::move(cfg)),
      rng_(cfg_.rng_seed),
      pattern_(cfg_.alphabet_size(), cfg_.memory) {
    cfg_.validate();

    market_.price = cfg_.initial_price;
    market_.cognitive_price = 0.0;
    market_.history.reserve(cfg_.memory + cfg_.horizon);
    for (std::uint32_t i = 0; i < cfg_.memory; ++i) {
        const std::size_t idx = rng_.below(pattern_.alphabet());
        market_.history.push_back(
            static_cast<std::int8_t>(decode_digit(idx, pattern_.alphabet())));
    }
    pattern_.reset(std::span<const std::int8_t>(market_.history));

    players_.resize(cfg_.n_players);
    for (auto& p : players_) reinit_player(p);
    recs_.resize(static_cast<std::size_t>(cfg_.n_players) * cfg_.n_strategies);
}

void Game::reinit_player(Player& p) {
    const std::size_t tsize = pattern_.table_size();
    p.tables.resize(static_cast<std::size_t>(cfg_.n_strategies) * tsize);
    fill_random_strategies(std::span<std::int8_t>(p.tables), rng_);
    p.wealth = draw_initial_wealth(cfg_.board_lot, rng_);
    p.gains.assign(cfg_.n_strategies, 0.0);
    p.virtuals.assign(cfg_.n_strategies, VirtualPosition{});
    p.real.clear();
    p.active = 0;
    p.pending_switch = -1;
    p.initial_wealth = p.wealth;
    p.settled_total = 0.0;
}

void Game::set_history(std::span<const std::int8_t> digits) {
    if (digits.size() != cfg_.memory)
        throw std::invalid_argument("set_history expects exactly `memory` digits");
    market_.history.assign(digits.begin(), digits.end());
    pattern_.reset(digits);
}

StepRecord Game::step() {
    const std::uint32_t S = cfg_.n_strategies;
    const std::size_t tsize = pattern_.table_size();
    ++market_.time;

    // switches scheduled by last step's reviews
    for (auto& p : players_) {
        if (p.pending_switch >= 0) {
            p.active = static_cast<std::uint32_t>(p.pending_switch);
            p.pending_switch = -1;
        }
    }

    // decisions against the current pattern; orders aggregate as they come
    const std::size_t pattern = pattern_.value();
    std::int64_t weighted_sum = 0;
    std::uint64_t volume = 0;
    for (std::size_t i = 0; i < players_.size(); ++i) {
        Player& p = players_[i];
        const std::int8_t* tab = p.tables.data();
        for (std::uint32_t j = 0; j < S; ++j)
            recs_[i * S + j] = tab[j * tsize + pattern];
        const OrderIntent o = resolve_order(p.real, p.wealth, cfg_.board_lot,
                                            recs_[i * S + p.active]);
        if (o.action != 0) {
            if (!o.closes || cfg_.closes_in_imbalance)
                weighted_sum += static_cast<std::int64_t>(o.action) * o.quantity;
            volume += static_cast<std::uint64_t>(o.quantity);
        }
    }

    // price formation and quantization
    const double imbalance = static_cast<double>(weighted_sum) / static_cast<double>(cfg_.n_players);
    const PriceMove move = perturbed_move(imbalance, cfg_.perturbation, rng_);
    market_.price += move.dp;
    const std::int8_t h = quantize_move(move.dp, cfg_.cognitive_threshold);
    if (cfg_.perturbation > 0.0 && h == 0)
        throw std::logic_error("zero move emitted under perturbation");
    market_.history.push_back(h);
    pattern_.push(h);
    market_.cognitive_price = update_cognitive_price(market_.cognitive_price, h);
    const double cog = market_.cognitive_price;

    // settlements and openings at P(t), players in index order
    for (std::size_t i = 0; i < players_.size(); ++i) {
        Player& p = players_[i];

        // background strategies act on their own recommendations; a strategy
        // closing this step cannot also reopen this step
        for (std::uint32_t j = 0; j < S; ++j) {
            if (j == p.active) continue;
            const std::int8_t rec = recs_[i * S + j];
            auto& v = p.virtuals[j];
            if (v.is_open) {
                if (rec == -v.action)
                    settle_round_trip(p, j, round_trip_gain(v.action, v.open_cognitive, cog), 1, false);
            } else if (rec != 0) {
                v = VirtualPosition{true, rec, cog};
            }
        }

        const OrderIntent o = resolve_order(p.real, p.wealth, cfg_.board_lot,
                                            recs_[i * S + p.active]);
        if (o.closes) {
            auto& mirror = p.virtuals[p.active];
            assert(mirror.is_open && mirror.action == p.real.action);
            const double gain = round_trip_gain(p.real.action, mirror.open_cognitive, cog);
            settle_round_trip(p, p.active, gain, p.real.quantity, true);
            review_best_strategy(p, cog);
            if (p.wealth < static_cast<double>(cfg_.board_lot)) reinit_player(p);
        } else if (o.action != 0) {
            p.real = RealPosition{true, o.action, o.quantity, cog};
            p.virtuals[p.active] = VirtualPosition{true, o.action, cog};
        }
    }

    return StepRecord{market_.time, market_.price, move.dp, move.imbalance, move.draw, h, volume};
}

RunResult run(const GameConfig& cfg) {
    cfg.validate();
    Game game(cfg);
    RunResult out;
    out.config = cfg;
    out.prices.reserve(cfg.horizon + 1);
    out.prices.push_back(cfg.initial_price);
    out.records.reserve(cfg.horizon);
    for (std::uint64_t t = 0; t < cfg.horizon; ++t) {
        out.records.push_back(game.step());
        out.prices.push_back(out.records.back().price);
    }
    return out;
}

} // namespace specgame
