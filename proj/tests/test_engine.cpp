#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specgame/engine.hpp"

using namespace specgame;

namespace {

GameConfig small_config() {
    GameConfig cfg;
    cfg.n_players = 100;
    cfg.horizon = 3000;
    cfg.rng_seed = 42;
    return cfg;
}

// Single player, M=1, S=1, lot 9. The player's own orders are the whole
// market, so each open pushes the price one level toward the trade and each
// close one level back.
GameConfig solo_config(std::uint64_t horizon) {
    GameConfig cfg;
    cfg.n_players = 1;
    cfg.memory = 1;
    cfg.n_strategies = 1;
    cfg.board_lot = 9;
    cfg.cognitive_threshold = 3.0;
    cfg.perturbation = 0.0;
    cfg.horizon = horizon;
    cfg.rng_seed = 7;
    return cfg;
}

// open on "largely up", hold on "up", close on "stay", idle otherwise
void install_solo_tables(Game& game) {
    Player& p = game.player_mut(0);
    std::fill(p.tables.begin(), p.tables.end(), std::int8_t{0});
    p.tables[encode_digit(2, 5)] = 1;
    p.tables[encode_digit(1, 5)] = 1;
    p.tables[encode_digit(0, 5)] = -1;
    const std::int8_t seed_digit = 2;
    game.set_history(std::span<const std::int8_t>(&seed_digit, 1));
}

} // namespace

TEST_CASE("initial wealth draw: floor(B + u)") {
    CHECK(wealth_from_uniform(9, 0.0) == 9.0);
    CHECK(wealth_from_uniform(9, 99.999) == 108.0);
    CHECK(wealth_from_uniform(9, 41.7) == 50.0);

    Rng rng(123);
    for (int i = 0; i < 1000; ++i) {
        const double w = draw_initial_wealth(9, rng);
        CHECK(w >= 9.0);
        CHECK(w <= 108.0);
        CHECK(w == std::floor(w));
    }
}

TEST_CASE("order quantity: floor(wealth / lot)") {
    CHECK(order_quantity(9.0, 9) == 1);
    CHECK(order_quantity(8.5, 9) == 0);
    CHECK(order_quantity(50.0, 9) == 5);
}

TEST_CASE("strategy lookup matches the pattern encoding") {
    // M=3 quinary table with a few pinned rows
    PatternIndex pattern(5, 3);
    Player p;
    p.tables.assign(pattern.table_size(), 0);
    const auto at = [&](int a, int b, int c) {
        return (encode_digit(a, 5) * 5 + encode_digit(b, 5)) * 5 + encode_digit(c, 5);
    };
    p.tables[at(-2, -2, -2)] = 1;
    p.tables[at(-2, -2, 1)] = -1;

    const std::int8_t tail1[3] = {-2, -2, -2};
    pattern.reset(std::span<const std::int8_t>(tail1, 3));
    CHECK(recommend_action(p, 0, pattern.value(), pattern.table_size()) == 1);

    const std::int8_t tail2[3] = {-2, -2, 1};
    pattern.reset(std::span<const std::int8_t>(tail2, 3));
    CHECK(recommend_action(p, 0, pattern.value(), pattern.table_size()) == -1);

    // constant-0 table recommends hold everywhere
    const std::int8_t tail3[3] = {2, 0, -1};
    pattern.reset(std::span<const std::int8_t>(tail3, 3));
    CHECK(recommend_action(p, 0, pattern.value(), pattern.table_size()) == 0);
}

TEST_CASE("pattern index rolls like a base-K window") {
    for (std::size_t alphabet : {std::size_t{4}, std::size_t{5}}) {
        PatternIndex pattern(alphabet, 3);
        std::vector<std::int8_t> window{-2, -1, 1};
        pattern.reset(std::span<const std::int8_t>(window));
        const std::vector<int> pushes{2, -2, 1, -1, 2, 2, -2, 1};
        for (int d : pushes) {
            pattern.push(d);
            window.erase(window.begin());
            window.push_back(static_cast<std::int8_t>(d));
            PatternIndex fresh(alphabet, 3);
            fresh.reset(std::span<const std::int8_t>(window));
            CHECK(pattern.value() == fresh.value());
        }
    }
}

TEST_CASE("order resolution") {
    RealPosition flat;
    CHECK(resolve_order(flat, 50.0, 9, 1).action == 1);
    CHECK(resolve_order(flat, 50.0, 9, 1).quantity == 5);
    CHECK(resolve_order(flat, 50.0, 9, 1).closes == false);
    CHECK(resolve_order(flat, 50.0, 9, 0).action == 0);
    CHECK(resolve_order(flat, 8.0, 9, 1).action == 0);  // sub-lot wealth

    RealPosition open_long{true, 1, 5, 3.0};
    CHECK(resolve_order(open_long, 50.0, 9, 1).action == 0);   // same action holds
    CHECK(resolve_order(open_long, 50.0, 9, 0).action == 0);   // zero holds
    const OrderIntent close = resolve_order(open_long, 50.0, 9, -1);
    CHECK(close.action == -1);
    CHECK(close.quantity == 5);  // closing quantity equals the opening one
    CHECK(close.closes);
}

TEST_CASE("price change aggregation") {
    Rng rng(1);
    SUBCASE("no orders, no perturbation") {
        const auto move = aggregate_price_change({}, 4, 0.0, rng);
        CHECK(move.dp == 0.0);
        CHECK(move.draw == 0.0);
    }
    SUBCASE("imbalance only") {
        const std::vector<OrderIntent> orders{{1, 3, false}, {-1, 1, false}};
        const auto move = aggregate_price_change(orders, 4, 0.0, rng);
        CHECK(move.dp == 0.5);
        CHECK(move.imbalance == 0.5);
        CHECK(move.draw == 0.0);
    }
    SUBCASE("pure perturbation stays within its half-width") {
        for (int i = 0; i < 2000; ++i) {
            const auto move = aggregate_price_change({}, 4, 0.25, rng);
            CHECK(move.dp == move.draw);
            CHECK(move.draw >= -0.25);
            CHECK(move.draw < 0.25);
            CHECK(move.dp != 0.0);
        }
    }
}

TEST_CASE("move quantization") {
    CHECK(quantize_move(5.0, 3.0) == 2);
    CHECK(quantize_move(0.0, 3.0) == 0);
    CHECK(quantize_move(-3.0, 3.0) == -1);  // boundary belongs to "down"
    CHECK(quantize_move(3.0, 3.0) == 1);    // boundary belongs to "up"
    CHECK(quantize_move(0.1, 3.0) == 1);
    CHECK(quantize_move(-0.1, 3.0) == -1);
    CHECK(quantize_move(-3.0001, 3.0) == -2);
}

TEST_CASE("cognitive price accumulates digits") {
    CHECK(update_cognitive_price(0.0, 2) == 2.0);
    CHECK(update_cognitive_price(5.0, -1) == 4.0);
    double p = 0.0;
    for (int d : {1, 1, -2}) p = update_cognitive_price(p, d);
    CHECK(p == 0.0);
}

TEST_CASE("round-trip gain") {
    CHECK(round_trip_gain(1, 3.0, 7.0) == 4.0);
    CHECK(round_trip_gain(-1, 3.0, 7.0) == -4.0);
    CHECK(round_trip_gain(1, 3.0, 3.0) == 0.0);
}

TEST_CASE("settlement updates gains and wealth") {
    Player p;
    p.wealth = 50.0;
    p.gains = {2.0, 0.0};
    p.virtuals.assign(2, VirtualPosition{});
    p.active = 0;

    SUBCASE("virtual settlement touches only the strategy gain") {
        p.virtuals[1] = VirtualPosition{true, 1, 3.0};
        settle_round_trip(p, 1, 4.0, 1, false);
        CHECK(p.gains[1] == 4.0);
        CHECK(p.wealth == 50.0);
        CHECK_FALSE(p.virtuals[1].is_open);
    }
    SUBCASE("real settlement converts gain at the opening quantity") {
        p.real = RealPosition{true, 1, 5, 3.0};
        p.virtuals[0] = VirtualPosition{true, 1, 3.0};
        settle_round_trip(p, 0, -3.0, 5, true);
        CHECK(p.gains[0] == -1.0);  // 2 + (-3)
        CHECK(p.wealth == 35.0);    // 50 + (-3) * 5
        CHECK_FALSE(p.real.is_open);
        CHECK_FALSE(p.virtuals[0].is_open);
    }
    SUBCASE("zero gain changes nothing") {
        p.real = RealPosition{true, 1, 5, 3.0};
        p.virtuals[0] = VirtualPosition{true, 1, 3.0};
        settle_round_trip(p, 0, 0.0, 5, true);
        CHECK(p.gains[0] == 2.0);
        CHECK(p.wealth == 50.0);
    }
}

TEST_CASE("strategy review") {
    Player p;
    p.gains = {5.0, 5.0};
    p.virtuals.assign(2, VirtualPosition{});
    p.active = 0;

    SUBCASE("tie keeps the incumbent") {
        review_best_strategy(p, 0.0);
        CHECK(p.pending_switch == -1);
    }
    SUBCASE("strict winner schedules a switch") {
        p.gains = {2.0, 7.0};
        review_best_strategy(p, 0.0);
        CHECK(p.pending_switch == 1);
    }
    SUBCASE("winner with an open background trade settles it first") {
        p.gains = {2.0, 7.0};
        p.virtuals[1] = VirtualPosition{true, 1, 3.0};
        review_best_strategy(p, 6.0);
        CHECK(p.gains[1] == 10.0);  // 7 + (6 - 3)
        CHECK_FALSE(p.virtuals[1].is_open);
        CHECK(p.pending_switch == 1);
    }
    SUBCASE("selection is invariant under a common gain offset") {
        Player q = p;
        q.gains = {2.0, 7.0};
        review_best_strategy(q, 0.0);
        Player r = p;
        r.gains = {2.0 + 1234.5, 7.0 + 1234.5};
        review_best_strategy(r, 0.0);
        CHECK(q.pending_switch == r.pending_switch);
    }
}

TEST_CASE("quiescent step: all-hold tables leave the market untouched") {
    GameConfig cfg = small_config();
    cfg.horizon = 10;
    Game game(cfg);
    for (std::size_t i = 0; i < game.n_players(); ++i) {
        auto& tables = game.player_mut(i).tables;
        std::fill(tables.begin(), tables.end(), std::int8_t{0});
    }
    const double wealth_before = game.player(0).wealth;
    const auto rec = game.step();
    CHECK(rec.dp == 0.0);
    CHECK(rec.h == 0);
    CHECK(rec.volume == 0);
    CHECK(rec.price == cfg.initial_price);
    CHECK(game.market().cognitive_price == 0.0);
    CHECK(game.player(0).wealth == wealth_before);
    CHECK(game.market().time == 1);
}

// Full hand trace, one player moving her own market:
//   t1: pattern 2 -> open long q=1 at p 100->101, h=+1, P=1 (open records P=1)
//   t2: pattern 1 -> hold, dp=0, h=0, P=1
//   t3: pattern 0 -> close, p 101->100, h=-1, P=0; gain = +1*(0-1) = -1,
//       wealth -= 1*q
TEST_CASE("solo round trip settles at the opening step's cognitive price") {
    GameConfig cfg = solo_config(4);
    Game game(cfg);
    install_solo_tables(game);
    game.player_mut(0).wealth = 17.0;  // q = floor(17/9) = 1
    game.player_mut(0).initial_wealth = 17.0;

    const auto r1 = game.step();
    CHECK(r1.dp == 1.0);
    CHECK(r1.h == 1);
    CHECK(r1.volume == 1);
    CHECK(game.player(0).real.is_open);
    CHECK(game.player(0).real.open_cognitive == 1.0);

    const auto r2 = game.step();
    CHECK(r2.dp == 0.0);
    CHECK(r2.h == 0);
    CHECK(game.player(0).real.is_open);

    const auto r3 = game.step();
    CHECK(r3.dp == -1.0);
    CHECK(r3.h == -1);
    CHECK(r3.volume == 1);
    CHECK(r3.price == 100.0);
    CHECK_FALSE(game.player(0).real.is_open);
    CHECK(game.player(0).gains[0] == -1.0);
    CHECK(game.player(0).wealth == 16.0);

    const auto r4 = game.step();
    CHECK(r4.dp == 0.0);
    CHECK(game.player(0).wealth == 16.0);
}

TEST_CASE("bankruptcy boundary: strictly below the lot is replaced") {
    SUBCASE("wealth ends exactly at the lot: kept") {
        Game game(solo_config(3));
        install_solo_tables(game);
        game.player_mut(0).wealth = 10.0;
        game.player_mut(0).initial_wealth = 10.0;
        for (int i = 0; i < 3; ++i) game.step();
        CHECK(game.player(0).wealth == 9.0);
        CHECK(game.player(0).gains[0] == -1.0);  // not reset: same player
    }
    SUBCASE("wealth ends below the lot: replaced by a fresh player") {
        Game game(solo_config(3));
        install_solo_tables(game);
        game.player_mut(0).wealth = 9.0;
        game.player_mut(0).initial_wealth = 9.0;
        for (int i = 0; i < 3; ++i) game.step();
        const Player& p = game.player(0);
        CHECK(p.gains[0] == 0.0);
        CHECK(p.wealth >= 9.0);  // fresh draw orders at least one unit
        CHECK(order_quantity(p.wealth, 9) >= 1);
        CHECK_FALSE(p.real.is_open);
        CHECK(p.active == 0);
        CHECK(p.settled_total == 0.0);
    }
}

TEST_CASE("run: degenerate horizons and determinism") {
    GameConfig cfg = small_config();
    SUBCASE("horizon 0 yields an empty record set and the initial price") {
        cfg.horizon = 0;
        const RunResult rr = run(cfg);
        CHECK(rr.records.empty());
        CHECK(rr.prices.size() == 1);
        CHECK(rr.prices[0] == cfg.initial_price);
    }
    SUBCASE("same seed, same trajectory, bit for bit") {
        cfg.horizon = 500;
        const RunResult a = run(cfg);
        const RunResult b = run(cfg);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].price == b.records[i].price);
            CHECK(a.records[i].dp == b.records[i].dp);
            CHECK(a.records[i].imbalance == b.records[i].imbalance);
            CHECK(a.records[i].perturbation == b.records[i].perturbation);
            CHECK(a.records[i].h == b.records[i].h);
            CHECK(a.records[i].volume == b.records[i].volume);
        }
    }
    SUBCASE("different seeds diverge") {
        cfg.horizon = 200;
        const RunResult a = run(cfg);
        cfg.rng_seed += 1;
        const RunResult b = run(cfg);
        bool any_diff = false;
        for (std::size_t i = 0; i < a.records.size(); ++i)
            any_diff = any_diff || a.records[i].dp != b.records[i].dp;
        CHECK(any_diff);
    }
}

TEST_CASE("run invariants at Pb = 0") {
    GameConfig cfg = small_config();
    const RunResult rr = run(cfg);
    double cog = 0.0;
    for (const auto& r : rr.records) {
        CHECK(r.perturbation == 0.0);           // baseline reduces to the pure imbalance
        CHECK(r.dp == r.imbalance);
        CHECK(quantize_move(r.dp, cfg.cognitive_threshold) == r.h);
        cog += r.h;
    }
    // price sticks near the start on a short baseline run
    const double max_dev =
        std::transform_reduce(rr.prices.begin(), rr.prices.end(), 0.0,
                              [](double a, double b) { return std::max(a, b); },
                              [&](double p) { return std::abs(p - cfg.initial_price); });
    CHECK(max_dev < 25.0);
}

TEST_CASE("run invariants at Pb > 0: quaternary history, audit, telescoping") {
    GameConfig cfg = small_config();
    cfg.perturbation = 0.25;
    cfg.horizon = 4000;
    cfg.validate();
    Game game(cfg);
    for (auto d : game.market().history) CHECK(d != 0);  // seed digits too
    double cog_sum = 0.0;
    for (std::uint64_t t = 0; t < cfg.horizon; ++t) {
        const auto r = game.step();
        CHECK(r.h != 0);
        CHECK((r.h >= -2 && r.h <= 2));
        CHECK(r.dp == r.imbalance + r.perturbation);
        CHECK(quantize_move(r.dp, cfg.cognitive_threshold) == r.h);
        cog_sum += r.h;
    }
    CHECK(game.market().cognitive_price == cog_sum);
    CHECK(game.market().history.size() == cfg.memory + cfg.horizon);

    // wealth audit: every surviving player's wealth is her creation draw plus
    // the sum of her settled adjustments, exactly
    for (std::size_t i = 0; i < game.n_players(); ++i) {
        const Player& p = game.player(i);
        CHECK(p.wealth == p.initial_wealth + p.settled_total);
        CHECK(p.wealth >= 0.0);
        if (!p.real.is_open) CHECK(p.wealth >= cfg.board_lot);
    }
}

TEST_CASE("active strategy's background position mirrors the real one") {
    GameConfig cfg = small_config();
    cfg.perturbation = 0.25;
    cfg.horizon = 1500;
    Game game(cfg);
    for (std::uint64_t t = 0; t < cfg.horizon; ++t) {
        game.step();
        if (t % 100 != 0) continue;
        for (std::size_t i = 0; i < game.n_players(); ++i) {
            const Player& p = game.player(i);
            const auto& mirror = p.virtuals[p.active];
            CHECK(mirror.is_open == p.real.is_open);
            if (p.real.is_open) {
                CHECK(mirror.action == p.real.action);
                CHECK(mirror.open_cognitive == p.real.open_cognitive);
            }
        }
    }
}

TEST_CASE("config validation names the violated constraint") {
    GameConfig cfg;
    cfg.n_players = 0;
    CHECK_THROWS_WITH_AS(cfg.validate(), "n_players must be >= 1", std::invalid_argument);
    cfg = GameConfig{};
    cfg.perturbation = -0.1;
    CHECK_THROWS_WITH_AS(cfg.validate(), "perturbation must be >= 0", std::invalid_argument);
    cfg = GameConfig{};
    cfg.cognitive_threshold = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = GameConfig{};
    cfg.board_lot = 101;
    CHECK_FALSE(cfg.validate().empty());  // warning, not an error
}

TEST_CASE("config json round trip") {
    GameConfig cfg;
    cfg.perturbation = 0.25;
    cfg.rng_seed = 777;
    cfg.horizon = 1234;
    const GameConfig back = GameConfig::from_json_text(cfg.to_json());
    CHECK(back.perturbation == cfg.perturbation);
    CHECK(back.rng_seed == cfg.rng_seed);
    CHECK(back.horizon == cfg.horizon);
    CHECK(back.hash() == cfg.hash());
    CHECK_THROWS_AS(GameConfig::from_json_text("{\"players\": 3}"), std::invalid_argument);
    CHECK_THROWS_AS(GameConfig::from_json_text("not json"), std::invalid_argument);
}

TEST_CASE("alphabet switches with the perturbation") {
    GameConfig cfg;
    CHECK(cfg.alphabet_size() == 5);
    CHECK(cfg.table_size() == 3125);
    cfg.perturbation = 0.25;
    CHECK(cfg.alphabet_size() == 4);
    CHECK(cfg.table_size() == 1024);

    for (std::size_t alphabet : {std::size_t{4}, std::size_t{5}}) {
        for (std::size_t i = 0; i < alphabet; ++i) {
            const int d = decode_digit(i, alphabet);
            CHECK(encode_digit(d, alphabet) == i);
            if (alphabet == 4) CHECK(d != 0);
        }
    }
}
