#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace specgame {

// All model parameters for one game run.
struct GameConfig {
    std::uint32_t n_players = 1000;    // N
    std::uint32_t memory = 5;          // M, history digits consulted per lookup
    std::uint32_t n_strategies = 2;    // S, tables per player
    std::uint32_t board_lot = 9;       // B, wealth units per order unit
    double cognitive_threshold = 3.0;  // C, |price change| above which a move counts as big
    double perturbation = 0.0;         // Pb, half-width of the uniform noise on the price change
    std::uint64_t horizon = 50000;     // number of steps
    double initial_price = 100.0;      // p(0)
    std::uint64_t rng_seed = 1;
    // Advanced: whether closing orders enter the order-imbalance sum (JSON key
    // "closes_in_imbalance"). Excluding them lets wealth feedback run away
    // unanchored; kept configurable for sensitivity runs.
    bool closes_in_imbalance = true;

    // 5 symbols {-2,-1,0,1,2} without perturbation, 4 symbols {-2,-1,1,2} with.
    std::size_t alphabet_size() const { return perturbation > 0.0 ? 4 : 5; }
    // alphabet_size() ^ memory
    std::size_t table_size() const;

    // Throws std::invalid_argument naming the violated constraint.
    // Returns human-readable warnings for legal but suspicious values.
    std::vector<std::string> validate() const;

    std::string to_json(int indent = 2) const;
    static GameConfig from_json_text(const std::string& text);
    static GameConfig from_json_file(const std::string& path);

    // Stable FNV-1a hash of the canonical JSON form, for manifests.
    std::uint64_t hash() const;
    std::string hash_hex() const;
};

} // namespace specgame
