#include "specgame/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace specgame {

namespace {

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

std::size_t GameConfig::table_size() const {
    std::size_t size = 1;
    for (std::uint32_t i = 0; i < memory; ++i) {
        if (size > (std::size_t{1} << 24))
            throw std::invalid_argument("memory: strategy table would exceed 2^24 entries");
        size *= alphabet_size();
    }
    return size;
}

std::vector<std::string> GameConfig::validate() const {
    if (n_players < 1) throw std::invalid_argument("n_players must be >= 1");
    if (memory < 1) throw std::invalid_argument("memory must be >= 1");
    if (n_strategies < 1) throw std::invalid_argument("n_strategies must be >= 1");
    if (board_lot < 1) throw std::invalid_argument("board_lot must be >= 1");
    if (!(cognitive_threshold > 0.0))
        throw std::invalid_argument("cognitive_threshold must be > 0");
    if (!(perturbation >= 0.0)) throw std::invalid_argument("perturbation must be >= 0");
    (void)table_size();  // throws if memory overflows the table bound

    std::vector<std::string> warnings;
    if (board_lot > 100)
        warnings.push_back("board_lot exceeds the 100-unit initial wealth draw range; "
                           "fresh players will hold at most one lot");
    const double total_mib = static_cast<double>(n_players) * n_strategies *
                             static_cast<double>(table_size()) / (1024.0 * 1024.0);
    if (total_mib > 1024.0)
        warnings.push_back("strategy tables exceed 1 GiB across all players");
    return warnings;
}

std::string GameConfig::to_json(int indent) const {
    nlohmann::json j{
        {"n_players", n_players},
        {"memory", memory},
        {"n_strategies", n_strategies},
        {"board_lot", board_lot},
        {"cognitive_threshold", cognitive_threshold},
        {"perturbation", perturbation},
        {"horizon", horizon},
        {"initial_price", initial_price},
        {"rng_seed", rng_seed},
        {"closes_in_imbalance", closes_in_imbalance},
    };
    return j.dump(indent);
}

GameConfig GameConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    GameConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "n_players") cfg.n_players = value.get<std::uint32_t>();
            else if (key == "memory") cfg.memory = value.get<std::uint32_t>();
            else if (key == "n_strategies") cfg.n_strategies = value.get<std::uint32_t>();
            else if (key == "board_lot") cfg.board_lot = value.get<std::uint32_t>();
            else if (key == "cognitive_threshold") cfg.cognitive_threshold = value.get<double>();
            else if (key == "perturbation") cfg.perturbation = value.get<double>();
            else if (key == "horizon") cfg.horizon = value.get<std::uint64_t>();
            else if (key == "initial_price") cfg.initial_price = value.get<double>();
            else if (key == "rng_seed") cfg.rng_seed = value.get<std::uint64_t>();
            else if (key == "closes_in_imbalance") cfg.closes_in_imbalance = value.get<bool>();
            else throw std::invalid_argument("unknown config key: " + key);
        } catch (const nlohmann::json::exception&) {
            throw std::invalid_argument("config key '" + key + "' has the wrong type");
        }
    }
    return cfg;
}

GameConfig GameConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::uint64_t GameConfig::hash() const { return fnv1a64(to_json(0)); }

std::string GameConfig::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

} // namespace specgame
