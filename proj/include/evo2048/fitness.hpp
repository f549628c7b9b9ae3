#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "evo2048/engine.hpp"
#include "evo2048/policy.hpp"

namespace evo2048 {

// Safety cap; games continue past 2048 until no legal move remains.
inline constexpr int kMoveCap = 10000;

inline GameResult play_game(const Policy& policy, std::uint64_t seed) {
    RandomStream rng(seed);
    Board board = new_game(rng);
    GameResult result;
    result.seed = seed;
    while (result.moves < kMoveCap && !is_game_over(board)) {
        const Decision d = decide(policy, board);
        const MoveOutcome outcome = apply_move(board, d.dir);
        result.total_score += outcome.score_gain;
        result.moves += 1;
        board = spawn_tile(outcome.board_after, rng);
    }
    result.highest_tile = board.max_tile();
    result.reached_2048 = result.highest_tile >= 2048;
    return result;
}

struct ObjectiveStat {
    std::int64_t min = 0;
    std::int64_t max = 0;
    double avg = 0.0;
};

struct FitnessStats {
    ObjectiveStat highest_tile;
    ObjectiveStat total_score;
    int games = 0;
};

inline FitnessStats stats_from_games(std::span<const GameResult> games) {
    FitnessStats s;
    s.games = static_cast<int>(games.size());
    if (games.empty()) return s;
    s.highest_tile = {games[0].highest_tile, games[0].highest_tile, 0.0};
    s.total_score = {games[0].total_score, games[0].total_score, 0.0};
    double tile_sum = 0, score_sum = 0;
    for (const GameResult& g : games) {
        s.highest_tile.min = std::min<std::int64_t>(s.highest_tile.min, g.highest_tile);
        s.highest_tile.max = std::max<std::int64_t>(s.highest_tile.max, g.highest_tile);
        s.total_score.min = std::min(s.total_score.min, g.total_score);
        s.total_score.max = std::max(s.total_score.max, g.total_score);
        tile_sum += static_cast<double>(g.highest_tile);
        score_sum += static_cast<double>(g.total_score);
    }
    s.highest_tile.avg = tile_sum / s.games;
    s.total_score.avg = score_sum / s.games;
    return s;
}

inline std::vector<GameResult> play_games(const Policy& policy,
                                          std::span<const std::uint64_t> seeds) {
    std::vector<GameResult> out;
    out.reserve(seeds.size());
    for (std::uint64_t seed : seeds) out.push_back(play_game(policy, seed));
    return out;
}

inline FitnessStats evaluate(const Policy& policy,
                             std::span<const std::uint64_t> seeds) {
    return stats_from_games(play_games(policy, seeds));
}

// 17 significant digits: doubles round-trip exactly through the text form.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// One evaluation of one individual; the unit of the protocol log.
struct ProtocolRecord {
    int generation = 0;
    int individual = 0;
    std::vector<GameResult> games;
    FitnessStats stats;
};

// JSON-lines rendering, one record per line:
// {"gen":g,"ind":i,"games":[...],"stats":{...}}
inline std::string protocol_line(const ProtocolRecord& rec) {
    std::string out;
    out += "{\"gen\":" + std::to_string(rec.generation);
    out += ",\"ind\":" + std::to_string(rec.individual);
    out += ",\"games\":[";
    for (std::size_t i = 0; i < rec.games.size(); ++i) {
        const GameResult& g = rec.games[i];
        if (i) out += ',';
        out += "{\"seed\":" + std::to_string(g.seed);
        out += ",\"score\":" + std::to_string(g.total_score);
        out += ",\"max_tile\":" + std::to_string(g.highest_tile);
        out += ",\"moves\":" + std::to_string(g.moves) + "}";
    }
    out += "],\"stats\":{";
    const auto obj = [](const char* name, const ObjectiveStat& s) {
        return std::string("\"") + name + "\":{\"min\":" + std::to_string(s.min) +
               ",\"max\":" + std::to_string(s.max) +
               ",\"avg\":" + format_double(s.avg) + "}";
    };
    out += obj("highest_tile", rec.stats.highest_tile);
    out += ",";
    out += obj("total_score", rec.stats.total_score);
    out += ",\"games\":" + std::to_string(rec.stats.games);
    out += "}}";
    return out;
}

}  // namespace evo2048
