#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "evo2048/compare.hpp"
#include "evo2048/fitness.hpp"

namespace evo2048 {

// Per-generation summary (the plotted series): the best individual's
// statistics plus population means.
struct GenerationRecord {
    int generation = 0;
    int best_index = 0;
    FitnessStats best;
    double gen_mean_max_tile = 0.0;
    double gen_mean_avg_tile = 0.0;
};

// Builds the summary for one generation from its protocol records, which
// must be ordered by individual index. The same function backs the live run
// and the offline recomputation, so the two agree byte for byte.
inline GenerationRecord summarize_generation(
    std::span<const ProtocolRecord> records,
    const std::vector<Objective>& priority = default_priority(),
    ComparatorMode mode = ComparatorMode::DominanceThenLex) {
    GenerationRecord rec;
    rec.generation = records.empty() ? 0 : records.front().generation;
    double sum_max = 0.0, sum_avg = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const FitnessStats& s = records[i].stats;
        sum_max += static_cast<double>(s.highest_tile.max);
        sum_avg += s.highest_tile.avg;
        if (i == 0 || fitter(s, rec.best, priority, mode)) {
            rec.best = s;
            rec.best_index = records[i].individual;
        }
    }
    if (!records.empty()) {
        rec.gen_mean_max_tile = sum_max / static_cast<double>(records.size());
        rec.gen_mean_avg_tile = sum_avg / static_cast<double>(records.size());
    }
    return rec;
}

inline constexpr const char* kHistoryCsvHeader =
    "generation,best_max_tile,best_avg_tile,gen_mean_max_tile,"
    "gen_mean_avg_tile,best_avg_score";

inline std::string history_csv_row(const GenerationRecord& r) {
    return std::to_string(r.generation) + "," +
           std::to_string(r.best.highest_tile.max) + "," +
           format_double(r.best.highest_tile.avg) + "," +
           format_double(r.gen_mean_max_tile) + "," +
           format_double(r.gen_mean_avg_tile) + "," +
           format_double(r.best.total_score.avg);
}

inline std::string history_csv(std::span<const GenerationRecord> history) {
    std::string out = kHistoryCsvHeader;
    out += '\n';
    for (const GenerationRecord& r : history) {
        out += history_csv_row(r);
        out += '\n';
    }
    return out;
}

// Parses one protocol.jsonl line back into a record.
inline ProtocolRecord parse_protocol_line(const std::string& line) {
    const nlohmann::json j = nlohmann::json::parse(line);
    ProtocolRecord rec;
    rec.generation = j.at("gen").get<int>();
    rec.individual = j.at("ind").get<int>();
    for (const auto& g : j.at("games")) {
        GameResult gr;
        gr.seed = g.at("seed").get<std::uint64_t>();
        gr.total_score = g.at("score").get<std::int64_t>();
        gr.highest_tile = g.at("max_tile").get<Tile>();
        gr.moves = g.at("moves").get<int>();
        gr.reached_2048 = gr.highest_tile >= 2048;
        rec.games.push_back(gr);
    }
    rec.stats = stats_from_games(rec.games);
    return rec;
}

}  // namespace evo2048
