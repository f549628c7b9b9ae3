// Command-line front end: evolve policies, play games, explain decisions,
// recompute run statistics from protocol logs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evo2048/config.hpp"
#include "evo2048/evolve.hpp"
#include "evo2048/export.hpp"
#include "evo2048/fitness.hpp"
#include "evo2048/history.hpp"
#include "evo2048/policy_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

evo2048::Policy load_policy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw evo2048::ConfigError("cannot open policy file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return evo2048::policy_from_string(text);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int cmd_evolve(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override,
               std::optional<int> threads_override) {
    evo2048::EvoConfig cfg =
        config_path.empty() ? evo2048::EvoConfig{} : evo2048::load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (threads_override) cfg.threads = *threads_override;
    cfg.validate();

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    std::ofstream protocol(dir / "protocol.jsonl", std::ios::binary);
    if (!protocol) throw std::runtime_error("cannot write protocol.jsonl");
    const auto sink = [&](const evo2048::ProtocolRecord& rec) {
        protocol << evo2048::protocol_line(rec) << '\n';
    };

    const evo2048::EvolutionResult result = evo2048::run_evolution(cfg, sink);
    protocol.close();

    write_file(dir / "history.csv", evo2048::history_csv(result.history));
    write_file(dir / "best_policy.json",
               evo2048::policy_to_string(result.best.policy));
    write_file(dir / "best_policy.txt",
               evo2048::emit_pseudocode(result.best.policy));
    write_file(dir / "best_policy.py",
               evo2048::emit_executable(result.best.policy));

    const evo2048::FitnessStats& best = *result.best.fitness;
    std::cout << "generations: " << result.generations << '\n'
              << "games played: " << result.games_played << '\n'
              << "best max(highest_tile): " << best.highest_tile.max << '\n'
              << "best avg(highest_tile): "
              << evo2048::format_double(best.highest_tile.avg) << '\n'
              << "best avg(total_score): "
              << evo2048::format_double(best.total_score.avg) << '\n';
    return kExitOk;
}

int cmd_play(const std::string& policy_path, std::uint64_t seed, int games,
             const std::string& trace_path) {
    const evo2048::Policy policy = load_policy(policy_path);
    std::ofstream trace;
    if (!trace_path.empty()) {
        trace.open(trace_path, std::ios::binary);
        if (!trace) throw std::runtime_error("cannot write " + trace_path);
    }

    std::vector<evo2048::GameResult> results;
    for (int g = 0; g < games; ++g) {
        const std::uint64_t game_seed = evo2048::derive_seed(seed, g);
        if (trace.is_open()) {
            // Re-run the game loop here so each decision can be logged.
            evo2048::RandomStream rng(game_seed);
            evo2048::Board board = evo2048::new_game(rng);
            evo2048::GameResult r;
            r.seed = game_seed;
            while (r.moves < evo2048::kMoveCap && !evo2048::is_game_over(board)) {
                const evo2048::Decision d = evo2048::decide(policy, board);
                trace << "{\"board\":[";
                for (int i = 0; i < 16; ++i)
                    trace << (i ? "," : "") << board.cells[i];
                trace << "],\"chosen\":\"" << evo2048::direction_name(d.dir)
                      << "\"}\n";
                const evo2048::MoveOutcome o = evo2048::apply_move(board, d.dir);
                r.total_score += o.score_gain;
                r.moves += 1;
                board = evo2048::spawn_tile(o.board_after, rng);
            }
            r.highest_tile = board.max_tile();
            r.reached_2048 = r.highest_tile >= 2048;
            results.push_back(r);
        } else {
            results.push_back(evo2048::play_game(policy, game_seed));
        }
        const evo2048::GameResult& r = results.back();
        std::cout << "game " << g << ": score " << r.total_score << ", max tile "
                  << r.highest_tile << ", moves " << r.moves << '\n';
    }

    const evo2048::FitnessStats stats = evo2048::stats_from_games(results);
    std::cout << "highest_tile min/avg/max: " << stats.highest_tile.min << "/"
              << evo2048::format_double(stats.highest_tile.avg) << "/"
              << stats.highest_tile.max << '\n'
              << "total_score min/avg/max: " << stats.total_score.min << "/"
              << evo2048::format_double(stats.total_score.avg) << "/"
              << stats.total_score.max << '\n';
    return kExitOk;
}

int cmd_explain(const std::string& policy_path, const std::string& board_text,
                bool full) {
    const evo2048::Policy policy = load_policy(policy_path);
    evo2048::Board board;
    if (!evo2048::Board::from_text(board_text, board)) {
        std::cerr << "error: board must be 16 integers (0 or powers of two), "
                     "row-major\n";
        return kExitUsage;
    }
    if (evo2048::is_game_over(board)) {
        std::cerr << "error: no legal move on this board\n";
        return kExitDomain;
    }
    const evo2048::ExplanationTrace trace = evo2048::explain(policy, board, full);
    for (const evo2048::RuleTrace& r : trace.rules) {
        std::cout << "rule " << r.rule_index << " -> "
                  << evo2048::direction_name(r.action)
                  << (r.action_legal ? "" : " (illegal)") << ": ";
        if (!r.evaluated) {
            std::cout << "not evaluated\n";
            continue;
        }
        std::cout << (r.condition_value ? "true" : "false") << '\n';
        for (const evo2048::LeafTrace& l : r.leaves) {
            std::cout << "  " << l.description;
            if (l.operands.size() == 2)
                std::cout << "  [" << l.operands[0] << " vs " << l.operands[1]
                          << "]";
            std::cout << " -> " << (l.result ? "true" : "false") << '\n';
        }
    }
    if (trace.fired)
        std::cout << "fired rule " << *trace.fired;
    else
        std::cout << "no rule fired, fallback";
    std::cout << "; move " << evo2048::direction_name(trace.chosen) << "\n\n";
    std::cout << evo2048::explanation_to_json(trace).dump(2) << '\n';
    return kExitOk;
}

int cmd_stats(const std::string& protocol_path,
              const std::string& priority_spec, const std::string& mode_spec) {
    std::ifstream in(protocol_path);
    if (!in) {
        std::cerr << "error: cannot open " << protocol_path << '\n';
        return kExitUsage;
    }
    std::vector<evo2048::Objective> priority = evo2048::default_priority();
    if (!priority_spec.empty()) {
        priority.clear();
        std::istringstream items(priority_spec);
        std::string item;
        while (std::getline(items, item, ',')) {
            evo2048::Objective o;
            if (!evo2048::parse_objective(item, o)) {
                std::cerr << "error: unknown objective: " << item << '\n';
                return kExitUsage;
            }
            priority.push_back(o);
        }
    }
    evo2048::ComparatorMode mode = evo2048::ComparatorMode::DominanceThenLex;
    if (mode_spec == "lex_only") mode = evo2048::ComparatorMode::LexOnly;

    std::map<int, std::vector<evo2048::ProtocolRecord>> by_gen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            evo2048::ProtocolRecord rec = evo2048::parse_protocol_line(line);
            by_gen[rec.generation].push_back(std::move(rec));
        } catch (const std::exception& e) {
            std::cerr << "error: bad protocol record at line " << lineno << ": "
                      << e.what() << '\n';
            return kExitUsage;
        }
    }
    if (by_gen.empty()) {
        std::cerr << "error: empty protocol\n";
        return kExitUsage;
    }
    std::cout << evo2048::kHistoryCsvHeader << '\n';
    for (auto& [gen, records] : by_gen) {
        std::stable_sort(records.begin(), records.end(),
                         [](const auto& a, const auto& b) {
                             return a.individual < b.individual;
                         });
        std::cout << evo2048::history_csv_row(
                         evo2048::summarize_generation(records, priority, mode))
                  << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolving interpretable rule policies for 2048"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads_override;
    auto* evolve = app.add_subcommand("evolve", "Run the evolutionary search");
    evolve->add_option("--config", config_path, "Flat key = value config file");
    evolve->add_option("--out", out_dir, "Output directory");
    evolve->add_option("--seed", seed_override, "Override the config seed");
    evolve->add_option("--threads", threads_override, "Evaluation worker count");

    std::string policy_path, trace_path;
    std::uint64_t play_seed = 1;
    int play_games = 1;
    auto* play = app.add_subcommand("play", "Play games with a policy");
    play->add_option("--policy", policy_path, "Policy JSON file")->required();
    play->add_option("--seed", play_seed, "Run seed");
    play->add_option("--games", play_games, "Number of games")
        ->check(CLI::PositiveNumber);
    play->add_option("--trace", trace_path,
                     "Write a JSON-lines decision trace ({board, chosen})");

    std::string explain_policy, board_text;
    bool full = false;
    auto* explain = app.add_subcommand("explain", "Explain one decision");
    explain->add_option("--policy", explain_policy, "Policy JSON file")->required();
    explain->add_option("--board", board_text, "16 integers, row-major")
        ->required();
    explain->add_flag("--full", full, "Evaluate every rule, not only up to the "
                                      "firing one");

    std::string protocol_path, priority_spec, mode_spec;
    auto* stats = app.add_subcommand("stats", "Recompute per-generation CSV "
                                              "from protocol.jsonl");
    stats->add_option("protocol", protocol_path, "protocol.jsonl path")->required();
    stats->add_option("--priority", priority_spec,
                      "Comma-separated objective priority");
    stats->add_option("--mode", mode_spec,
                      "Comparator mode: dominance_then_lex | lex_only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*evolve)
            return cmd_evolve(config_path, out_dir, seed_override, threads_override);
        if (*play) return cmd_play(policy_path, play_seed, play_games, trace_path);
        if (*explain) return cmd_explain(explain_policy, board_text, full);
        if (*stats) return cmd_stats(protocol_path, priority_spec, mode_spec);
    } catch (const evo2048::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const evo2048::PolicyParseError& e) {
        std::cerr << "policy error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}
