#include <doctest.h>

#include <sstream>

#include "evo2048/evolve.hpp"

using namespace evo2048;

namespace {

// Cheap deterministic stand-in for game simulation: rewards shorter
// policies so selection has a gradient to follow without playing games.
std::vector<GameResult> stub_runner(const Policy& p,
                                    std::span<const std::uint64_t> seeds) {
    std::vector<GameResult> out;
    for (std::uint64_t seed : seeds) {
        GameResult g;
        g.seed = seed;
        g.highest_tile = 2u << (seed % 5);
        g.total_score = static_cast<std::int64_t>(seed % 1000) +
                        static_cast<std::int64_t>(p.rules.size());
        g.moves = 1;
        out.push_back(g);
    }
    return out;
}

EvoConfig small_config() {
    EvoConfig cfg;
    cfg.population_size = 10;
    cfg.games_per_eval = 2;
    cfg.evaluation_budget = 400;
    cfg.seed = 7;
    return cfg;
}

}  // namespace

TEST_CASE("generation count follows the budget arithmetic") {
    EvoConfig cfg;
    cfg.population_size = 100;
    cfg.games_per_eval = 6;
    cfg.evaluation_budget = 1200;
    const EvolutionResult r = run_evolution(cfg, nullptr, stub_runner);
    CHECK(r.generations == 2);
    CHECK(r.games_played == 1200);

    cfg.evaluation_budget = 1799;  // one game short of the third generation
    CHECK(run_evolution(cfg, nullptr, stub_runner).generations == 2);
}

TEST_CASE("budget below one generation is a configuration error") {
    EvoConfig cfg;
    cfg.population_size = 100;
    cfg.games_per_eval = 6;
    cfg.evaluation_budget = 599;
    CHECK_THROWS_AS(run_evolution(cfg, nullptr, stub_runner), ConfigError);
}

TEST_CASE("budget is never exceeded") {
    EvoConfig cfg = small_config();
    cfg.evaluation_budget = 437;  // not a multiple of the generation cost
    const EvolutionResult r = run_evolution(cfg, nullptr, stub_runner);
    CHECK(r.games_played <= cfg.evaluation_budget);
    CHECK(r.generations == 21);  // floor(437 / 20)
}

TEST_CASE("identical seeds give identical histories and protocols") {
    const EvoConfig cfg = small_config();
    auto run = [&](int threads) {
        EvoConfig c = cfg;
        c.threads = threads;
        std::ostringstream protocol;
        const auto sink = [&](const ProtocolRecord& rec) {
            protocol << protocol_line(rec) << '\n';
        };
        const EvolutionResult r = run_evolution(c, sink);
        return std::pair{history_csv(r.history), protocol.str()};
    };
    const auto [h1, p1] = run(1);
    const auto [h2, p2] = run(1);
    CHECK(h1 == h2);
    CHECK(p1 == p2);

    const auto [h4, p4] = run(4);
    CHECK(h1 == h4);
    CHECK(p1 == p4);
}

TEST_CASE("different seeds give different runs") {
    EvoConfig a = small_config();
    EvoConfig b = small_config();
    b.seed = 8;
    const EvolutionResult ra = run_evolution(a);
    const EvolutionResult rb = run_evolution(b);
    CHECK(history_csv(ra.history) != history_csv(rb.history));
}

TEST_CASE("elite fitness is monotone when elites are cached") {
    EvoConfig cfg = small_config();
    cfg.reevaluate_elites = false;
    cfg.evaluation_budget = 2000;
    const EvolutionResult r = run_evolution(cfg, nullptr, stub_runner);
    for (std::size_t g = 1; g < r.history.size(); ++g) {
        CHECK(compare(r.history[g].best, r.history[g - 1].best,
                      cfg.objective_priority,
                      cfg.comparator_mode) != Ordering::Worse);
    }
}

TEST_CASE("protocol sink sees every individual of every generation in order") {
    const EvoConfig cfg = small_config();
    std::vector<std::pair<int, int>> seen;
    const auto sink = [&](const ProtocolRecord& rec) {
        seen.emplace_back(rec.generation, rec.individual);
        CHECK(rec.games.size() == static_cast<std::size_t>(cfg.games_per_eval));
        CHECK(rec.stats.games == cfg.games_per_eval);
    };
    const EvolutionResult r = run_evolution(cfg, sink, stub_runner);
    REQUIRE(seen.size() ==
            static_cast<std::size_t>(r.generations * cfg.population_size));
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i - 1] < seen[i]);
}

TEST_CASE("population invariants hold throughout a real run") {
    EvoConfig cfg = small_config();
    cfg.evaluation_budget = 200;
    const EvolutionResult r = run_evolution(cfg);
    CHECK(r.generations == 10);
    REQUIRE(r.best.fitness.has_value());
    CHECK(policy_valid(r.best.policy));
    CHECK(r.best.fitness->games == cfg.games_per_eval);
    for (const GenerationRecord& g : r.history) {
        CHECK(g.best.highest_tile.min <= g.best.highest_tile.max);
        CHECK(g.gen_mean_max_tile >= g.gen_mean_avg_tile);
    }
}

TEST_CASE("config parsing") {
    std::istringstream in(
        "population_size = 30\n"
        "games_per_eval = 4   # comment\n"
        "\n"
        "evaluation_budget = 12000\n"
        "seed = 99\n"
        "recombination_rate = 0.5\n"
        "objective_priority = avg_highest_tile, avg_total_score\n"
        "comparator_mode = lex_only\n"
        "reevaluate_elites = false\n");
    const EvoConfig cfg = parse_config(in);
    CHECK(cfg.population_size == 30);
    CHECK(cfg.games_per_eval == 4);
    CHECK(cfg.evaluation_budget == 12000);
    CHECK(cfg.seed == 99);
    CHECK(cfg.recombination_rate == 0.5);
    CHECK(cfg.objective_priority ==
          std::vector<Objective>{Objective::AvgHighestTile,
                                 Objective::AvgTotalScore});
    CHECK(cfg.comparator_mode == ComparatorMode::LexOnly);
    CHECK_FALSE(cfg.reevaluate_elites);

    std::istringstream bad_key("unknown_key = 3\n");
    CHECK_THROWS_AS(parse_config(bad_key), ConfigError);
    std::istringstream bad_value("population_size = banana\n");
    CHECK_THROWS_AS(parse_config(bad_value), ConfigError);
    std::istringstream bad_budget(
        "population_size = 100\nevaluation_budget = 10\n");
    CHECK_THROWS_AS(parse_config(bad_budget), ConfigError);
}
