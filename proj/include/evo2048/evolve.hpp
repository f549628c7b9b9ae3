#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "evo2048/config.hpp"
#include "evo2048/fitness.hpp"
#include "evo2048/history.hpp"
#include "evo2048/operators.hpp"

namespace evo2048 {

struct Individual {
    Policy policy;
    std::optional<FitnessStats> fitness;
    int birth_generation = 0;
    std::vector<GameResult> games;  // results backing `fitness`
};

inline std::vector<Individual> init_population(const EvoConfig& cfg,
                                               RandomStream& rng) {
    std::vector<Individual> pop;
    pop.reserve(cfg.population_size);
    for (int i = 0; i < cfg.population_size; ++i)
        pop.push_back({random_initial_policy(rng), std::nullopt, 0});
    return pop;
}

// Plays the games of one evaluation. Swappable so tests can count budget
// consumption without simulating games.
using GameRunner = std::function<std::vector<GameResult>(
    const Policy&, std::span<const std::uint64_t>)>;

// Receives every protocol record, ordered by (generation, individual).
using ProtocolSink = std::function<void(const ProtocolRecord&)>;

struct EvolutionResult {
    Individual best;
    std::vector<GenerationRecord> history;
    int generations = 0;
    long long games_played = 0;
};

namespace detail {

inline int tournament_pick(const std::vector<Individual>& pop,
                           const EvoConfig& cfg, RandomStream& rng) {
    int best = static_cast<int>(rng.next_below(pop.size()));
    for (int i = 1; i < cfg.tournament_size; ++i) {
        const int challenger = static_cast<int>(rng.next_below(pop.size()));
        if (fitter(*pop[challenger].fitness, *pop[best].fitness,
                   cfg.objective_priority, cfg.comparator_mode))
            best = challenger;
    }
    return best;
}

// Indices of the `count` fittest individuals, ties broken by lower index.
inline std::vector<int> top_indices(const std::vector<Individual>& pop,
                                    const EvoConfig& cfg, int count) {
    std::vector<int> order(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return fitter(*pop[a].fitness, *pop[b].fitness, cfg.objective_priority,
                      cfg.comparator_mode);
    });
    order.resize(count);
    return order;
}

}  // namespace detail

// Generational loop: evaluate, record, then breed the next generation with
// elitism, tournament selection, recombination and exactly one mutation per
// offspring. Stops when the remaining budget cannot pay for the next
// generation's evaluations. Fully determined by cfg (including cfg.seed);
// per-game seeds are pre-derived from (run seed, generation, individual,
// game index) so worker scheduling cannot change any output.
inline EvolutionResult run_evolution(const EvoConfig& cfg,
                                     const ProtocolSink& sink = nullptr,
                                     const GameRunner& runner = nullptr) {
    cfg.validate();
    const GameRunner& run_games_fn =
        runner ? runner
               : GameRunner([](const Policy& p, std::span<const std::uint64_t> s) {
                     return play_games(p, s);
                 });

    RandomStream op_rng(derive_seed(cfg.seed, 0x0E5ULL));
    std::vector<Individual> pop = init_population(cfg, op_rng);

    EvolutionResult result;
    long long remaining = cfg.evaluation_budget;
    int gen = 0;
    bool have_best = false;

    for (;;) {
        std::vector<int> to_eval;
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (cfg.reevaluate_elites || !pop[i].fitness)
                to_eval.push_back(static_cast<int>(i));

        const long long cost =
            static_cast<long long>(to_eval.size()) * cfg.games_per_eval;
        if (remaining < cost) break;
        remaining -= cost;
        result.games_played += cost;

        // Evaluate; records are written by index, so scheduling is irrelevant.
        std::vector<ProtocolRecord> fresh(to_eval.size());
        const auto evaluate_one = [&](std::size_t k) {
            const int idx = to_eval[k];
            std::vector<std::uint64_t> seeds(cfg.games_per_eval);
            for (int g = 0; g < cfg.games_per_eval; ++g)
                seeds[g] = derive_seed(cfg.seed, static_cast<std::uint64_t>(gen),
                                       static_cast<std::uint64_t>(idx),
                                       static_cast<std::uint64_t>(g));
            ProtocolRecord rec;
            rec.generation = gen;
            rec.individual = idx;
            rec.games = run_games_fn(pop[idx].policy, seeds);
            rec.stats = stats_from_games(rec.games);
            fresh[k] = std::move(rec);
        };
        if (cfg.threads > 1 && to_eval.size() > 1) {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> workers;
            const int n = std::min<int>(cfg.threads, static_cast<int>(to_eval.size()));
            for (int t = 0; t < n; ++t)
                workers.emplace_back([&] {
                    for (std::size_t k; (k = next.fetch_add(1)) < to_eval.size();)
                        evaluate_one(k);
                });
            for (auto& w : workers) w.join();
        } else {
            for (std::size_t k = 0; k < to_eval.size(); ++k) evaluate_one(k);
        }

        for (std::size_t k = 0; k < to_eval.size(); ++k) {
            pop[to_eval[k]].fitness = fresh[k].stats;
            pop[to_eval[k]].games = fresh[k].games;
        }

        // Full per-generation records in individual order for history/sink.
        std::vector<ProtocolRecord> gen_records;
        gen_records.reserve(pop.size());
        std::size_t fresh_pos = 0;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (fresh_pos < to_eval.size() &&
                to_eval[fresh_pos] == static_cast<int>(i)) {
                gen_records.push_back(fresh[fresh_pos++]);
            } else {
                // Cached elite: re-emit its previous game results.
                ProtocolRecord rec;
                rec.generation = gen;
                rec.individual = static_cast<int>(i);
                rec.games = pop[i].games;
                rec.stats = *pop[i].fitness;
                gen_records.push_back(std::move(rec));
            }
        }
        if (sink)
            for (const ProtocolRecord& rec : gen_records) sink(rec);

        GenerationRecord summary = summarize_generation(
            gen_records, cfg.objective_priority, cfg.comparator_mode);
        const Individual& gen_best = pop[summary.best_index];
        if (!have_best || fitter(*gen_best.fitness, *result.best.fitness,
                                 cfg.objective_priority, cfg.comparator_mode)) {
            result.best = gen_best;
            have_best = true;
        }
        result.history.push_back(std::move(summary));
        ++gen;
        result.generations = gen;

        // Breed the next generation.
        std::vector<Individual> next_pop;
        next_pop.reserve(pop.size());
        for (int idx : detail::top_indices(pop, cfg, cfg.elitism))
            next_pop.push_back(pop[idx]);
        while (next_pop.size() < pop.size()) {
            const int pa = detail::tournament_pick(pop, cfg, op_rng);
            const int pb = detail::tournament_pick(pop, cfg, op_rng);
            Policy ca, cb;
            if (op_rng.chance(cfg.recombination_rate)) {
                std::tie(ca, cb) = recombine(pop[pa].policy, pop[pb].policy, op_rng);
            } else {
                ca = pop[pa].policy;
                cb = pop[pb].policy;
            }
            for (Policy* child : {&ca, &cb}) {
                if (next_pop.size() >= pop.size()) break;
                mutate(*child, op_rng);
                next_pop.push_back({std::move(*child), std::nullopt, gen});
            }
        }
        pop = std::move(next_pop);
    }

    return result;
}

}  // namespace evo2048
