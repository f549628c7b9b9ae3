#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evo2048/compare.hpp"

namespace evo2048 {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvoConfig {
    int population_size = 100;
    int games_per_eval = 6;
    long long evaluation_budget = 200000;
    std::uint64_t seed = 1;
    double recombination_rate = 0.7;
    int tournament_size = 2;
    int elitism = 1;
    bool reevaluate_elites = true;
    int threads = 1;
    std::vector<Objective> objective_priority = default_priority();
    ComparatorMode comparator_mode = ComparatorMode::DominanceThenLex;

    void validate() const {
        if (population_size < 2)
            throw ConfigError("population_size must be >= 2");
        if (games_per_eval < 1)
            throw ConfigError("games_per_eval must be >= 1");
        if (evaluation_budget <
            static_cast<long long>(population_size) * games_per_eval)
            throw ConfigError(
                "evaluation_budget smaller than one generation "
                "(population_size * games_per_eval)");
        if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
        if (elitism < 0 || elitism >= population_size)
            throw ConfigError("elitism must be in [0, population_size)");
        if (recombination_rate < 0.0 || recombination_rate > 1.0)
            throw ConfigError("recombination_rate must be in [0, 1]");
        if (threads < 1) throw ConfigError("threads must be >= 1");
        if (objective_priority.empty())
            throw ConfigError("objective_priority must not be empty");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

// Flat `key = value` config, one pair per line; '#' starts a comment.
inline EvoConfig parse_config(std::istream& in) {
    EvoConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        try {
            if (key == "population_size") {
                cfg.population_size = std::stoi(value);
            } else if (key == "games_per_eval") {
                cfg.games_per_eval = std::stoi(value);
            } else if (key == "evaluation_budget") {
                cfg.evaluation_budget = std::stoll(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "recombination_rate") {
                cfg.recombination_rate = std::stod(value);
            } else if (key == "tournament_size") {
                cfg.tournament_size = std::stoi(value);
            } else if (key == "elitism") {
                cfg.elitism = std::stoi(value);
            } else if (key == "reevaluate_elites") {
                if (value == "true") cfg.reevaluate_elites = true;
                else if (value == "false") cfg.reevaluate_elites = false;
                else throw ConfigError("expected true/false");
            } else if (key == "threads") {
                cfg.threads = std::stoi(value);
            } else if (key == "comparator_mode") {
                if (value == "dominance_then_lex")
                    cfg.comparator_mode = ComparatorMode::DominanceThenLex;
                else if (value == "lex_only")
                    cfg.comparator_mode = ComparatorMode::LexOnly;
                else throw ConfigError("unknown comparator_mode");
            } else if (key == "objective_priority") {
                cfg.objective_priority.clear();
                std::istringstream items(value);
                std::string item;
                while (std::getline(items, item, ',')) {
                    Objective o;
                    if (!parse_objective(detail::trim(item), o))
                        throw ConfigError("unknown objective: " + item);
                    cfg.objective_priority.push_back(o);
                }
            } else {
                throw ConfigError("unknown key: " + key);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": bad value for " + key);
        }
    }
    cfg.validate();
    return cfg;
}

inline EvoConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

}  // namespace evo2048
