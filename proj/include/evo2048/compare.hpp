#pragma once

#include <string>
#include <vector>

#include "evo2048/fitness.hpp"

namespace evo2048 {

enum class Objective : int {
    AvgHighestTile = 0,
    MaxHighestTile,
    MinHighestTile,
    AvgTotalScore,
    MaxTotalScore,
    MinTotalScore,
};

inline const char* objective_name(Objective o) {
    switch (o) {
        case Objective::AvgHighestTile: return "avg_highest_tile";
        case Objective::MaxHighestTile: return "max_highest_tile";
        case Objective::MinHighestTile: return "min_highest_tile";
        case Objective::AvgTotalScore: return "avg_total_score";
        case Objective::MaxTotalScore: return "max_total_score";
        case Objective::MinTotalScore: return "min_total_score";
    }
    return "?";
}

inline bool parse_objective(const std::string& s, Objective& out) {
    for (int i = 0; i <= static_cast<int>(Objective::MinTotalScore); ++i) {
        if (s == objective_name(static_cast<Objective>(i))) {
            out = static_cast<Objective>(i);
            return true;
        }
    }
    return false;
}

inline double objective_value(const FitnessStats& s, Objective o) {
    switch (o) {
        case Objective::AvgHighestTile: return s.highest_tile.avg;
        case Objective::MaxHighestTile: return static_cast<double>(s.highest_tile.max);
        case Objective::MinHighestTile: return static_cast<double>(s.highest_tile.min);
        case Objective::AvgTotalScore: return s.total_score.avg;
        case Objective::MaxTotalScore: return static_cast<double>(s.total_score.max);
        case Objective::MinTotalScore: return static_cast<double>(s.total_score.min);
    }
    return 0.0;
}

// Default priority rewards robustness: the average highest tile outranks
// the single best tile, which outranks the average score.
inline const std::vector<Objective>& default_priority() {
    static const std::vector<Objective> p = {Objective::AvgHighestTile,
                                             Objective::MaxHighestTile,
                                             Objective::AvgTotalScore};
    return p;
}

enum class ComparatorMode { DominanceThenLex, LexOnly };

enum class Ordering : int { Worse = -1, Equal = 0, Better = 1 };

// Priority-ordered Pareto comparison of `a` against `b` (maximizing).
// Pareto dominance over the listed objectives wins outright; incomparable
// or equal pairs fall back to lexicographic order along the priority list.
inline Ordering compare(const FitnessStats& a, const FitnessStats& b,
                        const std::vector<Objective>& priority = default_priority(),
                        ComparatorMode mode = ComparatorMode::DominanceThenLex) {
    if (mode == ComparatorMode::DominanceThenLex) {
        bool a_above = false, b_above = false;
        for (Objective o : priority) {
            const double va = objective_value(a, o);
            const double vb = objective_value(b, o);
            if (va > vb) a_above = true;
            if (vb > va) b_above = true;
        }
        if (a_above && !b_above) return Ordering::Better;
        if (b_above && !a_above) return Ordering::Worse;
    }
    for (Objective o : priority) {
        const double va = objective_value(a, o);
        const double vb = objective_value(b, o);
        if (va > vb) return Ordering::Better;
        if (vb > va) return Ordering::Worse;
    }
    return Ordering::Equal;
}

inline bool fitter(const FitnessStats& a, const FitnessStats& b,
                   const std::vector<Objective>& priority = default_priority(),
                   ComparatorMode mode = ComparatorMode::DominanceThenLex) {
    return compare(a, b, priority, mode) == Ordering::Better;
}

}  // namespace evo2048
