#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "evo2048/engine.hpp"

namespace evo2048 {

// Structural caps. Bloat control for the evolutionary search.
inline constexpr int kMaxRules = 12;
inline constexpr int kMaxChildren = 4;
inline constexpr int kMaxDepth = 4;
inline constexpr int kMaxConst = 4096;

// The ten board-state query functions.
enum class QueryId : int {
    CanMoveInDirection = 0,  // (d) -> bool
    CanMoveInDirections,     // (d1, d2) -> bool
    ScoreGain,               // (d) -> num
    ScoreGains,              // (d1, d2) -> num
    WillBeSorted,            // (d) -> bool
    EmptyCellGain,           // (d) -> num
    EmptyCells,              // () -> num
    MaxTile,                 // () -> num
    MaxTileInCorner,         // () -> bool
    MergeCount,              // (d) -> num
};

inline constexpr int kQueryCount = 10;

struct QueryInfo {
    const char* name;
    int arity;
    bool returns_bool;
};

inline const QueryInfo& query_info(QueryId id) {
    static const std::array<QueryInfo, kQueryCount> table = {{
        {"canMoveInDirection", 1, true},
        {"canMoveInDirections", 2, true},
        {"scoreGain", 1, false},
        {"scoreGains", 2, false},
        {"willBeSorted", 1, true},
        {"emptyCellGain", 1, false},
        {"emptyCells", 0, false},
        {"maxTile", 0, false},
        {"maxTileInCorner", 0, true},
        {"mergeCount", 1, false},
    }};
    return table[static_cast<int>(id)];
}

inline bool parse_query_id(const std::string& name, QueryId& out) {
    for (int i = 0; i < kQueryCount; ++i) {
        if (name == query_info(static_cast<QueryId>(i)).name) {
            out = static_cast<QueryId>(i);
            return true;
        }
    }
    return false;
}

struct QueryCall {
    QueryId fn = QueryId::CanMoveInDirection;
    std::array<Direction, 2> args{Direction::Up, Direction::Up};

    int arity() const { return query_info(fn).arity; }
    bool returns_bool() const { return query_info(fn).returns_bool; }
    bool operator==(const QueryCall&) const = default;
};

enum class CmpOp : int { Lt = 0, Le, Gt, Ge, Eq };

inline const char* cmp_op_name(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
        case CmpOp::Eq: return "==";
    }
    return "?";
}

inline bool parse_cmp_op(const std::string& s, CmpOp& out) {
    for (int i = 0; i <= static_cast<int>(CmpOp::Eq); ++i) {
        if (s == cmp_op_name(static_cast<CmpOp>(i))) {
            out = static_cast<CmpOp>(i);
            return true;
        }
    }
    return false;
}

// A numeric operand: a number-returning query or an integer constant.
struct NumExpr {
    std::variant<QueryCall, int> value;

    bool is_const() const { return value.index() == 1; }
    bool operator==(const NumExpr&) const = default;
};

struct ComparePred {
    NumExpr lhs;
    CmpOp op = CmpOp::Ge;
    NumExpr rhs;
    bool operator==(const ComparePred&) const = default;
};

// Leaf of a condition tree: a boolean query or a numeric comparison.
struct Predicate {
    std::variant<QueryCall, ComparePred> value;
    bool operator==(const Predicate&) const = default;
};

// Condition tree. AllOf/AnyOf hold 1..4 children, Not holds exactly one,
// Leaf holds a Predicate. Value-semantic so operators can copy subtrees.
struct BoolExpr {
    enum class Kind { AllOf, AnyOf, Not, Leaf };

    Kind kind = Kind::Leaf;
    std::vector<BoolExpr> children;  // AllOf/AnyOf/Not
    Predicate leaf;                  // Leaf only

    bool operator==(const BoolExpr&) const = default;

    static BoolExpr make_leaf(Predicate p) {
        BoolExpr e;
        e.kind = Kind::Leaf;
        e.leaf = std::move(p);
        return e;
    }
};

struct Rule {
    BoolExpr condition;
    Direction action = Direction::Up;
    bool operator==(const Rule&) const = default;
};

// Ordered rule list; first rule whose condition holds and whose action is
// a legal move decides.
struct Policy {
    std::vector<Rule> rules;
    bool operator==(const Policy&) const = default;
};

inline int expr_depth(const BoolExpr& e) {
    if (e.kind == BoolExpr::Kind::Leaf) return 1;
    int m = 0;
    for (const auto& c : e.children) m = std::max(m, expr_depth(c));
    return 1 + m;
}

inline bool expr_valid(const BoolExpr& e) {
    switch (e.kind) {
        case BoolExpr::Kind::Leaf: {
            if (!e.children.empty()) return false;
            if (const auto* cmp = std::get_if<ComparePred>(&e.leaf.value)) {
                for (const NumExpr* n : {&cmp->lhs, &cmp->rhs}) {
                    if (const auto* c = std::get_if<int>(&n->value)) {
                        if (*c < 0 || *c > kMaxConst) return false;
                    } else if (std::get<QueryCall>(n->value).returns_bool()) {
                        return false;
                    }
                }
            } else if (!std::get<QueryCall>(e.leaf.value).returns_bool()) {
                return false;
            }
            return true;
        }
        case BoolExpr::Kind::Not:
            if (e.children.size() != 1) return false;
            break;
        case BoolExpr::Kind::AllOf:
        case BoolExpr::Kind::AnyOf:
            if (e.children.empty() ||
                e.children.size() > static_cast<std::size_t>(kMaxChildren))
                return false;
            break;
    }
    return std::all_of(e.children.begin(), e.children.end(), expr_valid);
}

inline bool policy_valid(const Policy& p) {
    if (p.rules.empty() || p.rules.size() > static_cast<std::size_t>(kMaxRules))
        return false;
    for (const Rule& r : p.rules) {
        if (!expr_valid(r.condition)) return false;
        if (expr_depth(r.condition) > kMaxDepth) return false;
    }
    return true;
}

// ---- Query evaluation ----------------------------------------------------

inline bool eval_bool_query(const QueryCall& call, const Board& board);
inline std::int64_t eval_num_query(const QueryCall& call, const Board& board);

namespace detail {

// Non-increasing tile values along the snake path (row 0 left-to-right,
// row 1 right-to-left, ...), skipping empty cells.
inline bool snake_sorted(const Board& b) {
    Tile prev = 0;
    bool have_prev = false;
    for (int r = 0; r < 4; ++r) {
        for (int j = 0; j < 4; ++j) {
            const int c = (r % 2 == 0) ? j : 3 - j;
            const Tile t = b.at(r, c);
            if (t == 0) continue;
            if (have_prev && t > prev) return false;
            prev = t;
            have_prev = true;
        }
    }
    return true;
}

}  // namespace detail

inline bool eval_bool_query(const QueryCall& call, const Board& board) {
    switch (call.fn) {
        case QueryId::CanMoveInDirection:
            return apply_move(board, call.args[0]).changed;
        case QueryId::CanMoveInDirections: {
            const MoveOutcome first = apply_move(board, call.args[0]);
            if (!first.changed) return false;
            return apply_move(first.board_after, call.args[1]).changed;
        }
        case QueryId::WillBeSorted:
            return detail::snake_sorted(apply_move(board, call.args[0]).board_after);
        case QueryId::MaxTileInCorner: {
            const Tile m = board.max_tile();
            if (m == 0) return false;
            return board.at(0, 0) == m || board.at(0, 3) == m ||
                   board.at(3, 0) == m || board.at(3, 3) == m;
        }
        default:
            throw std::logic_error("eval_bool_query: numeric query");
    }
}

inline std::int64_t eval_num_query(const QueryCall& call, const Board& board) {
    switch (call.fn) {
        case QueryId::ScoreGain: {
            const MoveOutcome o = apply_move(board, call.args[0]);
            return o.changed ? o.score_gain : 0;
        }
        case QueryId::ScoreGains: {
            const MoveOutcome first = apply_move(board, call.args[0]);
            if (!first.changed) return 0;
            const MoveOutcome second = apply_move(first.board_after, call.args[1]);
            return first.score_gain + (second.changed ? second.score_gain : 0);
        }
        case QueryId::EmptyCellGain: {
            const MoveOutcome o = apply_move(board, call.args[0]);
            if (!o.changed) return 0;
            return o.board_after.empty_count() - board.empty_count();
        }
        case QueryId::EmptyCells:
            return board.empty_count();
        case QueryId::MaxTile:
            return board.max_tile();
        case QueryId::MergeCount: {
            const MoveOutcome o = apply_move(board, call.args[0]);
            return o.changed ? o.merges : 0;
        }
        default:
            throw std::logic_error("eval_num_query: boolean query");
    }
}

inline std::int64_t eval_num(const NumExpr& e, const Board& board) {
    if (const auto* c = std::get_if<int>(&e.value)) return *c;
    return eval_num_query(std::get<QueryCall>(e.value), board);
}

inline bool eval_predicate(const Predicate& p, const Board& board) {
    if (const auto* q = std::get_if<QueryCall>(&p.value))
        return eval_bool_query(*q, board);
    const auto& cmp = std::get<ComparePred>(p.value);
    const std::int64_t l = eval_num(cmp.lhs, board);
    const std::int64_t r = eval_num(cmp.rhs, board);
    switch (cmp.op) {
        case CmpOp::Lt: return l < r;
        case CmpOp::Le: return l <= r;
        case CmpOp::Gt: return l > r;
        case CmpOp::Ge: return l >= r;
        case CmpOp::Eq: return l == r;
    }
    return false;
}

inline bool eval_condition(const BoolExpr& e, const Board& board) {
    switch (e.kind) {
        case BoolExpr::Kind::Leaf:
            return eval_predicate(e.leaf, board);
        case BoolExpr::Kind::Not:
            return !eval_condition(e.children[0], board);
        case BoolExpr::Kind::AllOf: {
            bool all = true;
            for (const auto& c : e.children) all = eval_condition(c, board) && all;
            return all;
        }
        case BoolExpr::Kind::AnyOf: {
            bool any = false;
            for (const auto& c : e.children) any = eval_condition(c, board) || any;
            return any;
        }
    }
    return false;
}

// ---- Decision ------------------------------------------------------------

// Fallback scan order when no rule fires.
inline constexpr std::array<Direction, 4> kFallbackOrder = {
    Direction::Up, Direction::Right, Direction::Down, Direction::Left};

struct Decision {
    Direction dir = Direction::Up;
    std::optional<int> fired_rule;  // empty when the fallback was used
};

inline Decision decide(const Policy& policy, const Board& board) {
    const LegalMoves legal = legal_moves(board);
    if (legal.empty())
        throw std::logic_error("decide: no legal move (check is_game_over first)");
    for (std::size_t i = 0; i < policy.rules.size(); ++i) {
        const Rule& rule = policy.rules[i];
        if (!legal.contains(rule.action)) continue;
        if (eval_condition(rule.condition, board))
            return {rule.action, static_cast<int>(i)};
    }
    for (Direction d : kFallbackOrder)
        if (legal.contains(d)) return {d, std::nullopt};
    throw std::logic_error("decide: unreachable");
}

}  // namespace evo2048
