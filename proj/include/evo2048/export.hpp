#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evo2048/policy.hpp"

namespace evo2048 {

// ---- Readable pseudocode ---------------------------------------------------

namespace detail {

inline std::string render_query(const QueryCall& q) {
    std::string out = query_info(q.fn).name;
    out += '(';
    for (int i = 0; i < q.arity(); ++i) {
        if (i) out += ", ";
        out += direction_name(q.args[i]);
    }
    out += ')';
    return out;
}

inline std::string render_num(const NumExpr& e) {
    if (const auto* c = std::get_if<int>(&e.value)) return std::to_string(*c);
    return render_query(std::get<QueryCall>(e.value));
}

inline std::string render_predicate(const Predicate& p) {
    if (const auto* q = std::get_if<QueryCall>(&p.value)) return render_query(*q);
    const auto& cmp = std::get<ComparePred>(p.value);
    return render_num(cmp.lhs) + " " + cmp_op_name(cmp.op) + " " +
           render_num(cmp.rhs);
}

inline std::string render_condition(const BoolExpr& e) {
    switch (e.kind) {
        case BoolExpr::Kind::Leaf:
            return render_predicate(e.leaf);
        case BoolExpr::Kind::Not:
            return "not (" + render_condition(e.children[0]) + ")";
        case BoolExpr::Kind::AllOf:
        case BoolExpr::Kind::AnyOf: {
            const char* joiner = e.kind == BoolExpr::Kind::AllOf ? " and " : " or ";
            std::string out = "(";
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += joiner;
                out += render_condition(e.children[i]);
            }
            out += ')';
            return out;
        }
    }
    return "";
}

}  // namespace detail

// One `if <condition>: move <DIR>` block per rule, in rule order.
inline std::string emit_pseudocode(const Policy& policy) {
    std::string out;
    for (const Rule& r : policy.rules) {
        out += "if " + detail::render_condition(r.condition) + ": move " +
               direction_name(r.action) + "\n";
    }
    out += "otherwise: move first legal of UP, RIGHT, DOWN, LEFT\n";
    return out;
}

// ---- Executable Python module ----------------------------------------------

namespace detail {

inline std::string render_query_py(const QueryCall& q) {
    std::string out = query_info(q.fn).name;
    out += "(board";
    for (int i = 0; i < q.arity(); ++i) {
        out += ", \"";
        out += direction_name(q.args[i]);
        out += '"';
    }
    out += ')';
    return out;
}

inline std::string render_num_py(const NumExpr& e) {
    if (const auto* c = std::get_if<int>(&e.value)) return std::to_string(*c);
    return render_query_py(std::get<QueryCall>(e.value));
}

inline std::string render_condition_py(const BoolExpr& e) {
    switch (e.kind) {
        case BoolExpr::Kind::Leaf: {
            if (const auto* q = std::get_if<QueryCall>(&e.leaf.value))
                return render_query_py(*q);
            const auto& cmp = std::get<ComparePred>(e.leaf.value);
            return render_num_py(cmp.lhs) + " " + cmp_op_name(cmp.op) + " " +
                   render_num_py(cmp.rhs);
        }
        case BoolExpr::Kind::Not:
            return "not (" + render_condition_py(e.children[0]) + ")";
        case BoolExpr::Kind::AllOf:
        case BoolExpr::Kind::AnyOf: {
            const char* joiner = e.kind == BoolExpr::Kind::AllOf ? " and " : " or ";
            std::string out = "(";
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += joiner;
                out += render_condition_py(e.children[i]);
            }
            out += ')';
            return out;
        }
    }
    return "";
}

// Self-contained query implementations embedded in every exported module,
// so the file stands alone like a hand-written policy script.
inline constexpr const char* kPythonPrelude = R"PY(# Rule policy for 2048.
# decide(board) takes 16 ints (row-major 4x4, 0 = empty) and returns
# "UP", "RIGHT", "DOWN" or "LEFT".

_LINE_INDICES = {
    "LEFT": [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11], [12, 13, 14, 15]],
    "RIGHT": [[3, 2, 1, 0], [7, 6, 5, 4], [11, 10, 9, 8], [15, 14, 13, 12]],
    "UP": [[0, 4, 8, 12], [1, 5, 9, 13], [2, 6, 10, 14], [3, 7, 11, 15]],
    "DOWN": [[12, 8, 4, 0], [13, 9, 5, 1], [14, 10, 6, 2], [15, 11, 7, 3]],
}


def _shift_merge_row(row):
    packed = [t for t in row if t]
    out, gain, merges, i = [], 0, 0, 0
    while i < len(packed):
        if i + 1 < len(packed) and packed[i] == packed[i + 1]:
            out.append(packed[i] * 2)
            gain += packed[i] * 2
            merges += 1
            i += 2
        else:
            out.append(packed[i])
            i += 1
    out.extend([0] * (4 - len(out)))
    return out, gain, merges


def _apply_move(board, direction):
    after, gain, merges = list(board), 0, 0
    for line in _LINE_INDICES[direction]:
        row, g, m = _shift_merge_row([board[i] for i in line])
        gain += g
        merges += m
        for j, idx in enumerate(line):
            after[idx] = row[j]
    return after, gain, merges, after != list(board)


def canMoveInDirection(board, d):
    return _apply_move(board, d)[3]


def canMoveInDirections(board, d1, d2):
    after, _, _, changed = _apply_move(board, d1)
    return changed and _apply_move(after, d2)[3]


def scoreGain(board, d):
    _, gain, _, changed = _apply_move(board, d)
    return gain if changed else 0


def scoreGains(board, d1, d2):
    after, gain, _, changed = _apply_move(board, d1)
    if not changed:
        return 0
    _, gain2, _, changed2 = _apply_move(after, d2)
    return gain + (gain2 if changed2 else 0)


def willBeSorted(board, d):
    after = _apply_move(board, d)[0]
    prev = None
    for r in range(4):
        cols = range(4) if r % 2 == 0 else range(3, -1, -1)
        for c in cols:
            t = after[r * 4 + c]
            if t == 0:
                continue
            if prev is not None and t > prev:
                return False
            prev = t
    return True


def emptyCellGain(board, d):
    after, _, _, changed = _apply_move(board, d)
    return after.count(0) - list(board).count(0) if changed else 0


def emptyCells(board):
    return list(board).count(0)


def maxTile(board):
    return max(board)


def maxTileInCorner(board):
    m = max(board)
    return m > 0 and m in (board[0], board[3], board[12], board[15])


def mergeCount(board, d):
    _, _, merges, changed = _apply_move(board, d)
    return merges if changed else 0


def _legal_moves(board):
    return [d for d in ("UP", "RIGHT", "DOWN", "LEFT") if canMoveInDirection(board, d)]


def decide(board):
    board = list(board)
    legal = _legal_moves(board)
    if not legal:
        raise ValueError("no legal move")
)PY";

}  // namespace detail

// Standalone Python module implementing decide(board) for this policy.
// Byte-identical output for structurally equal policies.
inline std::string emit_executable(const Policy& policy) {
    std::string out = detail::kPythonPrelude;
    for (const Rule& r : policy.rules) {
        out += "    if \"";
        out += direction_name(r.action);
        out += "\" in legal and (";
        out += detail::render_condition_py(r.condition);
        out += "):\n        return \"";
        out += direction_name(r.action);
        out += "\"\n";
    }
    out +=
        "    for d in (\"UP\", \"RIGHT\", \"DOWN\", \"LEFT\"):\n"
        "        if d in legal:\n"
        "            return d\n";
    return out;
}

// ---- Per-board decision explanation ------------------------------------------

struct LeafTrace {
    std::string description;
    std::vector<std::int64_t> operands;  // lhs/rhs values for comparisons
    bool result = false;
};

struct RuleTrace {
    int rule_index = 0;
    bool evaluated = false;
    bool condition_value = false;
    std::vector<LeafTrace> leaves;
    Direction action = Direction::Up;
    bool action_legal = false;
};

struct ExplanationTrace {
    std::vector<RuleTrace> rules;
    std::optional<int> fired;
    bool fallback_used = false;
    Direction chosen = Direction::Up;
};

namespace detail {

inline bool explain_condition(const BoolExpr& e, const Board& board,
                              std::vector<LeafTrace>& leaves) {
    switch (e.kind) {
        case BoolExpr::Kind::Leaf: {
            LeafTrace t;
            t.description = render_predicate(e.leaf);
            if (const auto* cmp = std::get_if<ComparePred>(&e.leaf.value)) {
                t.operands.push_back(eval_num(cmp->lhs, board));
                t.operands.push_back(eval_num(cmp->rhs, board));
            }
            t.result = eval_predicate(e.leaf, board);
            leaves.push_back(std::move(t));
            return leaves.back().result;
        }
        case BoolExpr::Kind::Not:
            return !explain_condition(e.children[0], board, leaves);
        case BoolExpr::Kind::AllOf: {
            bool all = true;
            for (const auto& c : e.children)
                all = explain_condition(c, board, leaves) && all;
            return all;
        }
        case BoolExpr::Kind::AnyOf: {
            bool any = false;
            for (const auto& c : e.children)
                any = explain_condition(c, board, leaves) || any;
            return any;
        }
    }
    return false;
}

}  // namespace detail

// Records the decision process: every rule up to and including the firing
// one is evaluated with its leaf values; later rules are marked
// not-evaluated unless `full` is set.
inline ExplanationTrace explain(const Policy& policy, const Board& board,
                                bool full = false) {
    const LegalMoves legal = legal_moves(board);
    if (legal.empty())
        throw std::logic_error("explain: no legal move");
    ExplanationTrace trace;
    for (std::size_t i = 0; i < policy.rules.size(); ++i) {
        const Rule& rule = policy.rules[i];
        RuleTrace rt;
        rt.rule_index = static_cast<int>(i);
        rt.action = rule.action;
        rt.action_legal = legal.contains(rule.action);
        if (!trace.fired || full) {
            rt.evaluated = true;
            rt.condition_value =
                detail::explain_condition(rule.condition, board, rt.leaves);
            if (!trace.fired && rt.condition_value && rt.action_legal)
                trace.fired = rt.rule_index;
        }
        trace.rules.push_back(std::move(rt));
    }
    if (trace.fired) {
        trace.chosen = policy.rules[*trace.fired].action;
    } else {
        trace.fallback_used = true;
        for (Direction d : kFallbackOrder) {
            if (legal.contains(d)) {
                trace.chosen = d;
                break;
            }
        }
    }
    return trace;
}

inline nlohmann::ordered_json explanation_to_json(const ExplanationTrace& t) {
    nlohmann::ordered_json rules = nlohmann::ordered_json::array();
    for (const RuleTrace& r : t.rules) {
        nlohmann::ordered_json leaves = nlohmann::ordered_json::array();
        for (const LeafTrace& l : r.leaves)
            leaves.push_back({{"leaf", l.description},
                              {"operands", l.operands},
                              {"result", l.result}});
        nlohmann::ordered_json jr = {{"rule_index", r.rule_index},
                                     {"evaluated", r.evaluated},
                                     {"action", direction_name(r.action)},
                                     {"action_legal", r.action_legal}};
        if (r.evaluated) {
            jr["condition_value"] = r.condition_value;
            jr["leaf_values"] = std::move(leaves);
        }
        rules.push_back(std::move(jr));
    }
    nlohmann::ordered_json out = {{"rules", std::move(rules)}};
    if (t.fired) out["fired"] = *t.fired;
    out["fallback_used"] = t.fallback_used;
    out["chosen"] = direction_name(t.chosen);
    return out;
}

}  // namespace evo2048
