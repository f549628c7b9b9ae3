#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "evo2048/policy.hpp"

namespace evo2048 {

// Canonical policy serialization. The JSON document is the unit of exchange
// between evolve, export and the cross-check harness:
//   {"rules":[{"if":{...},"then":"LEFT"}, ...]}
// Condition nodes: {"all":[...]}, {"any":[...]}, {"not":{...}},
//                  {"query":{"fn":...,"args":[...]}},
//                  {"cmp":{"op":...,"lhs":{...},"rhs":{...}}}
// Numeric nodes:   {"query":{...}} or {"const":N}

struct PolicyParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline nlohmann::ordered_json query_to_json(const QueryCall& q) {
    nlohmann::ordered_json args = nlohmann::ordered_json::array();
    for (int i = 0; i < q.arity(); ++i) args.push_back(direction_name(q.args[i]));
    return {{"fn", query_info(q.fn).name}, {"args", std::move(args)}};
}

inline nlohmann::ordered_json num_to_json(const NumExpr& e) {
    if (const auto* c = std::get_if<int>(&e.value)) return {{"const", *c}};
    return {{"query", query_to_json(std::get<QueryCall>(e.value))}};
}

inline nlohmann::ordered_json expr_to_json(const BoolExpr& e) {
    using K = BoolExpr::Kind;
    nlohmann::ordered_json out;
    switch (e.kind) {
        case K::AllOf:
        case K::AnyOf: {
            nlohmann::ordered_json kids = nlohmann::ordered_json::array();
            for (const auto& c : e.children) kids.push_back(expr_to_json(c));
            out[e.kind == K::AllOf ? "all" : "any"] = std::move(kids);
            return out;
        }
        case K::Not:
            out["not"] = expr_to_json(e.children[0]);
            return out;
        case K::Leaf:
            if (const auto* q = std::get_if<QueryCall>(&e.leaf.value)) {
                out["query"] = query_to_json(*q);
            } else {
                const auto& cmp = std::get<ComparePred>(e.leaf.value);
                out["cmp"] = {{"op", cmp_op_name(cmp.op)},
                              {"lhs", num_to_json(cmp.lhs)},
                              {"rhs", num_to_json(cmp.rhs)}};
            }
            return out;
    }
    return out;
}

inline QueryCall query_from_json(const nlohmann::json& j) {
    QueryCall q;
    if (!parse_query_id(j.at("fn").get<std::string>(), q.fn))
        throw PolicyParseError("unknown query function: " + j.at("fn").dump());
    const auto& args = j.at("args");
    if (static_cast<int>(args.size()) != q.arity())
        throw PolicyParseError(std::string("arity mismatch for ") +
                               query_info(q.fn).name);
    for (int i = 0; i < q.arity(); ++i)
        if (!parse_direction(args[i].get<std::string>(), q.args[i]))
            throw PolicyParseError("bad direction: " + args[i].dump());
    return q;
}

inline NumExpr num_from_json(const nlohmann::json& j) {
    NumExpr e;
    if (j.contains("const")) {
        const int v = j.at("const").get<int>();
        if (v < 0 || v > kMaxConst)
            throw PolicyParseError("constant out of range");
        e.value = v;
    } else if (j.contains("query")) {
        QueryCall q = query_from_json(j.at("query"));
        if (q.returns_bool())
            throw PolicyParseError("boolean query in numeric position");
        e.value = q;
    } else {
        throw PolicyParseError("bad numeric node: " + j.dump());
    }
    return e;
}

inline BoolExpr expr_from_json(const nlohmann::json& j) {
    BoolExpr e;
    if (j.contains("all") || j.contains("any")) {
        const bool is_all = j.contains("all");
        e.kind = is_all ? BoolExpr::Kind::AllOf : BoolExpr::Kind::AnyOf;
        for (const auto& c : j.at(is_all ? "all" : "any"))
            e.children.push_back(expr_from_json(c));
    } else if (j.contains("not")) {
        e.kind = BoolExpr::Kind::Not;
        e.children.push_back(expr_from_json(j.at("not")));
    } else if (j.contains("query")) {
        QueryCall q = query_from_json(j.at("query"));
        if (!q.returns_bool())
            throw PolicyParseError("numeric query in boolean position");
        e.leaf.value = q;
    } else if (j.contains("cmp")) {
        const auto& c = j.at("cmp");
        ComparePred cmp;
        if (!parse_cmp_op(c.at("op").get<std::string>(), cmp.op))
            throw PolicyParseError("bad comparison operator");
        cmp.lhs = num_from_json(c.at("lhs"));
        cmp.rhs = num_from_json(c.at("rhs"));
        e.leaf.value = cmp;
    } else {
        throw PolicyParseError("bad condition node: " + j.dump());
    }
    return e;
}

}  // namespace detail

inline nlohmann::ordered_json policy_to_json(const Policy& p) {
    nlohmann::ordered_json rules = nlohmann::ordered_json::array();
    for (const Rule& r : p.rules)
        rules.push_back({{"if", detail::expr_to_json(r.condition)},
                         {"then", direction_name(r.action)}});
    return {{"rules", std::move(rules)}};
}

inline Policy policy_from_json(const nlohmann::json& j) {
    Policy p;
    for (const auto& r : j.at("rules")) {
        Rule rule;
        rule.condition = detail::expr_from_json(r.at("if"));
        if (!parse_direction(r.at("then").get<std::string>(), rule.action))
            throw PolicyParseError("bad rule action");
        p.rules.push_back(std::move(rule));
    }
    if (!policy_valid(p)) throw PolicyParseError("policy violates invariants");
    return p;
}

inline std::string policy_to_string(const Policy& p) {
    return policy_to_json(p).dump(2) + "\n";
}

inline Policy policy_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw PolicyParseError(e.what());
    }
    try {
        return policy_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw PolicyParseError(e.what());
    }
}

}  // namespace evo2048
