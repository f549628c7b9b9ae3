#pragma once

#include <algorithm>
#include <utility>
#include <variant>
#include <vector>

#include "evo2048/policy.hpp"
#include "evo2048/rng.hpp"

namespace evo2048 {

// ---- Random construction ---------------------------------------------------

inline Direction random_direction(RandomStream& rng) {
    return static_cast<Direction>(rng.next_below(4));
}

inline QueryCall random_query(RandomStream& rng, bool want_bool) {
    QueryCall q;
    do {
        q.fn = static_cast<QueryId>(rng.next_below(kQueryCount));
    } while (q.returns_bool() != want_bool);
    for (int i = 0; i < q.arity(); ++i) q.args[i] = random_direction(rng);
    return q;
}

inline NumExpr random_num_expr(RandomStream& rng) {
    NumExpr e;
    if (rng.next_below(2) == 0) {
        e.value = static_cast<int>(rng.next_below(kMaxConst + 1));
    } else {
        e.value = random_query(rng, /*want_bool=*/false);
    }
    return e;
}

inline Predicate random_predicate(RandomStream& rng) {
    Predicate p;
    const QueryCall q = random_query(rng, rng.next_below(2) == 0);
    if (q.returns_bool()) {
        p.value = q;
    } else {
        ComparePred cmp;
        cmp.lhs.value = q;
        cmp.op = static_cast<CmpOp>(rng.next_below(5));
        cmp.rhs = random_num_expr(rng);
        p.value = cmp;
    }
    return p;
}

inline Rule random_leaf_rule(RandomStream& rng) {
    Rule r;
    r.condition = BoolExpr::make_leaf(random_predicate(rng));
    r.action = random_direction(rng);
    return r;
}

// Initial individuals are maximally simple: one rule, one leaf condition,
// every array-valued field of length one.
inline Policy random_initial_policy(RandomStream& rng) {
    Policy p;
    p.rules.push_back(random_leaf_rule(rng));
    return p;
}

// ---- Site collection -------------------------------------------------------

namespace detail {

// A mutable leaf slot: a direction literal, a comparison operator, an
// integer constant, or a query-id (resampled within its arity/return group).
using ValueSite = std::variant<Direction*, CmpOp*, int*, QueryCall*>;

inline int query_group_size(QueryId id) {
    const QueryInfo& info = query_info(id);
    int n = 0;
    for (int i = 0; i < kQueryCount; ++i) {
        const QueryInfo& other = query_info(static_cast<QueryId>(i));
        if (other.arity == info.arity && other.returns_bool == info.returns_bool)
            ++n;
    }
    return n;
}

inline void collect_query_sites(QueryCall& q, std::vector<ValueSite>& out) {
    if (query_group_size(q.fn) > 1) out.emplace_back(&q);
    for (int i = 0; i < q.arity(); ++i) out.emplace_back(&q.args[i]);
}

inline void collect_num_sites(NumExpr& e, std::vector<ValueSite>& out) {
    if (auto* c = std::get_if<int>(&e.value)) {
        out.emplace_back(c);
    } else {
        collect_query_sites(std::get<QueryCall>(e.value), out);
    }
}

inline void collect_expr_value_sites(BoolExpr& e, std::vector<ValueSite>& out) {
    if (e.kind == BoolExpr::Kind::Leaf) {
        if (auto* q = std::get_if<QueryCall>(&e.leaf.value)) {
            collect_query_sites(*q, out);
        } else {
            auto& cmp = std::get<ComparePred>(e.leaf.value);
            out.emplace_back(&cmp.op);
            collect_num_sites(cmp.lhs, out);
            collect_num_sites(cmp.rhs, out);
        }
        return;
    }
    for (auto& c : e.children) collect_expr_value_sites(c, out);
}

inline std::vector<ValueSite> collect_value_sites(Policy& p) {
    std::vector<ValueSite> out;
    for (Rule& r : p.rules) {
        collect_expr_value_sites(r.condition, out);
        out.emplace_back(&r.action);
    }
    return out;
}

// An array-valued node: the rule list, or the child list of an AllOf/AnyOf.
struct ArraySite {
    Policy* rules = nullptr;   // set for the rule list
    BoolExpr* node = nullptr;  // set for an AllOf/AnyOf node
    int node_depth = 0;        // depth of the node within its condition tree
};

inline void collect_expr_array_sites(BoolExpr& e, int depth,
                                     std::vector<ArraySite>& out) {
    if (e.kind == BoolExpr::Kind::AllOf || e.kind == BoolExpr::Kind::AnyOf)
        out.push_back({nullptr, &e, depth});
    for (auto& c : e.children) collect_expr_array_sites(c, depth + 1, out);
}

inline std::vector<ArraySite> collect_array_sites(Policy& p) {
    std::vector<ArraySite> out;
    out.push_back({&p, nullptr, 0});
    for (Rule& r : p.rules) collect_expr_array_sites(r.condition, 1, out);
    return out;
}

inline void collect_expr_dirs(BoolExpr& e, std::vector<Direction*>& out) {
    std::vector<ValueSite> sites;
    collect_expr_value_sites(e, sites);
    for (auto& s : sites)
        if (auto* d = std::get_if<Direction*>(&s)) out.push_back(*d);
}

}  // namespace detail

// ---- Mutators ---------------------------------------------------------------

// Changes exactly one leaf value; the AST shape is untouched and the chosen
// leaf is guaranteed to differ afterwards.
inline void mutate_value(Policy& p, RandomStream& rng) {
    auto sites = detail::collect_value_sites(p);
    auto& site = sites[rng.next_below(sites.size())];
    if (auto* dir = std::get_if<Direction*>(&site)) {
        const Direction old = **dir;
        do {
            **dir = random_direction(rng);
        } while (**dir == old);
    } else if (auto* op = std::get_if<CmpOp*>(&site)) {
        const CmpOp old = **op;
        do {
            **op = static_cast<CmpOp>(rng.next_below(5));
        } while (**op == old);
    } else if (auto* cst = std::get_if<int*>(&site)) {
        const int old = **cst;
        // 50/50: resample within +-25% of the old value, or uniformly in range.
        for (;;) {
            int next;
            const int radius = std::abs(old) / 4;
            if (radius > 0 && rng.next_below(2) == 0) {
                const int lo = std::max(0, old - radius);
                const int hi = std::min(kMaxConst, old + radius);
                next = static_cast<int>(rng.next_int(lo, hi));
            } else {
                next = static_cast<int>(rng.next_below(kMaxConst + 1));
            }
            if (next != old) {
                **cst = next;
                break;
            }
        }
    } else {
        QueryCall* call = std::get<QueryCall*>(site);
        const QueryInfo info = query_info(call->fn);
        const QueryId old = call->fn;
        do {
            const QueryId candidate = static_cast<QueryId>(rng.next_below(kQueryCount));
            const QueryInfo ci = query_info(candidate);
            if (ci.arity == info.arity && ci.returns_bool == info.returns_bool)
                call->fn = candidate;
        } while (call->fn == old);
    }
}

// Adds or removes one element of one array node (50/50, falling back to the
// feasible option at a cap boundary). Net array-length delta is exactly +-1.
inline void mutate_size(Policy& p, RandomStream& rng) {
    auto sites = detail::collect_array_sites(p);
    auto& site = sites[rng.next_below(sites.size())];
    if (site.rules) {
        auto& rules = site.rules->rules;
        bool add = rng.next_below(2) == 0;
        if (rules.size() >= static_cast<std::size_t>(kMaxRules)) add = false;
        if (rules.size() <= 1) add = true;
        if (add) {
            const std::size_t pos = rng.next_below(rules.size() + 1);
            rules.insert(rules.begin() + pos, random_leaf_rule(rng));
        } else {
            rules.erase(rules.begin() + rng.next_below(rules.size()));
        }
    } else {
        auto& kids = site.node->children;
        bool add = rng.next_below(2) == 0;
        if (kids.size() >= static_cast<std::size_t>(kMaxChildren)) add = false;
        if (kids.size() <= 1) add = true;
        if (add) {
            const std::size_t pos = rng.next_below(kids.size() + 1);
            kids.insert(kids.begin() + pos,
                        BoolExpr::make_leaf(random_predicate(rng)));
        } else {
            kids.erase(kids.begin() + rng.next_below(kids.size()));
        }
    }
}

// Swaps two distinct positions of one array node with length >= 2.
// Returns false (no-op) when no such array exists.
inline bool mutate_order(Policy& p, RandomStream& rng) {
    auto sites = detail::collect_array_sites(p);
    std::erase_if(sites, [](const detail::ArraySite& s) {
        const std::size_t len = s.rules ? s.rules->rules.size() : s.node->children.size();
        return len < 2;
    });
    if (sites.empty()) return false;
    auto& site = sites[rng.next_below(sites.size())];
    const std::size_t len =
        site.rules ? site.rules->rules.size() : site.node->children.size();
    const std::size_t i = rng.next_below(len);
    std::size_t j = rng.next_below(len - 1);
    if (j >= i) ++j;
    if (site.rules) {
        std::swap(site.rules->rules[i], site.rules->rules[j]);
    } else {
        std::swap(site.node->children[i], site.node->children[j]);
    }
    return true;
}

// Rotates every direction literal (rule actions and query arguments) by
// k in {1,2,3} steps of UP -> RIGHT -> DOWN -> LEFT.
inline void mutate_rotate(Policy& p, int k) {
    for (Rule& r : p.rules) {
        std::vector<Direction*> dirs;
        detail::collect_expr_dirs(r.condition, dirs);
        dirs.push_back(&r.action);
        for (Direction* d : dirs) *d = rotate_direction(*d, k);
    }
}

inline void mutate_rotate(Policy& p, RandomStream& rng) {
    mutate_rotate(p, static_cast<int>(rng.next_int(1, 3)));
}

enum class MutatorKind : int { Value = 0, Size, Order, Rotate };

inline const char* mutator_name(MutatorKind m) {
    switch (m) {
        case MutatorKind::Value: return "value";
        case MutatorKind::Size: return "size";
        case MutatorKind::Order: return "order";
        case MutatorKind::Rotate: return "rotate";
    }
    return "?";
}

// True when the policy has at least one array of length >= 2.
inline bool order_mutation_applicable(const Policy& p) {
    auto sites = detail::collect_array_sites(const_cast<Policy&>(p));
    return std::any_of(sites.begin(), sites.end(), [](const detail::ArraySite& s) {
        return (s.rules ? s.rules->rules.size() : s.node->children.size()) >= 2;
    });
}

// Applies exactly one mutator, chosen uniformly among the applicable ones.
inline MutatorKind mutate(Policy& p, RandomStream& rng) {
    std::vector<MutatorKind> applicable = {MutatorKind::Value, MutatorKind::Size,
                                           MutatorKind::Rotate};
    if (order_mutation_applicable(p))
        applicable.insert(applicable.begin() + 2, MutatorKind::Order);
    const MutatorKind chosen = applicable[rng.next_below(applicable.size())];
    switch (chosen) {
        case MutatorKind::Value: mutate_value(p, rng); break;
        case MutatorKind::Size: mutate_size(p, rng); break;
        case MutatorKind::Order: mutate_order(p, rng); break;
        case MutatorKind::Rotate: mutate_rotate(p, rng); break;
    }
    return chosen;
}

// ---- Recombination -----------------------------------------------------------

namespace detail {

struct ExprSite {
    BoolExpr* node;
    int depth;  // 1 = root of its condition tree
};

inline void collect_expr_sites(BoolExpr& e, int depth, std::vector<ExprSite>& out) {
    out.push_back({&e, depth});
    for (auto& c : e.children) collect_expr_sites(c, depth + 1, out);
}

inline void collect_num_expr_sites(BoolExpr& e, std::vector<NumExpr*>& out) {
    if (e.kind == BoolExpr::Kind::Leaf) {
        if (auto* cmp = std::get_if<ComparePred>(&e.leaf.value)) {
            out.push_back(&cmp->lhs);
            out.push_back(&cmp->rhs);
        }
        return;
    }
    for (auto& c : e.children) collect_num_expr_sites(c, out);
}

}  // namespace detail

// Swaps one randomly chosen subtree pair of the same syntactic kind
// (Rule, BoolExpr or NumExpr). When a swap would break the depth cap the
// node pair is resampled, up to `max_attempts` times, after which the
// children are plain copies of the parents.
inline std::pair<Policy, Policy> recombine(const Policy& a, const Policy& b,
                                           RandomStream& rng,
                                           int max_attempts = 20) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Policy ca = a;
        Policy cb = b;

        enum Kind { RuleKind, ExprKind, NumKind };
        std::vector<NumExpr*> na, nb;
        for (Rule& r : ca.rules) detail::collect_num_expr_sites(r.condition, na);
        for (Rule& r : cb.rules) detail::collect_num_expr_sites(r.condition, nb);

        std::vector<Kind> kinds = {RuleKind, ExprKind};
        if (!na.empty() && !nb.empty()) kinds.push_back(NumKind);
        const Kind kind = kinds[rng.next_below(kinds.size())];

        switch (kind) {
            case RuleKind: {
                Rule& ra = ca.rules[rng.next_below(ca.rules.size())];
                Rule& rb = cb.rules[rng.next_below(cb.rules.size())];
                std::swap(ra, rb);
                return {std::move(ca), std::move(cb)};
            }
            case NumKind: {
                std::swap(*na[rng.next_below(na.size())],
                          *nb[rng.next_below(nb.size())]);
                return {std::move(ca), std::move(cb)};
            }
            case ExprKind: {
                std::vector<detail::ExprSite> sa, sb;
                for (Rule& r : ca.rules)
                    detail::collect_expr_sites(r.condition, 1, sa);
                for (Rule& r : cb.rules)
                    detail::collect_expr_sites(r.condition, 1, sb);
                const auto& pa = sa[rng.next_below(sa.size())];
                const auto& pb = sb[rng.next_below(sb.size())];
                if (pa.depth - 1 + expr_depth(*pb.node) > kMaxDepth ||
                    pb.depth - 1 + expr_depth(*pa.node) > kMaxDepth)
                    break;  // retry
                std::swap(*pa.node, *pb.node);
                return {std::move(ca), std::move(cb)};
            }
        }
    }
    return {a, b};
}

}  // namespace evo2048
