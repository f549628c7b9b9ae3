#include <doctest.h>

#include "evo2048/policy_io.hpp"
#include "oracles.hpp"

using namespace evo2048;

TEST_CASE("policy JSON round-trips losslessly") {
    RandomStream rng(1);
    for (int i = 0; i < 2000; ++i) {
        const Policy p = oracle::random_policy(rng);
        const std::string text = policy_to_string(p);
        const Policy back = policy_from_string(text);
        CHECK(back == p);
        CHECK(policy_to_string(back) == text);
    }
}

TEST_CASE("expected JSON shape") {
    Policy p;
    QueryCall q;
    q.fn = QueryId::CanMoveInDirection;
    q.args = {Direction::Left, Direction::Up};
    Rule r;
    r.condition = BoolExpr::make_leaf(Predicate{q});
    r.action = Direction::Left;
    p.rules.push_back(r);

    const auto j = policy_to_json(p);
    CHECK(j.at("rules")[0].at("then") == "LEFT");
    CHECK(j.at("rules")[0].at("if").at("query").at("fn") == "canMoveInDirection");
    CHECK(j.at("rules")[0].at("if").at("query").at("args")[0] == "LEFT");
}

TEST_CASE("malformed policies are rejected") {
    CHECK_THROWS_AS(policy_from_string("not json"), PolicyParseError);
    CHECK_THROWS_AS(policy_from_string("{}"), PolicyParseError);
    CHECK_THROWS_AS(policy_from_string(R"({"rules":[]})"), PolicyParseError);
    // Wrong arity.
    CHECK_THROWS_AS(policy_from_string(
                        R"({"rules":[{"if":{"query":{"fn":"canMoveInDirection",
                            "args":["UP","DOWN"]}},"then":"UP"}]})"),
                    PolicyParseError);
    // Numeric query in boolean position.
    CHECK_THROWS_AS(policy_from_string(
                        R"({"rules":[{"if":{"query":{"fn":"scoreGain",
                            "args":["UP"]}},"then":"UP"}]})"),
                    PolicyParseError);
    // Boolean query in numeric position.
    CHECK_THROWS_AS(policy_from_string(
                        R"({"rules":[{"if":{"cmp":{"op":">","lhs":{"query":
                            {"fn":"maxTileInCorner","args":[]}},
                            "rhs":{"const":4}}},"then":"UP"}]})"),
                    PolicyParseError);
    // Constant out of range.
    CHECK_THROWS_AS(policy_from_string(
                        R"({"rules":[{"if":{"cmp":{"op":">","lhs":{"const":9999},
                            "rhs":{"const":4}}},"then":"UP"}]})"),
                    PolicyParseError);
    // Unknown direction.
    CHECK_THROWS_AS(policy_from_string(
                        R"({"rules":[{"if":{"query":{"fn":"maxTileInCorner",
                            "args":[]}},"then":"NORTH"}]})"),
                    PolicyParseError);
}
