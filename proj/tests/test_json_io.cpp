#include <doctest.h>

#include "helpers.hpp"
#include "qsa/error.hpp"
#include "qsa/json_io.hpp"

using namespace qsa;
using namespace qsa::testing;

TEST_CASE("rational strings are canonical") {
    CHECK(format_rational(parse_rational("2/4")) == "1/2");
    CHECK(format_rational(parse_rational("-6/4")) == "-3/2");
    CHECK(format_rational(parse_rational("5/1")) == "5");
    CHECK(format_rational(parse_rational("0")) == "0");
    CHECK(parse_rational("7") == 7);
    CHECK(parse_rational("-3/-6") == Rat(1, 2)); // sign normalized
    CHECK_THROWS_WITH_AS(parse_rational("1/0"), doctest::Contains("BadRational"), Error);
    CHECK_THROWS_WITH_AS(parse_rational("x"), doctest::Contains("BadRational"), Error);
}

TEST_CASE("model files round-trip byte-exactly") {
    const Json j = Json::parse(R"({
        "atoms": ["a", "b", "c"],
        "measures": {
            "m1": {"a": "1/2", "b": "1/2", "c": "0"},
            "m2": {"a": "0", "b": "1", "c": "0"}
        }
    })");
    const ParsedModel model = parse_model(j);
    const Json serialized = serialize_model(model.family);
    CHECK(serialized.dump() == Json::parse(serialized.dump()).dump());
    // Canonical form re-parses to the same family and the same bytes.
    const ParsedModel again = parse_model(serialized);
    CHECK(serialize_model(again.family).dump() == serialized.dump());
    CHECK(model.family.member("m1") == again.family.member("m1"));

    // Sparse input: missing atoms weigh zero.
    const Json sparse = Json::parse(R"({
        "atoms": ["a", "b"],
        "measures": {"m": {"a": "1"}}
    })");
    CHECK(parse_model(sparse).family.member("m").weight(1) == 0);
}

TEST_CASE("random models survive the round trip") {
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 30; ++trial) {
        const SpacePtr space = random_space(rng);
        const MeasureFamily family = random_family(space, rng);
        const Json j = serialize_model(family);
        const ParsedModel parsed = parse_model(j);
        for (const auto& [name, member] : family.members())
            CHECK(parsed.family.member(name) == member);
        CHECK(serialize_model(parsed.family).dump() == j.dump());
    }
}

TEST_CASE("schema errors are named") {
    CHECK_THROWS_WITH_AS(parse_model(Json::parse("[1,2]")), doctest::Contains("SchemaError"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_model(Json::parse(R"({"atoms": ["a"]})")),
                         doctest::Contains("SchemaError"), Error);
    const Json bad_weights = Json::parse(R"({
        "atoms": ["a"],
        "measures": {"m": {"a": true}}
    })");
    CHECK_THROWS_WITH_AS(parse_model(bad_weights), doctest::Contains("SchemaError"), Error);
}

TEST_CASE("events and random variables") {
    const SpacePtr space = abc();
    const Event event = parse_event(Json::parse(R"(["b", "a"])"), *space);
    CHECK(event == Event{0, 1});
    CHECK(serialize_event(*space, event).dump() == R"(["a","b"])");

    const QsRandomVariable x = parse_rv(Json::parse(R"({"a": "3/2", "c": -1})"), space);
    CHECK(x.value(0) == Rat(3, 2));
    CHECK(x.value(1) == 0);
    CHECK(x.value(2) == -1);
    CHECK(serialize_rv(x).dump() == R"({"a":"3/2","b":"0","c":"-1"})");
}

TEST_CASE("tree spec and payoff parsing") {
    const Json j = Json::parse(R"({
        "T": 2,
        "grid": 2,
        "bounds": {"u": "3/2", "U": 2, "d": "1/2", "D": "3/4", "pi": "1/4", "Pi": "3/4"},
        "node_bounds": {
            "2": {"u": "3", "U": "3", "d": "1/2", "D": "1/2", "pi": "1/2", "Pi": "1/2"}
        }
    })");
    const BinomialTreeSpec spec = parse_tree_spec(j);
    CHECK(spec.periods == 2);
    CHECK(spec.grid == 2);
    CHECK(spec.bounds.u_lo == Rat(3, 2));
    CHECK(spec.node_bounds.at("2").u_lo == 3);

    CHECK(parse_payoff(Json("call:3/2")).strike == Rat(3, 2));
    CHECK(parse_payoff(Json::parse(R"({"kind": "digital", "strike": "1"})")).kind ==
          Payoff::Kind::digital);
    const Payoff explicit_payoff = parse_payoff(Json::parse(R"({
        "kind": "explicit",
        "values": {"2x1/2": "7/3"}
    })"));
    CHECK(explicit_payoff.leaf_values.at("2x1/2") == Rat(7, 3));
    CHECK_THROWS_WITH_AS(parse_payoff(Json("strangle:1")), doctest::Contains("BadPayoff"), Error);
}

TEST_CASE("risk spec parsing") {
    const SpacePtr space = abc();
    const RiskMeasureSpec entropic = parse_risk_spec(
        Json::parse(R"({"kind": "entropic", "gamma": "1/2", "reference": "m1"})"), space);
    CHECK(entropic.kind == RiskKind::entropic);
    CHECK(entropic.gamma == Rat(1, 2));

    const RiskMeasureSpec scenario = parse_risk_spec(Json::parse(R"({
        "kind": "scenario_penalty",
        "penalties": {"m1": "0", "m2": "inf"}
    })"),
                                                     space);
    CHECK_FALSE(scenario.penalties.at("m1").infinite);
    CHECK(scenario.penalties.at("m2").infinite);

    CHECK_THROWS_WITH_AS(parse_risk_spec(Json::parse(R"({"kind": "unknown"})"), space),
                         doctest::Contains("SchemaError"), Error);
}

TEST_CASE("symbolic descriptor parsing") {
    const SymbolicDescriptor d = parse_symbolic_descriptor(Json::parse(R"({
        "cardinality": "continuum",
        "pairwise_disjoint_supports": true,
        "all_members_supported": true,
        "admits_perfect_disjoint_subfamily": true,
        "notes": "test"
    })"));
    CHECK(d.cardinality.kind == Cardinality::Kind::continuum);
    CHECK(d.pairwise_disjoint_supports);
    CHECK(d.notes == "test");

    const SymbolicDescriptor finite = parse_symbolic_descriptor(Json::parse(R"({"cardinality": 3})"));
    CHECK(finite.cardinality.kind == Cardinality::Kind::finite);
    CHECK(finite.cardinality.count == 3);
}
