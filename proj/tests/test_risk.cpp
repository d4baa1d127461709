#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qsa/error.hpp"
#include "qsa/risk.hpp"

using namespace qsa;
using namespace qsa::testing;

namespace {

MeasureFamily polar_c_family(const SpacePtr& space) {
    // Members charge a and b only, so {c} is polar.
    return MeasureFamily(space, {{"m1", uniform_on(space, {"a", "b"})},
                                 {"m2", dirac(space, "b")}});
}

} // namespace

TEST_CASE("worst case is the non-polar maximum") {
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space);
    const RiskMeasureSpec spec = RiskMeasureSpec::worst_case_spec();
    CHECK(rho(spec, family, rv(space, {3, 7, 100})).rational == 7);
    CHECK(rho(spec, family, rv(space, {-3, -7, 100})).rational == -3);
}

TEST_CASE("zero penalties give the worst-case expectation") {
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space);
    std::map<std::string, ExtRat> penalties;
    penalties["m1"] = ExtRat::finite(Rat(0));
    penalties["m2"] = ExtRat::finite(Rat(0));
    const RiskMeasureSpec spec = RiskMeasureSpec::scenario_penalty_spec(penalties);
    const auto x = rv(space, {4, 2, 9});
    const Rat expected = std::max(expectation(family.member("m1"), x),
                                  expectation(family.member("m2"), x));
    CHECK(rho(spec, family, x).rational == expected);

    std::map<std::string, ExtRat> all_infinite;
    all_infinite["m1"] = ExtRat::infinity();
    const RiskMeasureSpec broken = RiskMeasureSpec::scenario_penalty_spec(all_infinite);
    CHECK_THROWS_WITH_AS(rho(broken, family, x), doctest::Contains("AllPenaltiesInfinite"), Error);
}

TEST_CASE("cash additivity across kinds") {
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space);
    const auto x = rv(space, {1, -2, 5});
    const Rat m(5);

    std::map<std::string, ExtRat> penalties;
    penalties["m1"] = ExtRat::finite(Rat(1, 3));
    penalties["m2"] = ExtRat::infinity();

    const std::vector<RiskMeasureSpec> specs = {
        RiskMeasureSpec::worst_case_spec(),
        RiskMeasureSpec::scenario_penalty_spec(penalties),
        RiskMeasureSpec::acceptance_generated_spec({rv(space, {0, -1, 0}), rv(space, {-1, 0, 0})}),
    };
    for (const auto& spec : specs)
        CHECK(rho(spec, family, rv_shift(x, m)).rational == rho(spec, family, x).rational + m);

    const RiskMeasureSpec entropic = RiskMeasureSpec::entropic_spec(Rat(2), "m1");
    const double lhs = rho(entropic, family, rv_shift(x, m)).as_double();
    const double rhs = rho(entropic, family, x).as_double() + 5.0;
    CHECK(std::fabs(lhs - rhs) <= 1e-9);
}

TEST_CASE("conjugates") {
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space);

    // Worst case: alpha(Q) = 0 for every dominated probability.
    const RiskMeasureSpec worst = RiskMeasureSpec::worst_case_spec();
    CHECK_FALSE(conjugate(worst, family, dirac(space, "a")).infinite);
    CHECK(conjugate(worst, family, dirac(space, "a")).value.rational == 0);
    CHECK(conjugate(worst, family, uniform_on(space, {"a", "b"})).value.rational == 0);
    CHECK_THROWS_WITH_AS(conjugate(worst, family, dirac(space, "c")),
                         doctest::Contains("NotDominated"), Error);

    // Entropic: zero at the reference, ln 2 at a Dirac against uniform(a,b).
    const RiskMeasureSpec entropic = RiskMeasureSpec::entropic_spec(Rat(1), "m1");
    CHECK(std::fabs(conjugate(entropic, family, family.member("m1")).value.as_double()) <= 1e-12);
    CHECK(std::fabs(conjugate(entropic, family, dirac(space, "a")).value.as_double() -
                    std::log(2.0)) <= 1e-12);

    // Unbounded scenario-penalty conjugate is +infinity, a legal value.
    std::map<std::string, ExtRat> penalties;
    penalties["m2"] = ExtRat::finite(Rat(0)); // only constrains E_{m2}
    const RiskMeasureSpec scenario = RiskMeasureSpec::scenario_penalty_spec(penalties);
    CHECK(conjugate(scenario, family, dirac(space, "a")).infinite);
}

TEST_CASE("monotonicity, convexity, weak duality and polar invariance") {
    std::mt19937_64 rng(61);
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space);

    std::map<std::string, ExtRat> penalties;
    penalties["m1"] = ExtRat::finite(Rat(0));
    penalties["m2"] = ExtRat::finite(Rat(1, 2));
    const std::vector<RiskMeasureSpec> specs = {
        RiskMeasureSpec::worst_case_spec(),
        RiskMeasureSpec::scenario_penalty_spec(penalties),
        RiskMeasureSpec::acceptance_generated_spec({rv(space, {0, 0, 0}), rv(space, {1, -1, 0})}),
    };

    for (int trial = 0; trial < 30; ++trial) {
        const auto x = random_rv(space, rng);
        const auto y = random_rv(space, rng);
        for (const auto& spec : specs) {
            if (qs_leq(family, x, y))
                CHECK(rho(spec, family, x).rational <= rho(spec, family, y).rational);

            const Rat lambda(pick(rng, 0, 8), 8);
            const auto mix = rv_add(rv_scale(x, lambda), rv_scale(y, 1 - lambda));
            CHECK(rho(spec, family, mix).rational <=
                  lambda * rho(spec, family, x).rational +
                      (1 - lambda) * rho(spec, family, y).rational);

            // Weak duality against a random dominated probability.
            const Measure q = [&] {
                const Rat share(pick(rng, 0, 4), 4);
                return add(scale(family.member("m1"), share),
                           scale(family.member("m2"), 1 - share));
            }();
            const ExtRiskValue alpha = conjugate(spec, family, q);
            if (!alpha.infinite)
                CHECK(expectation(q, x) - alpha.value.rational <= rho(spec, family, x).rational);

            // Values on the polar atom c never matter.
            std::vector<Rat> polluted = x.values();
            polluted[2] += Rat(pick(rng, 1, 9));
            CHECK(rho(spec, family, QsRandomVariable(space, polluted)).rational ==
                  rho(spec, family, x).rational);
        }
    }
}

TEST_CASE("acceptance-set recovery") {
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space);
    std::map<std::string, ExtRat> penalties;
    penalties["m1"] = ExtRat::finite(Rat(1, 2));
    penalties["m2"] = ExtRat::finite(Rat(0));
    const std::vector<RiskMeasureSpec> specs = {
        RiskMeasureSpec::worst_case_spec(),
        RiskMeasureSpec::scenario_penalty_spec(penalties),
        RiskMeasureSpec::acceptance_generated_spec({rv(space, {0, -2, 0}), rv(space, {-2, 1, 0})}),
    };
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_rv(space, rng);
        for (const auto& spec : specs) {
            // inf { m : X - m accepted } = rho(X): the shift by rho(X) sits
            // exactly on the acceptance boundary.
            const Rat value = rho(spec, family, x).rational;
            CHECK(rho(spec, family, rv_shift(x, -value)).rational == 0);
            CHECK(rho(spec, family, rv_shift(x, -value + Rat(1, 8))).rational == Rat(1, 8));
        }
    }
}

TEST_CASE("representation gaps") {
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space);
    std::mt19937_64 rng(71);
    std::vector<QsRandomVariable> probes;
    for (int k = 0; k < 10; ++k) probes.push_back(random_rv(space, rng));

    const RepresentationReport worst = verify_representation(
        RiskMeasureSpec::worst_case_spec(), family, probes, dirac_grid(family));
    CHECK(worst.exact);
    CHECK(worst.max_gap_rational == 0);

    std::map<std::string, ExtRat> penalties;
    penalties["m1"] = ExtRat::finite(Rat(1, 4));
    penalties["m2"] = ExtRat::finite(Rat(0));
    const RepresentationReport scenario = verify_representation(
        RiskMeasureSpec::scenario_penalty_spec(penalties), family, probes, member_grid(family));
    CHECK(scenario.max_gap_rational == 0);
}

TEST_CASE("fatou inequality on monotone chains") {
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space);
    const RiskMeasureSpec spec = RiskMeasureSpec::worst_case_spec();

    const auto x = rv(space, {2, 1, 0});
    std::vector<QsRandomVariable> decreasing;
    for (long n = 1; n <= 8; ++n) decreasing.push_back(rv_shift(x, Rat(1, n)));
    decreasing.push_back(x);
    CHECK(verify_fatou_monotone(spec, family, decreasing));

    const std::vector<QsRandomVariable> constant(4, x);
    CHECK(verify_fatou_monotone(spec, family, constant));

    std::vector<QsRandomVariable> increasing = {indicator(space, Event{0}),
                                                indicator(space, Event{0, 1})};
    CHECK(verify_fatou_monotone(spec, family, increasing));

    std::vector<QsRandomVariable> zigzag = {rv(space, {0, 1, 0}), rv(space, {1, 0, 0})};
    CHECK_THROWS_WITH_AS(verify_fatou_monotone(spec, family, zigzag),
                         doctest::Contains("NotMonotone"), Error);
}

TEST_CASE("acceptance half-spaces describe the polyhedral kinds") {
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space);

    const auto worst = acceptance_halfspaces(RiskMeasureSpec::worst_case_spec(), family);
    CHECK(worst.size() == 2); // one row per non-polar atom

    std::map<std::string, ExtRat> penalties;
    penalties["m1"] = ExtRat::finite(Rat(1, 4));
    penalties["m2"] = ExtRat::infinity();
    const RiskMeasureSpec scenario = RiskMeasureSpec::scenario_penalty_spec(penalties);
    const auto rows = acceptance_halfspaces(scenario, family);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].bound == Rat(1, 4));
    CHECK(rows[0].coeffs == family.member("m1").weights());

    // Membership through the half-spaces agrees with rho <= 0.
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 25; ++trial) {
        const auto x = random_rv(space, rng);
        bool inside = true;
        for (const auto& row : rows) {
            Rat dot = 0;
            for (int i = 0; i < space->size(); ++i) dot += row.coeffs[i] * x.value(i);
            inside = inside && dot <= row.bound;
        }
        CHECK(inside == (rho(scenario, family, x).rational <= 0));
    }

    CHECK_THROWS_WITH_AS(
        acceptance_halfspaces(RiskMeasureSpec::entropic_spec(Rat(1), "m1"), family),
        doctest::Contains("NotPolyhedral"), Error);
}

TEST_CASE("simplex grid enumerates the dyadic probabilities") {
    const SpacePtr space = abc();
    const MeasureFamily family = polar_c_family(space); // two non-polar atoms
    const auto grid = simplex_grid(family, 4);
    CHECK(grid.size() == 5); // (0,4), (1,3), ..., (4,0) over {a,b}
    for (const auto& q : grid) {
        CHECK(q.is_probability());
        CHECK(q.weight(2) == 0);
    }
}
