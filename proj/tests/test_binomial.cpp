#include <doctest.h>

#include "helpers.hpp"
#include "qsa/binomial.hpp"
#include "qsa/error.hpp"
#include "qsa/support.hpp"

using namespace qsa;
using namespace qsa::testing;

namespace {

BinomialTreeSpec spec_of(int T, int G, NodeBounds bounds) {
    BinomialTreeSpec spec;
    spec.periods = T;
    spec.grid = G;
    spec.bounds = std::move(bounds);
    return spec;
}

NodeBounds classical() {
    return NodeBounds{Rat(2), Rat(2), Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2)};
}

NodeBounds banded() {
    return NodeBounds{Rat(3, 2), Rat(2), Rat(1, 2), Rat(3, 4), Rat(1, 4), Rat(3, 4)};
}

} // namespace

TEST_CASE("bounds validation names the violated condition") {
    NodeBounds bad = classical();
    bad.p_lo = 0;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("(i)"), Error);
    bad = classical();
    bad.d_hi = Rat(1, 4); // d > D
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("(ii)"), Error);
    bad = classical();
    bad.u_hi = Rat(1, 2);
    bad.u_lo = Rat(1, 2);
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("(iii)"), Error);
}

TEST_CASE("tree construction") {
    const Tree one = build_tree(spec_of(1, 1, classical()));
    REQUIRE(one.leaves().size() == 2);
    CHECK(one.leaves()[0].price == Rat(1, 2));
    CHECK(one.leaves()[1].price == 2);

    const Tree two = build_tree(spec_of(2, 1, classical()));
    REQUIRE(two.leaves().size() == 4);
    std::vector<Rat> prices;
    for (const auto& leaf : two.leaves()) prices.push_back(leaf.price);
    std::sort(prices.begin(), prices.end());
    CHECK(prices == std::vector<Rat>{Rat(1, 4), Rat(1), Rat(1), Rat(4)});

    const Tree wide = build_tree(spec_of(1, 2, banded()));
    CHECK(wide.leaves().size() == 4); // two u points and two d points

    BinomialTreeSpec capped = spec_of(3, 3, banded());
    capped.leaf_cap = 100;
    CHECK_THROWS_WITH_AS(build_tree(capped), doctest::Contains("SizeCapExceeded"), Error);
}

TEST_CASE("grid points include the endpoints") {
    const auto grid = grid_points(Rat(1, 2), Rat(3, 4), 3);
    CHECK(grid == std::vector<Rat>{Rat(1, 2), Rat(5, 8), Rat(3, 4)});
    CHECK(grid_points(Rat(2), Rat(2), 5) == std::vector<Rat>{Rat(2)});
    // A proper interval keeps both endpoints even when one point is asked
    // for; a degenerate interval collapses.
    CHECK(grid_points(Rat(1, 3), Rat(2), 1) == std::vector<Rat>{Rat(1, 3), Rat(2)});
}

TEST_CASE("single-period endpoint evaluation") {
    // u and d pinned, p ranges over [1/4, 3/4], payoff is the price itself:
    // the optimum sits at the upper endpoint.
    NodeBounds bounds{Rat(2), Rat(2), Rat(1, 2), Rat(1, 2), Rat(1, 4), Rat(3, 4)};
    const Tree tree = build_tree(spec_of(1, 1, bounds));
    const SuperhedgeResult result = superhedge_price(tree, Payoff::identity());
    CHECK(result.value == Rat(13, 8));
    CHECK(result.argmax[0][0].p == Rat(3, 4));
    CHECK(brute_force_price(tree, Payoff::identity()) == Rat(13, 8));
}

TEST_CASE("constant payoffs price at the constant") {
    const Tree tree = build_tree(spec_of(2, 2, banded()));
    std::map<std::string, Rat> values;
    for (const auto& leaf : tree.leaves()) values[leaf.path] = Rat(1);
    const SuperhedgeResult result = superhedge_price(tree, Payoff::explicit_map(values));
    CHECK(result.value == 1);
    CHECK(brute_force_price(tree, Payoff::explicit_map(values)) == 1);
}

TEST_CASE("degenerate specs reproduce the classical binomial price") {
    for (int T = 1; T <= 3; ++T) {
        const Tree tree = build_tree(spec_of(T, 1, classical()));
        const Payoff payoff = Payoff::call(Rat(1));
        const KernelChoice unique = KernelChoice::homogeneous(
            tree, KernelSelection{Rat(2), Rat(1, 2), Rat(1, 2)});
        const Measure q = product_measure(tree, unique);
        std::vector<Rat> leaf_payoffs;
        for (const auto& leaf : tree.leaves()) leaf_payoffs.push_back(payoff.eval(leaf));
        const Rat classical_price =
            expectation(q, QsRandomVariable(tree.leaf_space, leaf_payoffs));
        CHECK(superhedge_price(tree, payoff).value == classical_price);
    }
}

TEST_CASE("dynamic programming equals the oracle on random explicit payoffs") {
    // Explicit payoffs are deliberately non-monotone: they exercise the
    // per-node selections that menu payoffs never need.
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 12; ++trial) {
        const int T = static_cast<int>(pick(rng, 1, 2));
        const int G = static_cast<int>(pick(rng, 1, 2));
        const Tree tree = build_tree(spec_of(T, G, banded()));
        std::map<std::string, Rat> values;
        for (const auto& leaf : tree.leaves())
            values[leaf.path] = Rat(pick(rng, -16, 16), pick(rng, 1, 4));
        const Payoff payoff = Payoff::explicit_map(values);
        const SuperhedgeResult dp = superhedge_price(tree, payoff);
        CHECK(dp.value == brute_force_price(tree, payoff));
    }
}

TEST_CASE("oracle is bit-identical in serial and parallel mode") {
    const Tree tree = build_tree(spec_of(2, 2, banded()));
    std::mt19937_64 rng(79);
    std::map<std::string, Rat> values;
    for (const auto& leaf : tree.leaves())
        values[leaf.path] = Rat(pick(rng, -8, 8), pick(rng, 1, 4));
    const Payoff payoff = Payoff::explicit_map(values);
    OracleOptions serial;
    serial.parallel = false;
    OracleOptions parallel;
    parallel.parallel = true;
    CHECK(brute_force_price(tree, payoff, serial) == brute_force_price(tree, payoff, parallel));
}

TEST_CASE("oracle respects its cap") {
    const Tree tree = build_tree(spec_of(3, 3, banded()));
    CHECK(oracle_choice_count(tree) > Int(1000000));
    CHECK_THROWS_WITH_AS(brute_force_price(tree, Payoff::call(Rat(1))),
                         doctest::Contains("OracleCapExceeded"), Error);
}

TEST_CASE("supports of product measures") {
    const Tree tree = build_tree(spec_of(1, 2, banded()));
    // u grid {3/2, 2}, d grid {1/2, 3/4}; the choice (2, 1/2) supports the
    // two matching leaves out of four.
    const KernelChoice choice = KernelChoice::homogeneous(
        tree, KernelSelection{Rat(2), Rat(1, 2), Rat(1, 3)});
    const Event support = support_of_product(tree, choice);
    REQUIRE(support.size() == 2);
    CHECK(tree.leaves()[support[0]].price == Rat(1, 2));
    CHECK(tree.leaves()[support[1]].price == 2);
    CHECK(product_measure(tree, choice).mass(support) == 1);

    // Homogeneous two-period choice: 4 of the 16 leaves.
    const Tree two = build_tree(spec_of(2, 2, banded()));
    const KernelChoice hom = KernelChoice::homogeneous(
        two, KernelSelection{Rat(3, 2), Rat(3, 4), Rat(1, 4)});
    CHECK(two.leaves().size() == 16);
    CHECK(support_of_product(two, hom).size() == 4);
    CHECK(product_measure(two, hom).mass(support_of_product(two, hom)) == 1);

    // Degenerate grid: the support is the whole tree.
    const Tree degenerate = build_tree(spec_of(2, 1, classical()));
    const KernelChoice only = KernelChoice::homogeneous(
        degenerate, KernelSelection{Rat(2), Rat(1, 2), Rat(1, 2)});
    CHECK(support_of_product(degenerate, only).size() == degenerate.leaves().size());

    CHECK_THROWS_WITH_AS(
        product_measure(tree, KernelChoice::homogeneous(
                                  tree, KernelSelection{Rat(7), Rat(1, 2), Rat(1, 3)})),
        doctest::Contains("InvalidChoice"), Error);
}

TEST_CASE("support pair structure") {
    const Tree tree = build_tree(spec_of(1, 2, banded()));
    const auto choose = [&](Rat u, Rat d, Rat p) {
        return KernelChoice::homogeneous(tree, KernelSelection{u, d, p});
    };

    // Differing in p only: identical supports.
    const SupportPairCheck same_ud = supports_equal_or_disjoint(
        tree, {choose(Rat(2), Rat(1, 2), Rat(1, 3)), choose(Rat(2), Rat(1, 2), Rat(2, 3))});
    CHECK(same_ud.ok);

    // Differing in both coordinates: disjoint supports.
    const SupportPairCheck disjoint = supports_equal_or_disjoint(
        tree, {choose(Rat(2), Rat(1, 2), Rat(1, 3)), choose(Rat(3, 2), Rat(3, 4), Rat(1, 3))});
    CHECK(disjoint.ok);

    // Sharing exactly one coordinate: the supports overlap partially, which
    // the checker must flag. On a one-period tree the supports {2, 1/2} and
    // {2, 3/4} share the u leaf and differ in the d leaf.
    const SupportPairCheck partial = supports_equal_or_disjoint(
        tree, {choose(Rat(2), Rat(1, 2), Rat(1, 3)), choose(Rat(2), Rat(3, 4), Rat(1, 3))});
    CHECK_FALSE(partial.ok);
    REQUIRE(partial.violating.has_value());
    CHECK(partial.violating->first == 0);
    CHECK(partial.violating->second == 1);

    // A single choice is vacuously fine.
    CHECK(supports_equal_or_disjoint(tree, {choose(Rat(2), Rat(1, 2), Rat(1, 3))}).ok);
}

TEST_CASE("supermartingale property of the value process") {
    const Tree tree = build_tree(spec_of(2, 2, banded()));
    const Payoff payoff = Payoff::call(Rat(1));
    const SuperhedgeResult result = superhedge_price(tree, payoff);

    std::vector<KernelChoice> choices;
    choices.push_back(KernelChoice::homogeneous(tree, KernelSelection{Rat(3, 2), Rat(1, 2), Rat(1, 4)}));
    choices.push_back(KernelChoice::homogeneous(tree, KernelSelection{Rat(2), Rat(3, 4), Rat(3, 4)}));
    // The argmax selections give equality at the root by construction.
    std::vector<std::vector<KernelSelection>> argmax_steps = result.argmax;
    KernelChoice optimal;
    optimal.per_node = argmax_steps;
    choices.push_back(optimal);

    const SupermartingaleCheck check = verify_supermartingale(tree, result, choices);
    CHECK(check.ok);

    // The optimal choice attains the value at the root.
    const auto& root_sel = result.argmax[0][0];
    const auto& root = tree.levels[0][0];
    const Rat attained =
        root_sel.u == root_sel.d
            ? result.node_values[1][root.child_begin + root.child_index(root_sel.u)]
            : root_sel.p * result.node_values[1][root.child_begin + root.child_index(root_sel.u)] +
                  (1 - root_sel.p) *
                      result.node_values[1][root.child_begin + root.child_index(root_sel.d)];
    CHECK(attained == result.value);
}

TEST_CASE("price responds monotonically to payoff and cash") {
    const Tree tree = build_tree(spec_of(2, 2, banded()));
    std::mt19937_64 rng(83);
    std::map<std::string, Rat> low, high;
    for (const auto& leaf : tree.leaves()) {
        const Rat base(pick(rng, -8, 8), 2);
        low[leaf.path] = base;
        high[leaf.path] = base + Rat(pick(rng, 0, 6), 3);
    }
    const Rat price_low = superhedge_price(tree, Payoff::explicit_map(low)).value;
    const Rat price_high = superhedge_price(tree, Payoff::explicit_map(high)).value;
    CHECK(price_low <= price_high);

    std::map<std::string, Rat> shifted = low;
    for (auto& [path, value] : shifted) value += Rat(7, 2);
    CHECK(superhedge_price(tree, Payoff::explicit_map(shifted)).value == price_low + Rat(7, 2));
}

TEST_CASE("step-choice maximum matches the oracle when values are price-monotone") {
    const Tree tree = build_tree(spec_of(2, 2, banded()));
    const Payoff payoff = Payoff::call(Rat(1));
    const SuperhedgeResult dp = superhedge_price(tree, payoff);
    CHECK(values_price_monotone(tree, dp));
    CHECK(step_choice_price(tree, payoff) == dp.value);
    CHECK(brute_force_price(tree, payoff) == dp.value);
}

TEST_CASE("product measures are their own supported alternative") {
    // A family of kernel products, handed to the support machinery as an
    // explicit family on the leaf space: every member must be supported by
    // the support set the tree computes for it.
    const Tree tree = build_tree(spec_of(2, 2, banded()));
    const auto choose = [&](Rat u, Rat d, Rat p) {
        return KernelChoice::homogeneous(tree, KernelSelection{u, d, p});
    };
    const std::vector<KernelChoice> choices = {
        choose(Rat(3, 2), Rat(1, 2), Rat(1, 4)),
        choose(Rat(2), Rat(3, 4), Rat(3, 4)),
        choose(Rat(2), Rat(3, 4), Rat(1, 4)),
    };
    std::vector<std::pair<std::string, Measure>> members;
    for (std::size_t i = 0; i < choices.size(); ++i)
        members.emplace_back("q" + std::to_string(i), product_measure(tree, choices[i]));
    const MeasureFamily family(tree.leaf_space, members);
    for (std::size_t i = 0; i < choices.size(); ++i) {
        const Event support = support_of_product(tree, choices[i]);
        CHECK(verify_support(family, family.member("q" + std::to_string(i)), support).ok);
    }
}

TEST_CASE("per-node bounds override the homogeneous box") {
    BinomialTreeSpec spec = spec_of(2, 1, classical());
    // After an up move the up factor is 3 instead of 2.
    NodeBounds up = classical();
    up.u_lo = up.u_hi = Rat(3);
    spec.node_bounds.emplace("2", up);
    const Tree tree = build_tree(spec);
    Rat best_price = tree.leaves()[0].price;
    for (const auto& leaf : tree.leaves()) best_price = std::max(best_price, leaf.price);
    CHECK(best_price == 6);
}
