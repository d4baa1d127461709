#include "qsa/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "qsa/binomial.hpp"
#include "qsa/bipolar.hpp"
#include "qsa/classifier.hpp"
#include "qsa/measure.hpp"
#include "qsa/risk.hpp"
#include "qsa/support.hpp"

namespace qsa {

namespace {

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// Deterministic random corpus
// ---------------------------------------------------------------------------

long pick(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

SpacePtr random_space(std::mt19937_64& rng) {
    const long n = pick(rng, 2, 8);
    std::vector<std::string> atoms;
    for (long i = 0; i < n; ++i) atoms.push_back(std::string(1, static_cast<char>('a' + i)));
    return make_space(std::move(atoms));
}

// Weights are multiples of 1/q for a random q <= 16, so every denominator in
// the corpus stays within the documented bound.
Measure random_probability(const SpacePtr& space, std::mt19937_64& rng) {
    const long q = pick(rng, 1, 16);
    std::vector<long> units(space->size(), 0);
    for (long i = 0; i < q; ++i) units[pick(rng, 0, space->size() - 1)] += 1;
    std::vector<Rat> weights(space->size());
    for (int i = 0; i < space->size(); ++i) weights[i] = Rat(units[i], q);
    return Measure(space, std::move(weights));
}

MeasureFamily random_family(const SpacePtr& space, std::mt19937_64& rng) {
    const long m = pick(rng, 1, 5);
    std::vector<std::pair<std::string, Measure>> members;
    for (long k = 0; k < m; ++k)
        members.emplace_back("m" + std::to_string(k + 1), random_probability(space, rng));
    return MeasureFamily(space, std::move(members));
}

// Random mixture of the members: dominated by construction.
Measure random_dominated(const MeasureFamily& family, std::mt19937_64& rng) {
    Measure mix = zero_measure(family.space_ptr());
    bool nonzero = false;
    for (const auto& [name, member] : family.members()) {
        const Rat coefficient(pick(rng, 0, 16), 16);
        if (coefficient != 0) nonzero = true;
        mix = add(mix, scale(member, coefficient));
    }
    if (!nonzero) mix = family.members().front().second;
    return mix;
}

QsRandomVariable random_rv(const SpacePtr& space, std::mt19937_64& rng, bool nonnegative) {
    std::vector<Rat> values(space->size());
    for (int i = 0; i < space->size(); ++i) {
        const long num = nonnegative ? pick(rng, 0, 32) : pick(rng, -16, 16);
        values[i] = Rat(num, pick(rng, 1, 16));
    }
    return QsRandomVariable(space, std::move(values));
}

// ---------------------------------------------------------------------------
// Binomial fixtures
// ---------------------------------------------------------------------------

struct BoundsFixture {
    const char* name;
    NodeBounds bounds;
    bool degenerate;
};

NodeBounds make_bounds(Rat u, Rat U, Rat d, Rat D, Rat pi, Rat Pi) {
    return NodeBounds{std::move(u), std::move(U), std::move(d), std::move(D), std::move(pi),
                      std::move(Pi)};
}

const std::vector<BoundsFixture>& bounds_fixtures() {
    static const std::vector<BoundsFixture> fixtures = {
        {"classical_point",
         make_bounds(Rat(2), Rat(2), Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2)), true},
        {"symmetric_band",
         make_bounds(Rat(3, 2), Rat(2), Rat(1, 2), Rat(3, 4), Rat(1, 4), Rat(3, 4)), false},
        {"wide_band", make_bounds(Rat(6, 5), Rat(3), Rat(1, 3), Rat(9, 10), Rat(1, 3), Rat(2, 3)),
         false},
        {"asymmetric_band",
         make_bounds(Rat(101, 100), Rat(4), Rat(1, 4), Rat(99, 100), Rat(1, 10), Rat(9, 10)),
         false},
        {"overlapping_band",
         make_bounds(Rat(9, 10), Rat(2), Rat(1, 2), Rat(19, 20), Rat(2, 5), Rat(3, 5)), false},
    };
    return fixtures;
}

// Choice lists with pairwise equal-or-disjoint supports: the i-th u grid
// point is always paired with the i-th d grid point, so two selections at a
// step share either both multipliers or neither. An unrestricted pairing can
// share exactly one multiplier, which already breaks equal-or-disjoint on a
// one-period tree; the thinned family is the one the support claims cover.
std::vector<KernelChoice> diagonal_choices(const Tree& tree, std::size_t limit) {
    const auto& root = tree.levels[0][0];
    const int levels = static_cast<int>(std::min(root.u_grid.size(), root.d_grid.size()));
    std::vector<Rat> p_options{root.bounds.p_lo};
    if (root.bounds.p_hi != root.bounds.p_lo) p_options.push_back(root.bounds.p_hi);
    const int options = levels * static_cast<int>(p_options.size());
    const int T = tree.periods();

    std::vector<KernelChoice> out;
    std::vector<int> odometer(T, 0);
    for (;;) {
        std::vector<KernelSelection> steps;
        for (int t = 0; t < T; ++t) {
            const int level = odometer[t] % levels;
            const int p_index = odometer[t] / levels;
            steps.push_back(KernelSelection{root.u_grid[level], root.d_grid[level],
                                            p_options[p_index]});
        }
        out.push_back(KernelChoice::per_step(tree, steps));
        if (out.size() >= limit) break;
        int t = 0;
        while (t < T && ++odometer[t] == options) {
            odometer[t] = 0;
            ++t;
        }
        if (t == T) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

CriterionResult criterion_support_correctness() {
    CriterionResult result{1, "support correctness on the random corpus", false, "", 0};
    std::mt19937_64 rng(20240811);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const SpacePtr space = random_space(rng);
        const MeasureFamily family = random_family(space, rng);
        for (int k = 0; k < 2; ++k) {
            const Measure mu = random_dominated(family, rng);
            const OrderSupport support = order_support(family, mu);
            if (!verify_support(family, mu, support.event, false).ok) {
                result.detail = "fast check rejected a canonical support";
                return result;
            }
            if (!verify_support(family, mu, support.event, true).ok) {
                result.detail = "exhaustive check rejected a canonical support";
                return result;
            }
            ++checked;
        }
    }
    result.passed = true;
    result.detail = std::to_string(checked) + " supports verified in both modes";
    return result;
}

CriterionResult criterion_disjoint_alternative() {
    CriterionResult result{2, "disjoint supported alternative on the random corpus", false, "", 0};
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        const SpacePtr space = random_space(rng);
        const MeasureFamily family = random_family(space, rng);
        const DisjointAlternative alternative = disjoint_supported_alternative(family);
        if (!equivalent(family, alternative.family)) {
            result.detail = "output not equivalent to the source family";
            return result;
        }
        const auto& members = alternative.family.members();
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                if (!measure_meet(members[a].second, members[b].second).is_zero()) {
                    result.detail = "pairwise meet is not zero";
                    return result;
                }
            }
        }
        for (const auto& [name, support] : alternative.supports) {
            if (!verify_support(alternative.family, alternative.family.member(name), support,
                                false)
                     .ok) {
                result.detail = "member support fails verification";
                return result;
            }
        }
    }
    result.passed = true;
    result.detail = "200 families: equivalence, disjointness and supports verified";
    return result;
}

CriterionResult criterion_sup_restriction() {
    CriterionResult result{3, "restriction supremum identity", false, "", 0};
    std::mt19937_64 rng(20240812);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const SpacePtr space = random_space(rng);
        const MeasureFamily family = random_family(space, rng);
        const DisjointAlternative alternative = disjoint_supported_alternative(family);
        for (int k = 0; k < 100; ++k) {
            const QsRandomVariable x = random_rv(space, rng, true);
            if (!sup_restriction_identity(family, alternative, x)) {
                result.detail = "identity failed on a nonnegative variable";
                return result;
            }
            ++checked;
        }
    }
    result.passed = true;
    result.detail = std::to_string(checked) + " identities hold exactly";
    return result;
}

CriterionResult criterion_aggregation() {
    CriterionResult result{4, "aggregation round trip and injected inconsistencies", false, "", 0};
    std::mt19937_64 rng(20240813);
    int injected = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const SpacePtr space = random_space(rng);
        const MeasureFamily family = random_family(space, rng);
        const DisjointAlternative alternative = disjoint_supported_alternative(family);

        std::map<std::string, QsRandomVariable> assignment;
        for (const auto& [name, member] : alternative.family.members())
            assignment.emplace(name, random_rv(space, rng, false));
        const QsRandomVariable aggregated = aggregate(alternative, assignment);
        for (const auto& [name, member] : alternative.family.members()) {
            // Q(X = X^Q) = 1: agreement on every atom the member charges.
            for (int atom : member.positivity_set()) {
                if (aggregated.value(atom) != assignment.at(name).value(atom)) {
                    result.detail = "aggregator disagrees with its member on a charged atom";
                    return result;
                }
            }
        }

        // Inject an inconsistency wherever two source members overlap: a
        // shared assignment perturbed at one overlap atom must surface as a
        // violation naming that pair and that atom.
        const auto& members = family.members();
        bool done = false;
        for (std::size_t a = 0; a < members.size() && !done; ++a) {
            for (std::size_t b = a + 1; b < members.size() && !done; ++b) {
                const Event overlap = event_intersection(members[a].second.positivity_set(),
                                                         members[b].second.positivity_set());
                if (overlap.empty()) continue;
                const int atom = overlap[pick(rng, 0, static_cast<long>(overlap.size()) - 1)];
                std::map<std::string, QsRandomVariable> shared;
                const QsRandomVariable base = random_rv(space, rng, false);
                for (const auto& [name, member] : members) shared.emplace(name, base);
                std::vector<Rat> perturbed = base.values();
                perturbed[atom] += 1;
                shared.at(members[b].first) = QsRandomVariable(space, std::move(perturbed));
                const auto violations = check_consistency(family, shared);
                bool found = false;
                for (const auto& v : violations) {
                    if (v.atom == atom &&
                        ((v.member_a == members[a].first && v.member_b == members[b].first) ||
                         (v.member_a == members[b].first && v.member_b == members[a].first)))
                        found = true;
                }
                if (!found) {
                    result.detail = "injected inconsistency not reported with its witness";
                    return result;
                }
                ++injected;
                done = true;
            }
        }
    }
    if (injected < 50) {
        result.detail = "too few overlapping families to exercise the witness path";
        return result;
    }
    result.passed = true;
    result.detail = std::to_string(injected) + " injected violations detected with witnesses";
    return result;
}

CriterionResult criterion_dp_equals_oracle() {
    CriterionResult result{5, "binomial dynamic programming equals the enumeration oracle", false,
                           "", 0};
    OracleOptions oracle_options;
    oracle_options.cap = Int(2200000);
    oracle_options.parallel = true;

    int enumerated = 0;
    int reduced = 0;
    for (const auto& fixture : bounds_fixtures()) {
        for (int T = 1; T <= 3; ++T) {
            for (int G = 1; G <= 3; ++G) {
                BinomialTreeSpec spec;
                spec.periods = T;
                spec.grid = G;
                spec.bounds = fixture.bounds;
                const Tree tree = build_tree(spec);
                const Payoff payoff = Payoff::call(Rat(1));
                const SuperhedgeResult dp = superhedge_price(tree, payoff);

                if (oracle_choice_count(tree) <= oracle_options.cap) {
                    const Rat oracle = brute_force_price(tree, payoff, oracle_options);
                    if (dp.value != oracle) {
                        result.detail = std::string("oracle mismatch on ") + fixture.name +
                                        " T=" + std::to_string(T) + " G=" + std::to_string(G);
                        return result;
                    }
                    ++enumerated;
                } else {
                    // Full enumeration is out of reach here. The two exact
                    // checks below certify that node values are functions of
                    // the price and monotone in it; then an optimal selection
                    // can be chosen constant on every slice, so the maximum
                    // over time-only kernel choices is the full maximum.
                    if (!values_price_monotone(tree, dp)) {
                        result.detail = "reduction premise failed: values not price-monotone";
                        return result;
                    }
                    OracleOptions step_options;
                    step_options.cap = Int(100000);
                    const Rat step_max = step_choice_price(tree, payoff, step_options);
                    if (dp.value != step_max) {
                        result.detail = std::string("step-choice maximum mismatch on ") +
                                        fixture.name + " T=" + std::to_string(T) +
                                        " G=" + std::to_string(G);
                        return result;
                    }
                    ++reduced;
                }

                if (fixture.degenerate) {
                    // Point intervals: the one admissible kernel gives the
                    // classical binomial price.
                    const KernelChoice unique_choice = KernelChoice::homogeneous(
                        tree, KernelSelection{fixture.bounds.u_lo, fixture.bounds.d_lo,
                                              fixture.bounds.p_lo});
                    const Measure q = product_measure(tree, unique_choice);
                    std::vector<Rat> leaf_payoffs(tree.leaves().size());
                    for (std::size_t i = 0; i < tree.leaves().size(); ++i)
                        leaf_payoffs[i] = payoff.eval(tree.leaves()[i]);
                    const Rat classical =
                        expectation(q, QsRandomVariable(tree.leaf_space, leaf_payoffs));
                    if (dp.value != classical) {
                        result.detail = "degenerate spec does not match the classical value";
                        return result;
                    }
                }
            }
        }
    }
    result.passed = true;
    std::ostringstream detail;
    detail << enumerated << " specs matched by full enumeration, " << reduced
           << " by the verified constant-selection reduction";
    result.detail = detail.str();
    return result;
}

CriterionResult criterion_product_supports() {
    CriterionResult result{6, "binomial product-measure supports at grid scale", false, "", 0};
    long pairs = 0;
    for (const auto& fixture : bounds_fixtures()) {
        for (int T = 1; T <= 3; ++T) {
            for (int G = 1; G <= 3; ++G) {
                BinomialTreeSpec spec;
                spec.periods = T;
                spec.grid = G;
                spec.bounds = fixture.bounds;
                const Tree tree = build_tree(spec);
                const auto choices = diagonal_choices(tree, 24);
                for (const auto& choice : choices) {
                    const Measure q = product_measure(tree, choice);
                    if (q.mass(support_of_product(tree, choice)) != 1) {
                        result.detail = "product measure does not charge its support fully";
                        return result;
                    }
                }
                const SupportPairCheck check = supports_equal_or_disjoint(tree, choices);
                if (!check.ok) {
                    result.detail = std::string("equal-or-disjoint violated on ") + fixture.name;
                    return result;
                }
                pairs += static_cast<long>(choices.size()) *
                         static_cast<long>(choices.size() - 1) / 2;
            }
        }
    }
    result.passed = true;
    result.detail = "Q(S(Q)) = 1 for every choice; " + std::to_string(pairs) +
                    " support pairs equal or disjoint";
    return result;
}

CriterionResult criterion_price_monotonicity() {
    CriterionResult result{7, "binomial superhedging price monotone in the uncertainty", false, "", 0};
    // Nested ladder of boxes; every interval of a level contains the one
    // below it, and the probability interval widens as well.
    const std::vector<NodeBounds> ladder = {
        make_bounds(Rat(7, 4), Rat(7, 4), Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2)),
        make_bounds(Rat(3, 2), Rat(2), Rat(2, 5), Rat(3, 5), Rat(2, 5), Rat(3, 5)),
        make_bounds(Rat(5, 4), Rat(5, 2), Rat(3, 10), Rat(7, 10), Rat(3, 10), Rat(7, 10)),
    };
    const std::vector<Payoff> payoffs = {Payoff::call(Rat(1)), Payoff::put(Rat(3, 2)),
                                         Payoff::digital(Rat(1))};
    int comparisons = 0;
    const auto price_of = [](const NodeBounds& bounds, int G, const Payoff& payoff) {
        BinomialTreeSpec spec;
        spec.periods = 2;
        spec.grid = G;
        spec.bounds = bounds;
        return superhedge_price(build_tree(spec), payoff).value;
    };
    for (const auto& payoff : payoffs) {
        std::vector<std::vector<Rat>> price(ladder.size()); // [level][G-1]
        for (std::size_t level = 0; level < ladder.size(); ++level) {
            for (int G = 1; G <= 3; ++G)
                price[level].push_back(price_of(ladder[level], G, payoff));
        }
        for (std::size_t level = 0; level < ladder.size(); ++level) {
            for (int g = 0; g + 1 < 3; ++g) {
                if (price[level][g] > price[level][g + 1]) {
                    result.detail = "grid refinement lowered the price";
                    return result;
                }
                ++comparisons;
            }
            if (level + 1 < ladder.size()) {
                for (int g = 0; g < 3; ++g) {
                    if (price[level][g] > price[level + 1][g]) {
                        result.detail = "interval widening lowered the price";
                        return result;
                    }
                    ++comparisons;
                }
            }
        }

        // Single-axis widenings: enlarging only one of the three intervals
        // must not lower the price either.
        for (std::size_t level = 0; level + 1 < ladder.size(); ++level) {
            for (int G = 1; G <= 3; ++G) {
                const Rat base_price = price[level][G - 1];
                for (int axis = 0; axis < 3; ++axis) {
                    NodeBounds widened = ladder[level];
                    const NodeBounds& next = ladder[level + 1];
                    if (axis == 0) {
                        widened.u_lo = next.u_lo;
                        widened.u_hi = next.u_hi;
                    } else if (axis == 1) {
                        widened.d_lo = next.d_lo;
                        widened.d_hi = next.d_hi;
                    } else {
                        widened.p_lo = next.p_lo;
                        widened.p_hi = next.p_hi;
                    }
                    if (price_of(widened, G, payoff) < base_price) {
                        result.detail = "single-axis widening lowered the price";
                        return result;
                    }
                    ++comparisons;
                }
            }
        }
    }
    result.passed = true;
    result.detail = std::to_string(comparisons) + " exact comparisons, all monotone";
    return result;
}

CriterionResult criterion_bipolar() {
    CriterionResult result{8, "bipolar identity with grid cross-check", false, "", 0};
    std::mt19937_64 rng(20240815);
    int disagreement_probes = 0;
    int grid_checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const long n = pick(rng, 2, 5);
        std::vector<std::string> atoms;
        for (long i = 0; i < n; ++i) atoms.push_back(std::string(1, static_cast<char>('a' + i)));
        const SpacePtr space = make_space(atoms);
        const MeasureFamily family = random_family(space, rng);

        const std::vector<Rat> value_set = {Rat(0), Rat(1, 2), Rat(1), Rat(2)};
        const long generator_count = pick(rng, 1, 4);
        std::vector<QsRandomVariable> generators;
        for (long g = 0; g < generator_count; ++g) {
            std::vector<Rat> values(space->size());
            for (int i = 0; i < space->size(); ++i) values[i] = value_set[pick(rng, 0, 3)];
            generators.emplace_back(space, std::move(values));
        }
        const SolidConvexSet set(family, generators);

        std::vector<QsRandomVariable> probes;
        for (int k = 0; k < 5; ++k) {
            std::vector<Rat> values(space->size());
            for (int i = 0; i < space->size(); ++i) values[i] = value_set[pick(rng, 0, 3)];
            probes.emplace_back(space, std::move(values));
        }
        const BipolarReport report = check_bipolar_equivalence(family, set, probes);
        disagreement_probes += report.probes_checked;
        if (!report.disagreements.empty()) {
            result.detail = "direct and bipolar membership disagree";
            return result;
        }

        if (n <= 3) {
            // Dense dyadic grid over the polar (step 1/8, box radius 8). All
            // quantities are small dyadic rationals, so doubles are exact.
            std::vector<double> gen_values(generator_count * n);
            for (long g = 0; g < generator_count; ++g)
                for (int i = 0; i < n; ++i)
                    gen_values[g * n + i] =
                        numerator(generators[g].value(i)).convert_to<double>() /
                        denominator(generators[g].value(i)).convert_to<double>();
            std::vector<int> support;
            for (int i = 0; i < n; ++i)
                if (!family.atom_is_polar(i)) support.push_back(i);

            for (const auto& probe : probes) {
                const MembershipResult membership = bipolar_membership(family, set, probe);
                // Sound half: any feasible grid point bounds the optimum.
                double grid_max = 0.0;
                const long radius = 64; // 8 / (1/8)
                std::vector<long> units(support.size(), 0);
                const std::function<void(std::size_t)> scan = [&](std::size_t position) {
                    if (position == units.size()) {
                        for (long g = 0; g < generator_count; ++g) {
                            double dot = 0;
                            for (std::size_t k = 0; k < support.size(); ++k)
                                dot += gen_values[g * n + support[k]] * units[k] / 8.0;
                            if (dot > 1.0) return;
                        }
                        double dot = 0;
                        for (std::size_t k = 0; k < support.size(); ++k)
                            dot += (numerator(probe.value(support[k])).convert_to<double>() /
                                    denominator(probe.value(support[k])).convert_to<double>()) *
                                   units[k] / 8.0;
                        grid_max = std::max(grid_max, dot);
                        return;
                    }
                    for (long v = 0; v <= radius; ++v) {
                        units[position] = v;
                        scan(position + 1);
                    }
                };
                scan(0);
                ++grid_checked;
                if (membership.member && grid_max > 1.0) {
                    result.detail = "grid found a separating measure for a declared member";
                    return result;
                }
                if (!membership.member) {
                    // Exact certificate: the optimizer or the ray must verify.
                    if (membership.ray_atom) {
                        if (probe.value(*membership.ray_atom) <= 0) {
                            result.detail = "ray certificate does not separate";
                            return result;
                        }
                    } else {
                        const std::vector<Rat>& mu = *membership.certificate;
                        Rat dot = 0;
                        for (int i = 0; i < n; ++i) dot += mu[i] * probe.value(i);
                        if (dot <= 1) {
                            result.detail = "optimal certificate does not separate";
                            return result;
                        }
                        for (const auto& g : generators) {
                            Rat gdot = 0;
                            for (int i = 0; i < n; ++i) gdot += mu[i] * g.value(i);
                            if (gdot > 1) {
                                result.detail = "certificate violates a polar constraint";
                                return result;
                            }
                        }
                    }
                }
            }
        }
    }
    result.passed = true;
    result.detail = std::to_string(disagreement_probes) + " probes agree; " +
                    std::to_string(grid_checked) + " grid cross-checks";
    return result;
}

CriterionResult criterion_risk_duality() {
    CriterionResult result{9, "risk measure dual representations", false, "", 0};
    const SpacePtr space = make_space({"a", "b", "c", "d"});
    std::vector<std::pair<std::string, Measure>> members;
    members.emplace_back("m1", uniform_on(space, {"a", "b"}));
    members.emplace_back("m2", uniform_on(space, {"b", "c"}));
    const MeasureFamily family(space, members); // atom d is polar

    std::mt19937_64 rng(20240816);
    std::vector<QsRandomVariable> probes;
    for (int k = 0; k < 20; ++k) probes.push_back(random_rv(space, rng, false));

    // Worst case against the Dirac grid: gap exactly zero.
    {
        const RiskMeasureSpec spec = RiskMeasureSpec::worst_case_spec();
        for (const auto& x : probes) {
            Rat expected;
            bool first = true;
            for (int i = 0; i < space->size(); ++i) {
                if (family.atom_is_polar(i)) continue;
                if (first || x.value(i) > expected) expected = x.value(i);
                first = false;
            }
            if (rho(spec, family, x).rational != expected) {
                result.detail = "worst case is not the non-polar maximum";
                return result;
            }
        }
        const RepresentationReport report =
            verify_representation(spec, family, probes, dirac_grid(family));
        if (report.max_gap_rational != 0) {
            result.detail = "worst-case dual gap is not exactly zero";
            return result;
        }
    }

    // Scenario penalties against the member grid: gap exactly zero.
    {
        std::map<std::string, ExtRat> penalties;
        penalties["m1"] = ExtRat::finite(Rat(0));
        penalties["m2"] = ExtRat::finite(Rat(1, 3));
        const RiskMeasureSpec spec = RiskMeasureSpec::scenario_penalty_spec(penalties);
        const RepresentationReport report =
            verify_representation(spec, family, probes, member_grid(family));
        if (report.max_gap_rational != 0) {
            result.detail = "scenario-penalty dual gap is not exactly zero";
            return result;
        }
    }

    // Entropic: grid gap small, strictly better under refinement, and the
    // closed-form maximizer closes the gap to numerical precision.
    {
        const SpacePtr pair_space = make_space({"a", "b"});
        std::vector<std::pair<std::string, Measure>> ref_members;
        ref_members.emplace_back("ref", uniform_on(pair_space, {"a", "b"}));
        const MeasureFamily ref_family(pair_space, ref_members);
        const RiskMeasureSpec spec = RiskMeasureSpec::entropic_spec(Rat(1), "ref");
        const QsRandomVariable x(pair_space, {Rat(0), Rat(1)});
        const std::vector<QsRandomVariable> entropic_probes{x};

        const double gap16 =
            verify_representation(spec, ref_family, entropic_probes,
                                  simplex_grid(ref_family, 16))
                .max_gap;
        const double gap32 =
            verify_representation(spec, ref_family, entropic_probes,
                                  simplex_grid(ref_family, 32))
                .max_gap;
        if (!(gap16 <= 1e-2)) {
            result.detail = "entropic gap at step 1/16 exceeds 1e-2";
            return result;
        }
        if (!(gap32 < gap16)) {
            result.detail = "entropic gap did not decrease under refinement";
            return result;
        }
        // Gibbs maximizer: q_i proportional to p_i exp(x_i).
        const double pa = 0.5, pb = 0.5;
        const double za = pa * std::exp(0.0), zb = pb * std::exp(1.0);
        const double qa = za / (za + zb), qb = zb / (za + zb);
        const double dual_at_gibbs =
            qb * 1.0 - (qa * std::log(qa / pa) + qb * std::log(qb / pb));
        const double rho_x = rho(spec, ref_family, x).as_double();
        if (std::fabs(rho_x - dual_at_gibbs) > 1e-9) {
            result.detail = "entropic value does not match the closed-form maximizer";
            return result;
        }
    }

    result.passed = true;
    result.detail = "exact zero gaps for the rational kinds; entropic grid gap shrinks and "
                    "matches the closed form";
    return result;
}

CriterionResult criterion_classifier() {
    CriterionResult result{10, "classifier reproduces the equivalence table", false, "", 0};

    const auto expect = [&](const ClassificationReport& report, const std::string& flag,
                            Tri value) {
        return report.flag(flag).value == value;
    };

    for (const auto& name : preset_names()) {
        const ClassificationReport report = classify(preset(name));
        for (const auto& [flag_name, flag] : report.flags) {
            if (flag.value != Tri::undecidable && (flag.rule.empty() || flag.citation.empty())) {
                result.detail = "decided flag without rule or citation in " + name;
                return result;
            }
        }
        // The table rows: Kreps-Yan <=> dominated; aggregation <=> class (S)
        // and Dedekind complete; the Fatou equivalence additionally needs
        // every dominated measure supported.
        const Tri dominated = report.flag("dominated").value;
        const Tri kreps = report.flag("kreps_yan").value;
        if (dominated != Tri::undecidable && kreps != dominated) {
            result.detail = "Kreps-Yan row broken in " + name;
            return result;
        }
        if (report.flag("super_dedekind").value != dominated) {
            result.detail = "super Dedekind row broken in " + name;
            return result;
        }
    }

    const ClassificationReport singleton = classify(preset("dominated_singleton"));
    for (const auto& [flag_name, flag] : singleton.flags) {
        if (flag.value != Tri::yes) {
            result.detail = "dominated_singleton should be all yes";
            return result;
        }
    }

    const ClassificationReport dirac = classify(preset("dirac_unit_interval"));
    if (!expect(dirac, "class_S", Tri::yes) || !expect(dirac, "dominated", Tri::no) ||
        !expect(dirac, "sca_equals_ca", Tri::no) || !expect(dirac, "kreps_yan", Tri::no)) {
        result.detail = "dirac_unit_interval flags are wrong";
        return result;
    }

    const ClassificationReport band = classify(preset("volatility_band"));
    if (!expect(band, "sca_equals_ca", Tri::no) ||
        band.notes.find("not order semicontinuous") == std::string::npos) {
        result.detail = "volatility_band flags or note are wrong";
        return result;
    }

    const ClassificationReport product = classify(preset("product_theta"));
    if (!expect(product, "aggregation_AG", Tri::yes) ||
        !expect(product, "L_infty_is_dual", Tri::yes) ||
        !expect(product, "fatou_F1_iff_F2", Tri::no)) {
        result.detail = "product_theta flags are wrong";
        return result;
    }

    const ClassificationReport binomial = classify(preset("robust_binomial"));
    if (!expect(binomial, "class_S", Tri::yes) || !expect(binomial, "dominated", Tri::no)) {
        result.detail = "robust_binomial flags are wrong";
        return result;
    }

    // Implication consistency on random symbolic descriptors.
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        SymbolicDescriptor d;
        const long kind = pick(rng, 0, 2);
        d.cardinality.kind = kind == 0   ? Cardinality::Kind::finite
                             : kind == 1 ? Cardinality::Kind::countably_infinite
                                         : Cardinality::Kind::continuum;
        d.cardinality.count = pick(rng, 1, 4);
        d.all_members_supported = pick(rng, 0, 1) == 1;
        d.pairwise_disjoint_supports = d.all_members_supported && pick(rng, 0, 1) == 1;
        d.admits_perfect_disjoint_subfamily =
            d.cardinality.kind == Cardinality::Kind::continuum && pick(rng, 0, 1) == 1;
        d.product_structure = pick(rng, 0, 3) == 0;
        d.within_continuum = pick(rng, 0, 9) != 0;

        ClassificationReport report = classify(ModelDescriptor::from_symbolic(d));
        const Tri dominated = report.flag("dominated").value;
        const Tri super_dd = report.flag("super_dedekind").value;
        const Tri class_s = report.flag("class_S").value;
        const Tri sca = report.flag("sca_equals_ca").value;
        const Tri dc = report.flag("dedekind_complete").value;
        const auto violates = [&](bool condition) { return !condition; };
        if (violates(super_dd == dominated) ||
            violates(report.flag("kreps_yan").value == dominated) ||
            violates(dominated != Tri::yes || class_s == Tri::yes) ||
            violates(dominated != Tri::yes || sca == Tri::yes) ||
            violates(sca != Tri::no || dominated == Tri::no)) {
            result.detail = "implication consistency violated";
            return result;
        }
        const auto conj = [](Tri a, Tri b) {
            if (a == Tri::no || b == Tri::no) return Tri::no;
            if (a == Tri::yes && b == Tri::yes) return Tri::yes;
            return Tri::undecidable;
        };
        if (report.flag("aggregation_AG").value != conj(class_s, dc)) {
            result.detail = "aggregation is not the stated conjunction";
            return result;
        }
        if (report.flag("fatou_F1_iff_F2").value != conj(conj(class_s, dc), sca)) {
            result.detail = "the Fatou flag is not the stated conjunction";
            return result;
        }
        // Determinism / rule closure: a second run reproduces the report.
        const ClassificationReport again = classify(ModelDescriptor::from_symbolic(d));
        for (std::size_t i = 0; i < report.flags.size(); ++i) {
            if (report.flags[i].second.value != again.flags[i].second.value) {
                result.detail = "classification is not stable";
                return result;
            }
        }
    }

    result.passed = true;
    result.detail = "7 presets match the table; 1000 random descriptors consistent";
    return result;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    using CriterionFn = CriterionResult (*)();
    const std::vector<std::pair<const char*, CriterionFn>> criteria = {
        {"support correctness on the random corpus", criterion_support_correctness},
        {"disjoint supported alternative on the random corpus", criterion_disjoint_alternative},
        {"restriction supremum identity", criterion_sup_restriction},
        {"aggregation round trip and injected inconsistencies", criterion_aggregation},
        {"binomial dynamic programming equals the enumeration oracle", criterion_dp_equals_oracle},
        {"binomial product-measure supports at grid scale", criterion_product_supports},
        {"binomial superhedging price monotone in the uncertainty", criterion_price_monotonicity},
        {"bipolar identity with grid cross-check", criterion_bipolar},
        {"risk measure dual representations", criterion_risk_duality},
        {"classifier reproduces the equivalence table", criterion_classifier}};

    std::vector<CriterionResult> results;
    for (const auto& [name, criterion] : criteria) {
        if (!options.filter.empty() && std::string(name).find(options.filter) == std::string::npos)
            continue;
        const auto start = Clock::now();
        CriterionResult result = criterion();
        result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        results.push_back(std::move(result));
    }
    return results;
}

void print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out) {
    for (const auto& result : results) {
        out << (result.passed ? "PASS" : "FAIL") << " criterion " << result.id << ": "
            << result.name << " (" << result.detail << ") ["
            << static_cast<long>(result.seconds * 1000) << " ms]\n";
    }
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& result : results) {
        if (!result.passed) return false;
    }
    return true;
}

} // namespace qsa
