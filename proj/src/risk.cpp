#include "qsa/risk.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qsa/error.hpp"
#include "qsa/lp.hpp"

namespace qsa {

RiskMeasureSpec RiskMeasureSpec::worst_case_spec() {
    return RiskMeasureSpec{};
}

RiskMeasureSpec RiskMeasureSpec::entropic_spec(Rat gamma, std::string reference) {
    RiskMeasureSpec spec;
    spec.kind = RiskKind::entropic;
    if (gamma <= 0) fail("BadGamma", "entropic risk aversion must be positive");
    spec.gamma = std::move(gamma);
    spec.reference = std::move(reference);
    return spec;
}

RiskMeasureSpec RiskMeasureSpec::scenario_penalty_spec(std::map<std::string, ExtRat> penalties) {
    RiskMeasureSpec spec;
    spec.kind = RiskKind::scenario_penalty;
    spec.penalties = std::move(penalties);
    return spec;
}

RiskMeasureSpec RiskMeasureSpec::acceptance_generated_spec(
    std::vector<QsRandomVariable> generators) {
    RiskMeasureSpec spec;
    spec.kind = RiskKind::acceptance_generated;
    if (generators.empty()) fail("EmptyGenerators", "acceptance set needs a generator");
    spec.generators = std::move(generators);
    return spec;
}

double RiskValue::as_double() const {
    if (exact)
        return numerator(rational).convert_to<double>() /
               denominator(rational).convert_to<double>();
    return approx;
}

RiskValue RiskValue::from_rat(Rat r) { return RiskValue{true, std::move(r), 0.0}; }
RiskValue RiskValue::from_double(double d) { return RiskValue{false, Rat(0), d}; }

namespace {

double to_double(const Rat& r) {
    return numerator(r).convert_to<double>() / denominator(r).convert_to<double>();
}

const Measure& reference_member(const RiskMeasureSpec& spec, const MeasureFamily& family) {
    if (!family.has_member(spec.reference))
        fail("ReferenceMissing", "entropic reference \"" + spec.reference +
                                     "\" is not a family member");
    return family.member(spec.reference);
}

Rat worst_case_rho(const MeasureFamily& family, const QsRandomVariable& x) {
    bool first = true;
    Rat best = 0;
    for (int i = 0; i < family.space().size(); ++i) {
        if (family.atom_is_polar(i)) continue;
        if (first || x.value(i) > best) best = x.value(i);
        first = false;
    }
    return best;
}

Rat scenario_penalty_rho(const RiskMeasureSpec& spec, const MeasureFamily& family,
                         const QsRandomVariable& x) {
    bool any = false;
    Rat best = 0;
    for (const auto& [name, penalty] : spec.penalties) {
        if (!family.has_member(name))
            fail("UnknownMember", "penalty references unknown member \"" + name + "\"");
        if (penalty.infinite) continue;
        const Rat value = expectation(family.member(name), x) - penalty.value;
        if (!any || value > best) best = value;
        any = true;
    }
    if (!any) fail("AllPenaltiesInfinite", "every scenario penalty is infinite");
    return best;
}

double entropic_rho(const RiskMeasureSpec& spec, const MeasureFamily& family,
                    const QsRandomVariable& x) {
    const Measure& ref = reference_member(spec, family);
    const double gamma = to_double(spec.gamma);
    // log-sum-exp against the largest exponent keeps the evaluation stable.
    double max_exponent = 0.0;
    bool first = true;
    for (int i = 0; i < family.space().size(); ++i) {
        if (ref.weight(i) == 0) continue;
        const double e = gamma * to_double(x.value(i));
        if (first || e > max_exponent) max_exponent = e;
        first = false;
    }
    double sum = 0.0;
    for (int i = 0; i < family.space().size(); ++i) {
        if (ref.weight(i) == 0) continue;
        sum += to_double(ref.weight(i)) * std::exp(gamma * to_double(x.value(i)) - max_exponent);
    }
    return (max_exponent + std::log(sum)) / gamma;
}

Rat acceptance_generated_rho(const RiskMeasureSpec& spec, const MeasureFamily& family,
                             const QsRandomVariable& x) {
    // rho(X) = min m such that X - m <= sum_j lambda_j W_j on non-polar atoms
    // with lambda in the simplex; m is the free variable 0.
    const int k = static_cast<int>(spec.generators.size());
    LinearProgram lp;
    lp.num_vars = k + 1;
    lp.maximize = false;
    lp.objective.assign(k + 1, Rat(0));
    lp.objective[0] = 1;
    lp.free_vars.assign(k + 1, 0);
    lp.free_vars[0] = 1;
    auto& normalized = lp.add(LpCmp::eq, Rat(1));
    for (int j = 0; j < k; ++j) normalized.coeffs[1 + j] = 1;
    for (int i = 0; i < family.space().size(); ++i) {
        if (family.atom_is_polar(i)) continue;
        auto& row = lp.add(LpCmp::ge, x.value(i));
        row.coeffs[0] = 1;
        for (int j = 0; j < k; ++j) row.coeffs[1 + j] = spec.generators[j].value(i);
    }
    const LpSolution solution = lp_solve(lp);
    if (solution.status != LpStatus::optimal)
        fail("LpInternal", "acceptance-set evaluation should be bounded and feasible");
    return solution.objective;
}

} // namespace

RiskValue rho(const RiskMeasureSpec& spec, const MeasureFamily& family,
              const QsRandomVariable& x) {
    require_same_space(family.space(), x.space());
    switch (spec.kind) {
        case RiskKind::worst_case:
            return RiskValue::from_rat(worst_case_rho(family, x));
        case RiskKind::scenario_penalty:
            return RiskValue::from_rat(scenario_penalty_rho(spec, family, x));
        case RiskKind::entropic:
            return RiskValue::from_double(entropic_rho(spec, family, x));
        case RiskKind::acceptance_generated:
            return RiskValue::from_rat(acceptance_generated_rho(spec, family, x));
    }
    fail("BadKind", "unknown risk measure kind");
}

std::vector<AcceptanceHalfSpace> acceptance_halfspaces(const RiskMeasureSpec& spec,
                                                       const MeasureFamily& family) {
    std::vector<AcceptanceHalfSpace> rows;
    switch (spec.kind) {
        case RiskKind::worst_case: {
            // X <= 0 atom by atom off the polar set.
            for (int i = 0; i < family.space().size(); ++i) {
                if (family.atom_is_polar(i)) continue;
                std::vector<Rat> coeffs(family.space().size(), Rat(0));
                coeffs[i] = 1;
                rows.push_back(AcceptanceHalfSpace{std::move(coeffs), Rat(0)});
            }
            return rows;
        }
        case RiskKind::scenario_penalty: {
            bool any = false;
            for (const auto& [name, penalty] : spec.penalties) {
                if (!family.has_member(name))
                    fail("UnknownMember", "penalty references unknown member \"" + name + "\"");
                if (penalty.infinite) continue;
                rows.push_back(
                    AcceptanceHalfSpace{family.member(name).weights(), penalty.value});
                any = true;
            }
            if (!any) fail("AllPenaltiesInfinite", "every scenario penalty is infinite");
            return rows;
        }
        case RiskKind::entropic:
        case RiskKind::acceptance_generated:
            fail("NotPolyhedral", "this risk measure kind has no half-space description");
    }
    fail("BadKind", "unknown risk measure kind");
}

ExtRiskValue conjugate(const RiskMeasureSpec& spec, const MeasureFamily& family,
                       const Measure& q) {
    require_same_space(family.space(), q.space());
    if (!q.is_probability())
        fail("NotProbability", "the dual argument must be a probability measure");
    for (int i = 0; i < family.space().size(); ++i) {
        if (family.atom_is_polar(i) && q.weight(i) > 0)
            fail("NotDominated", "dual measure charges the polar atom \"" +
                                     family.space().label(i) + "\"");
    }

    switch (spec.kind) {
        case RiskKind::worst_case:
        case RiskKind::scenario_penalty: {
            // sup { E_Q[X] : X accepted } over the half-space description of
            // the acceptance set; an unbounded value is the legal +infinity.
            const auto rows = acceptance_halfspaces(spec, family);
            const Event support = family.non_polar_atoms();
            LinearProgram lp;
            lp.num_vars = static_cast<int>(support.size());
            lp.maximize = true;
            lp.free_vars.assign(lp.num_vars, 1);
            lp.objective.resize(lp.num_vars);
            for (int j = 0; j < lp.num_vars; ++j) lp.objective[j] = q.weight(support[j]);
            for (const auto& half_space : rows) {
                auto& row = lp.add(LpCmp::le, half_space.bound);
                for (int j = 0; j < lp.num_vars; ++j)
                    row.coeffs[j] = half_space.coeffs[support[j]];
            }
            const LpSolution solution = lp_solve(lp);
            if (solution.status == LpStatus::unbounded)
                return ExtRiskValue{true, RiskValue::from_rat(Rat(0))};
            if (solution.status != LpStatus::optimal)
                fail("LpInternal", "conjugate LP should be feasible");
            return ExtRiskValue{false, RiskValue::from_rat(solution.objective)};
        }
        case RiskKind::entropic: {
            const Measure& ref = reference_member(spec, family);
            double entropy = 0.0;
            for (int i = 0; i < family.space().size(); ++i) {
                if (q.weight(i) == 0) continue;
                if (ref.weight(i) == 0) return ExtRiskValue{true, RiskValue::from_rat(Rat(0))};
                const double qi = to_double(q.weight(i));
                entropy += qi * std::log(qi / to_double(ref.weight(i)));
            }
            return ExtRiskValue{false, RiskValue::from_double(entropy / to_double(spec.gamma))};
        }
        case RiskKind::acceptance_generated: {
            // Down-closure of the convex hull: the supremum of a monotone
            // affine functional is attained at a generator.
            bool first = true;
            Rat best = 0;
            for (const auto& g : spec.generators) {
                const Rat value = expectation(q, g);
                if (first || value > best) best = value;
                first = false;
            }
            return ExtRiskValue{false, RiskValue::from_rat(best)};
        }
    }
    fail("BadKind", "unknown risk measure kind");
}

RepresentationReport verify_representation(const RiskMeasureSpec& spec,
                                           const MeasureFamily& family,
                                           const std::vector<QsRandomVariable>& probes,
                                           const std::vector<Measure>& dual_grid) {
    RepresentationReport report;
    report.grid_size = static_cast<int>(dual_grid.size());
    report.note =
        "finite atomic model: every dominated measure is supported, so the dual "
        "representations over dominated and over supported probabilities coincide";
    report.exact = spec.kind != RiskKind::entropic;
    report.max_gap_rational = 0;
    report.max_gap = 0.0;

    std::vector<ExtRiskValue> alphas;
    alphas.reserve(dual_grid.size());
    for (const auto& q : dual_grid) alphas.push_back(conjugate(spec, family, q));

    for (const auto& x : probes) {
        ++report.probes;
        const RiskValue rho_x = rho(spec, family, x);
        if (report.exact) {
            bool any = false;
            Rat best = 0;
            for (std::size_t i = 0; i < dual_grid.size(); ++i) {
                if (alphas[i].infinite) continue;
                const Rat value = expectation(dual_grid[i], x) - alphas[i].value.rational;
                if (!any || value > best) best = value;
                any = true;
            }
            if (!any) fail("EmptyDualGrid", "no dual grid point has a finite penalty");
            const Rat gap = rho_x.rational - best;
            if (gap < 0)
                fail("WeakDualityViolated", "negative duality gap " + format_rational(gap));
            report.max_gap_rational = std::max(report.max_gap_rational, gap);
            report.max_gap = std::max(report.max_gap, to_double(gap));
        } else {
            bool any = false;
            double best = 0.0;
            for (std::size_t i = 0; i < dual_grid.size(); ++i) {
                if (alphas[i].infinite) continue;
                const double value =
                    to_double(expectation(dual_grid[i], x)) - alphas[i].value.as_double();
                if (!any || value > best) best = value;
                any = true;
            }
            if (!any) fail("EmptyDualGrid", "no dual grid point has a finite penalty");
            const double gap = rho_x.as_double() - best;
            if (gap < -1e-9)
                fail("WeakDualityViolated", "negative duality gap " + std::to_string(gap));
            report.max_gap = std::max(report.max_gap, gap);
        }
    }
    return report;
}

bool verify_fatou_monotone(const RiskMeasureSpec& spec, const MeasureFamily& family,
                           const std::vector<QsRandomVariable>& chain) {
    if (chain.empty()) fail("EmptyInput", "the chain must be nonempty");
    bool nonincreasing = true;
    bool nondecreasing = true;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        const QsOrder order = qs_compare(family, chain[i], chain[i + 1]);
        if (order == QsOrder::incomparable) fail("NotMonotone", "chain elements are incomparable");
        if (order == QsOrder::leq) nonincreasing = false;
        if (order == QsOrder::geq) nondecreasing = false;
    }
    if (!nonincreasing && !nondecreasing) fail("NotMonotone", "chain changes direction");

    const QsRandomVariable& limit = chain.back();
    const double rho_limit = rho(spec, family, limit).as_double();
    const double tolerance = spec.kind == RiskKind::entropic ? 1e-9 : 0.0;
    for (const auto& element : chain) {
        if (qs_leq(family, limit, element)) {
            if (rho_limit > rho(spec, family, element).as_double() + tolerance) return false;
        }
    }
    return true;
}

std::vector<Measure> dirac_grid(const MeasureFamily& family) {
    std::vector<Measure> grid;
    for (int atom : family.non_polar_atoms())
        grid.push_back(dirac(family.space_ptr(), family.space().label(atom)));
    return grid;
}

std::vector<Measure> member_grid(const MeasureFamily& family) {
    std::vector<Measure> grid;
    for (const auto& [name, measure] : family.members()) grid.push_back(measure);
    return grid;
}

std::vector<Measure> simplex_grid(const MeasureFamily& family, long denominator, long cap) {
    if (denominator < 1) fail("BadGrid", "the grid denominator must be positive");
    const Event support = family.non_polar_atoms();
    std::vector<Measure> grid;
    std::vector<long> parts(support.size(), 0);
    // Enumerates all compositions of `denominator` into |support| parts.
    const std::function<void(std::size_t, long)> recurse = [&](std::size_t position,
                                                               long remaining) {
        if (static_cast<long>(grid.size()) > cap)
            fail("GridTooLarge", "simplex grid exceeds the configured cap");
        if (position + 1 == parts.size()) {
            parts[position] = remaining;
            std::vector<Rat> weights(family.space().size(), Rat(0));
            for (std::size_t j = 0; j < support.size(); ++j)
                weights[support[j]] = Rat(parts[j], denominator);
            grid.emplace_back(family.space_ptr(), std::move(weights));
            return;
        }
        for (long take = 0; take <= remaining; ++take) {
            parts[position] = take;
            recurse(position + 1, remaining - take);
        }
    };
    recurse(0, denominator);
    return grid;
}

} // namespace qsa
