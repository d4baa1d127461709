#include "qsa/bipolar.hpp"

#include <algorithm>

#include "qsa/error.hpp"

namespace qsa {

namespace {

void require_nonnegative_qs(const MeasureFamily& family, const QsRandomVariable& x,
                            const char* code) {
    require_same_space(family.space(), x.space());
    for (int i = 0; i < family.space().size(); ++i) {
        if (!family.atom_is_polar(i) && x.value(i) < 0)
            fail(code, "negative value at the non-polar atom \"" + family.space().label(i) + "\"");
    }
}

} // namespace

SolidConvexSet::SolidConvexSet(const MeasureFamily& family,
                               std::vector<QsRandomVariable> gens)
    : generators(std::move(gens)) {
    if (generators.empty()) fail("EmptyGenerators", "a solid convex set needs a generator");
    for (const auto& g : generators) require_nonnegative_qs(family, g, "NegativeGenerator");
}

PolarPolyhedron one_sided_polar(const MeasureFamily& family, const SolidConvexSet& set) {
    PolarPolyhedron polar;
    polar.space = family.space_ptr();
    polar.polar_atoms = family.polar_atoms();
    for (const auto& g : set.generators) polar.rows.push_back(g.values());
    return polar;
}

bool solid_hull_member(const MeasureFamily& family, const SolidConvexSet& set,
                       const QsRandomVariable& x) {
    require_nonnegative_qs(family, x, "NegativeInput");
    // Feasibility: lambda >= 0, sum lambda = 1, sum_j lambda_j g_j(w) >= X(w)
    // for every non-polar atom w.
    const int k = static_cast<int>(set.generators.size());
    LinearProgram lp;
    lp.num_vars = k;
    lp.maximize = true;
    lp.objective.assign(k, Rat(0));
    auto& normalized = lp.add(LpCmp::eq, Rat(1));
    for (int j = 0; j < k; ++j) normalized.coeffs[j] = 1;
    for (int i = 0; i < family.space().size(); ++i) {
        if (family.atom_is_polar(i)) continue;
        auto& row = lp.add(LpCmp::ge, x.value(i));
        for (int j = 0; j < k; ++j) row.coeffs[j] = set.generators[j].value(i);
    }
    return lp_solve(lp).status == LpStatus::optimal;
}

MembershipResult bipolar_membership(const MeasureFamily& family, const SolidConvexSet& set,
                                    const QsRandomVariable& x) {
    require_nonnegative_qs(family, x, "NegativeInput");
    const PolarPolyhedron polar = one_sided_polar(family, set);
    const int n = family.space().size();

    // Ray analysis: on a non-polar atom where every generator vanishes, the
    // polar is unbounded in the coordinate direction. X belongs to the
    // bipolar only if it vanishes on all such atoms.
    std::vector<char> ray_atom(n, 0);
    for (int i = 0; i < n; ++i) {
        if (family.atom_is_polar(i)) continue;
        bool all_zero = true;
        for (const auto& row : polar.rows) all_zero = all_zero && row[i] == 0;
        if (all_zero) {
            ray_atom[i] = 1;
            if (x.value(i) > 0) {
                MembershipResult result;
                result.member = false;
                result.ray_atom = i;
                return result;
            }
        }
    }

    // Remaining coordinates form a bounded polytope: maximize <X, mu>.
    std::vector<int> cols;
    for (int i = 0; i < n; ++i) {
        if (!family.atom_is_polar(i) && !ray_atom[i]) cols.push_back(i);
    }
    MembershipResult result;
    if (cols.empty()) {
        result.member = true;
        result.optimum = Rat(0);
        result.certificate = std::vector<Rat>(n, Rat(0));
        return result;
    }
    LinearProgram lp;
    lp.num_vars = static_cast<int>(cols.size());
    lp.maximize = true;
    lp.objective.resize(lp.num_vars);
    for (int j = 0; j < lp.num_vars; ++j) lp.objective[j] = x.value(cols[j]);
    for (const auto& row : polar.rows) {
        auto& constraint = lp.add(LpCmp::le, Rat(1));
        for (int j = 0; j < lp.num_vars; ++j) constraint.coeffs[j] = row[cols[j]];
    }
    const LpSolution solution = lp_solve(lp);
    if (solution.status != LpStatus::optimal)
        fail("LpInternal", "polar maximization should be bounded and feasible");
    result.optimum = solution.objective;
    result.member = solution.objective <= 1;
    std::vector<Rat> mu(n, Rat(0));
    for (int j = 0; j < lp.num_vars; ++j) mu[cols[j]] = solution.x[j];
    result.certificate = std::move(mu);
    return result;
}

BipolarReport check_bipolar_equivalence(const MeasureFamily& family, const SolidConvexSet& set,
                                        const std::vector<QsRandomVariable>& probes,
                                        const Rat& epsilon) {
    BipolarReport report;
    report.note =
        "finite atomic model: every dominated measure is supported, so the polar taken over "
        "supported measures coincides with the polar over all dominated measures";

    std::vector<QsRandomVariable> all;
    for (const auto& g : set.generators) {
        all.push_back(g);
        all.push_back(rv_scale(g, Rat(1) + epsilon));
        all.push_back(rv_scale(g, Rat(1) - epsilon));
        // Axis truncations: zero the generator on one atom at a time; these
        // stay below the generator, hence inside the solid hull.
        for (int i = 0; i < family.space().size(); ++i) {
            std::vector<Rat> values = g.values();
            if (values[i] == 0) continue;
            values[i] = 0;
            all.emplace_back(g.space_ptr(), std::move(values));
        }
    }
    for (const auto& p : probes) all.push_back(p);

    for (const auto& probe : all) {
        const bool direct = solid_hull_member(family, set, probe);
        const bool dual = bipolar_membership(family, set, probe).member;
        ++report.probes_checked;
        if (direct != dual) report.disagreements.push_back({probe, direct, dual});
    }
    return report;
}

} // namespace qsa
