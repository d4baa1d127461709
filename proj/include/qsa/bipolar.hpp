#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsa/lp.hpp"
#include "qsa/measure.hpp"

namespace qsa {

/// Finitely generated solid convex subset of the positive cone:
/// C = { Y >= 0 : Y <= Z q.s. for some Z in the convex hull of the
/// generators }. Throws Error("NegativeGenerator") if a generator is
/// negative on a non-polar atom.
struct SolidConvexSet {
    SolidConvexSet(const MeasureFamily& family, std::vector<QsRandomVariable> generators);

    std::vector<QsRandomVariable> generators;
};

/// One-sided polar of C: nonnegative measures vanishing on polar atoms that
/// integrate every generator to at most 1. The supremum over the solid hull
/// of a convex hull is attained at the generators, so these constraints
/// describe the polar exactly.
struct PolarPolyhedron {
    SpacePtr space;
    Event polar_atoms;                     // mu must vanish here
    std::vector<std::vector<Rat>> rows;    // <g_i, mu> <= 1 per generator
};

PolarPolyhedron one_sided_polar(const MeasureFamily& family, const SolidConvexSet& set);

struct MembershipResult {
    bool member = false;
    /// Optimal value of sup <X, mu> over the polar when finite.
    std::optional<Rat> optimum;
    /// Maximizing measure (weights per atom) when the optimum is finite.
    std::optional<std::vector<Rat>> certificate;
    /// Atom index of an unbounded polar direction e_atom with <X, e_atom> > 0.
    std::optional<int> ray_atom;
};

/// Direct membership in C: is there lambda in the simplex with
/// X <= sum lambda_j g_j on every non-polar atom? Exact LP feasibility.
bool solid_hull_member(const MeasureFamily& family, const SolidConvexSet& set,
                       const QsRandomVariable& x);

/// Membership of X in the bipolar of C: sup over the polar of <X, mu> is at
/// most 1. Directions on which every generator vanishes make the polar
/// unbounded; X must vanish there, which is handled by ray analysis before
/// the LP. Throws Error("NegativeInput") if X is negative on a non-polar
/// atom.
MembershipResult bipolar_membership(const MeasureFamily& family, const SolidConvexSet& set,
                                    const QsRandomVariable& x);

struct BipolarDisagreement {
    QsRandomVariable probe;
    bool direct_member;
    bool bipolar_member;
};

struct BipolarReport {
    int probes_checked = 0;
    std::vector<BipolarDisagreement> disagreements;
    std::string note;
};

/// Verifies C = bipolar(C) by membership agreement on the generators, their
/// (1 +- epsilon) scalings, axis truncations of the generators, and the
/// caller's probes.
BipolarReport check_bipolar_equivalence(const MeasureFamily& family, const SolidConvexSet& set,
                                        const std::vector<QsRandomVariable>& probes,
                                        const Rat& epsilon = Rat(1, 4));

} // namespace qsa
