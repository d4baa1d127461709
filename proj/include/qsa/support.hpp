#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsa/measure.hpp"

namespace qsa {

/// Order support of a measure relative to a family: an event S with
/// mu(S^c) = 0 such that every mu-null part of S is polar. The canonical
/// representative is the strict positivity set of mu.
struct OrderSupport {
    Event event;
    std::string measure_name;
};

/// Canonical support of a dominated measure. On finite atomic spaces every
/// dominated measure is supported. Throws Error("NotDominated") if mu
/// charges a polar atom.
OrderSupport order_support(const MeasureFamily& family, const Measure& mu,
                           const std::string& name = "");

struct SupportCheck {
    bool ok = true;
    // 'a': mu(S^c) != 0, witness is S^c. 'b': a mu-null, non-polar part of S,
    // witness is the offending event.
    char condition = ' ';
    Event witness;
};

/// Checks the two support conditions for a candidate event S. The default
/// fast path works atom by atom; the exhaustive mode re-checks condition (b)
/// over every subset of the space and is capped at 12 atoms.
SupportCheck verify_support(const MeasureFamily& family, const Measure& mu, const Event& s,
                            bool exhaustive = false);

/// Supported alternative with pairwise disjoint members, equivalent to its
/// source family.
struct DisjointAlternative {
    MeasureFamily family;
    std::map<std::string, Event> supports;
};

/// Exhaustion in member order: each member is restricted to the atoms not yet
/// covered, dropped if nothing remains, renormalized otherwise. Deterministic
/// given the input order.
DisjointAlternative disjoint_supported_alternative(const MeasureFamily& family);

/// Least upper bound in the quasi-sure order: atomwise maximum over non-polar
/// atoms, 0 on polar atoms.
QsRandomVariable ess_sup(const MeasureFamily& family,
                         const std::vector<QsRandomVariable>& xs);

/// Streaming variant: consumes variables from `next` until it returns
/// nullopt. If the running supremum exceeds `bound` on a non-polar atom,
/// throws Error("Unbounded").
QsRandomVariable ess_sup_stream(const MeasureFamily& family,
                                const std::function<std::optional<QsRandomVariable>()>& next,
                                const Rat& bound);

/// For X >= 0 q.s., tests whether sup over members of X * 1_{S(Q)} equals X
/// quasi-surely. Throws Error("NegativeInput") if X is negative on a
/// non-polar atom.
bool sup_restriction_identity(const MeasureFamily& family,
                              const DisjointAlternative& alternative,
                              const QsRandomVariable& x);

struct ConsistencyViolation {
    std::string member_a;
    std::string member_b;
    int atom;
};

/// Pairwise consistency of an assignment member -> random variable: for each
/// pair, the variables must agree on every atom charged by both members.
/// Throws Error("IncompleteAssignment") if some member has no variable.
std::vector<ConsistencyViolation> check_consistency(
    const MeasureFamily& family, const std::map<std::string, QsRandomVariable>& assignment);

/// Aggregator X = sum over members of X^Q * 1_{S(Q)}, 0 off the support
/// union; satisfies Q(X = X^Q) = 1 for every member. Throws
/// Error("Inconsistent") with the violation list if the assignment is not
/// consistent.
QsRandomVariable aggregate(const DisjointAlternative& alternative,
                           const std::map<std::string, QsRandomVariable>& assignment);

} // namespace qsa
