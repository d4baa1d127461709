#include "qsa/support.hpp"

#include <algorithm>
#include <sstream>

#include "qsa/error.hpp"

namespace qsa {

OrderSupport order_support(const MeasureFamily& family, const Measure& mu,
                           const std::string& name) {
    require_same_space(family.space(), mu.space());
    for (int i = 0; i < family.space().size(); ++i) {
        if (family.atom_is_polar(i) && mu.weight(i) > 0)
            fail("NotDominated", "measure charges the polar atom \"" +
                                     family.space().label(i) + "\"");
    }
    return OrderSupport{mu.positivity_set(), name};
}

SupportCheck verify_support(const MeasureFamily& family, const Measure& mu, const Event& s,
                            bool exhaustive) {
    require_same_space(family.space(), mu.space());
    const Event complement = event_complement(family.space(), s);
    if (mu.mass(complement) != 0) return SupportCheck{false, 'a', complement};
    // Condition (b), atom level: a mu-null atom inside S must be polar.
    for (int atom : s) {
        if (mu.weight(atom) == 0 && !family.atom_is_polar(atom))
            return SupportCheck{false, 'b', Event{atom}};
    }
    if (exhaustive) {
        const int n = family.space().size();
        if (n > 12) fail("SpaceTooLarge", "exhaustive support check is capped at 12 atoms");
        std::vector<char> in_s(n, 0);
        for (int atom : s) in_s[atom] = 1;
        for (unsigned long subset = 0; subset < (1ul << n); ++subset) {
            Event meet;
            for (int i = 0; i < n; ++i) {
                if ((subset >> i) & 1u && in_s[i]) meet.push_back(i);
            }
            if (mu.mass(meet) == 0 && !is_polar(family, meet))
                return SupportCheck{false, 'b', meet};
        }
    }
    return SupportCheck{};
}

DisjointAlternative disjoint_supported_alternative(const MeasureFamily& family) {
    std::vector<char> covered(family.space().size(), 0);
    std::vector<std::pair<std::string, Measure>> members;
    std::map<std::string, Event> supports;
    for (const auto& [name, measure] : family.members()) {
        Event remaining;
        for (int atom : measure.positivity_set()) {
            if (!covered[atom]) remaining.push_back(atom);
        }
        if (remaining.empty()) continue;
        for (int atom : remaining) covered[atom] = 1;
        members.emplace_back(name, normalize(restrict_to(measure, remaining)));
        supports.emplace(name, remaining);
    }
    // The exhaustion always keeps the first member, so the family is nonempty.
    MeasureFamily alternative(family.space_ptr(), std::move(members));
    return DisjointAlternative{std::move(alternative), std::move(supports)};
}

QsRandomVariable ess_sup(const MeasureFamily& family,
                         const std::vector<QsRandomVariable>& xs) {
    if (xs.empty()) fail("EmptyInput", "ess_sup needs at least one random variable");
    for (const auto& x : xs) require_same_space(family.space(), x.space());
    std::vector<Rat> values(family.space().size(), Rat(0));
    for (int i = 0; i < family.space().size(); ++i) {
        if (family.atom_is_polar(i)) continue;
        values[i] = xs.front().value(i);
        for (const auto& x : xs) values[i] = std::max(values[i], x.value(i));
    }
    return QsRandomVariable(family.space_ptr(), std::move(values));
}

QsRandomVariable ess_sup_stream(const MeasureFamily& family,
                                const std::function<std::optional<QsRandomVariable>()>& next,
                                const Rat& bound) {
    std::vector<Rat> values(family.space().size(), Rat(0));
    bool first = true;
    while (auto x = next()) {
        require_same_space(family.space(), x->space());
        for (int i = 0; i < family.space().size(); ++i) {
            if (family.atom_is_polar(i)) continue;
            values[i] = first ? x->value(i) : std::max(values[i], x->value(i));
            if (values[i] > bound)
                fail("Unbounded", "running supremum exceeds the bound at atom \"" +
                                      family.space().label(i) + "\"");
        }
        first = false;
    }
    if (first) fail("EmptyInput", "ess_sup needs at least one random variable");
    return QsRandomVariable(family.space_ptr(), std::move(values));
}

bool sup_restriction_identity(const MeasureFamily& family,
                              const DisjointAlternative& alternative,
                              const QsRandomVariable& x) {
    require_same_space(family.space(), x.space());
    for (int i = 0; i < family.space().size(); ++i) {
        if (!family.atom_is_polar(i) && x.value(i) < 0)
            fail("NegativeInput", "X is negative at the non-polar atom \"" +
                                      family.space().label(i) + "\"");
    }
    std::vector<QsRandomVariable> restrictions;
    restrictions.reserve(alternative.supports.size());
    for (const auto& [name, support] : alternative.supports) {
        restrictions.push_back(
            rv_multiply(x, indicator(x.space_ptr(), support)));
    }
    return qs_equal(family, ess_sup(family, restrictions), x);
}

std::vector<ConsistencyViolation> check_consistency(
    const MeasureFamily& family, const std::map<std::string, QsRandomVariable>& assignment) {
    for (const auto& [name, measure] : family.members()) {
        if (assignment.find(name) == assignment.end())
            fail("IncompleteAssignment", "no random variable assigned to member \"" + name + "\"");
    }
    std::vector<ConsistencyViolation> violations;
    const auto& members = family.members();
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const auto& xa = assignment.at(members[a].first);
            const auto& xb = assignment.at(members[b].first);
            require_same_space(family.space(), xa.space());
            require_same_space(family.space(), xb.space());
            for (int i = 0; i < family.space().size(); ++i) {
                if (members[a].second.weight(i) > 0 && members[b].second.weight(i) > 0 &&
                    xa.value(i) != xb.value(i)) {
                    violations.push_back({members[a].first, members[b].first, i});
                }
            }
        }
    }
    return violations;
}

QsRandomVariable aggregate(const DisjointAlternative& alternative,
                           const std::map<std::string, QsRandomVariable>& assignment) {
    const auto violations = check_consistency(alternative.family, assignment);
    if (!violations.empty()) {
        std::ostringstream detail;
        detail << violations.size() << " pairwise violation(s), first at atom \""
               << alternative.family.space().label(violations.front().atom) << "\" between \""
               << violations.front().member_a << "\" and \"" << violations.front().member_b
               << "\"";
        fail("Inconsistent", detail.str());
    }
    std::vector<Rat> values(alternative.family.space().size(), Rat(0));
    for (const auto& [name, support] : alternative.supports) {
        const auto& x = assignment.at(name);
        require_same_space(alternative.family.space(), x.space());
        for (int atom : support) values[atom] = x.value(atom);
    }
    return QsRandomVariable(alternative.family.space_ptr(), std::move(values));
}

} // namespace qsa
