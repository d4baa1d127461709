#include "qsa/classifier.hpp"

#include <algorithm>
#include <sstream>

#include "qsa/error.hpp"
#include "qsa/support.hpp"

namespace qsa {

const char* to_string(Tri value) {
    switch (value) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        case Tri::undecidable: return "undecidable";
    }
    return "?";
}

ModelDescriptor ModelDescriptor::from_family(MeasureFamily family) {
    ModelDescriptor d;
    d.explicit_family = std::move(family);
    return d;
}

ModelDescriptor ModelDescriptor::from_symbolic(SymbolicDescriptor symbolic) {
    ModelDescriptor d;
    d.symbolic = std::move(symbolic);
    return d;
}

const Flag& ClassificationReport::flag(const std::string& name) const {
    for (const auto& [n, f] : flags) {
        if (n == name) return f;
    }
    fail("UnknownFlag", "no flag named \"" + name + "\"");
}

namespace {

const std::vector<std::string> kFlagNames = {
    "dominated",        "super_dedekind", "class_S",
    "sca_equals_ca",    "dedekind_complete", "kreps_yan",
    "aggregation_AG",   "fatou_F1_iff_F2",   "L_infty_is_dual"};

// Citations state the mathematical facts each rule applies.
const char* kCiteCountable =
    "a finite or countable family is dominated by a countable convex combination of its members";
const char* kCiteDisjointUncountable =
    "an uncountable family of supported members with pairwise disjoint supports admits no "
    "dominating probability measure";
const char* kCiteR1 =
    "domination, super Dedekind completeness, supportedness of every dominated measure together "
    "with the countable sup property, and existence of a strictly positive linear functional are "
    "equivalent";
const char* kCiteR2 =
    "the Kreps-Yan property of an ideal between the bounded and the measurable classes holds "
    "exactly when the family is dominated";
const char* kCiteR3 =
    "class (S): some equivalent family consists entirely of supported measures";
const char* kCiteR3Dominated =
    "under a dominating probability every member is supported by the positivity set of its "
    "density, so a dominated family is of class (S)";
const char* kCiteR5 =
    "essential suprema and aggregation of consistent families are available exactly when the "
    "family is of class (S) and the bounded classes are Dedekind complete; the bounded classes "
    "are then the dual space of the supported measures";
const char* kCiteR6 =
    "given Dedekind completeness, the Fatou property is equivalent to the dual representation "
    "over dominated probabilities exactly when every dominated measure is supported";
const char* kCiteR7 =
    "a perfect set of supported members with pairwise disjoint supports yields a diffuse "
    "mixture that is dominated but has no order support";
const char* kCiteR8 =
    "no construction in ZFC can combine Dedekind completeness with failure of class (S); such an "
    "example would solve Banach's measure problem";
const char* kCiteProduct =
    "one-probability slices over a parameter set with onto embedding make the bounded classes "
    "lattice isomorphic to a product of classical spaces, which is Dedekind complete";
const char* kCiteExplicit =
    "finite explicit family: the member sum is an equivalent dominating measure and exhaustion "
    "over the members yields a disjoint supported alternative; verified by direct computation";

struct Engine {
    std::map<std::string, Flag> flags;

    Tri get(const std::string& name) const {
        const auto it = flags.find(name);
        return it == flags.end() ? Tri::undecidable : it->second.value;
    }

    void set(const std::string& name, Tri value, const std::string& rule,
             const std::string& citation, const std::string& annotation = "") {
        if (value == Tri::undecidable) return;
        auto& flag = flags[name];
        if (flag.value != Tri::undecidable) {
            if (flag.value != value)
                fail("InconsistentFlags", "rule " + rule + " decides " + name + " = " +
                                              to_string(value) + " but rule " + flag.rule +
                                              " already decided " + to_string(flag.value));
            return; // first decision wins, keeps the earliest citation
        }
        flag = Flag{value, rule, citation, annotation};
    }
};

Tri tri_and(std::initializer_list<Tri> values) {
    bool all_yes = true;
    for (Tri v : values) {
        if (v == Tri::no) return Tri::no;
        if (v != Tri::yes) all_yes = false;
    }
    return all_yes ? Tri::yes : Tri::undecidable;
}

ClassificationReport finish(Engine& engine, std::string provenance, std::string notes) {
    // Downstream flags are conjunctions of upstream ones.
    engine.set("aggregation_AG",
               tri_and({engine.get("class_S"), engine.get("dedekind_complete")}), "R5", kCiteR5);
    engine.set("L_infty_is_dual",
               tri_and({engine.get("class_S"), engine.get("dedekind_complete")}), "R5", kCiteR5);
    engine.set("fatou_F1_iff_F2",
               tri_and({engine.get("class_S"), engine.get("dedekind_complete"),
                        engine.get("sca_equals_ca")}),
               "R6", kCiteR6);

    ClassificationReport report;
    report.provenance = std::move(provenance);
    report.notes = std::move(notes);
    for (const auto& name : kFlagNames) {
        const auto it = engine.flags.find(name);
        report.flags.emplace_back(name, it == engine.flags.end() ? Flag{} : it->second);
    }
    return report;
}

ClassificationReport classify_symbolic(const SymbolicDescriptor& d) {
    if (d.pairwise_disjoint_supports && !d.all_members_supported)
        fail("InconsistentFlags",
             "pairwise disjoint supports asserted for members that are not all supported");
    if (d.admits_perfect_disjoint_subfamily && d.cardinality.kind != Cardinality::Kind::continuum)
        fail("InconsistentFlags", "a perfect disjoint subfamily forces continuum cardinality");
    if (d.cardinality.kind == Cardinality::Kind::finite && d.cardinality.count < 1)
        fail("InconsistentFlags", "a family has at least one member");

    Engine engine;

    // Assertions that decide flags directly.
    if (d.cardinality.kind != Cardinality::Kind::continuum)
        engine.set("dominated", Tri::yes, "R1", kCiteCountable);
    if (d.cardinality.kind == Cardinality::Kind::continuum && d.pairwise_disjoint_supports)
        engine.set("dominated", Tri::no, "R1", kCiteDisjointUncountable);
    if (d.all_members_supported)
        engine.set("class_S", Tri::yes, "R3", kCiteR3,
                   "the family is a supported alternative to itself");
    if (d.product_structure) engine.set("dedekind_complete", Tri::yes, "R5", kCiteProduct);
    if (d.admits_perfect_disjoint_subfamily) engine.set("sca_equals_ca", Tri::no, "R7", kCiteR7);

    // Propagation of the equivalences, run to a fixpoint.
    for (int round = 0; round < 4; ++round) {
        if (engine.get("sca_equals_ca") == Tri::no)
            engine.set("dominated", Tri::no, "R1", kCiteR1);
        switch (engine.get("dominated")) {
            case Tri::yes:
                engine.set("super_dedekind", Tri::yes, "R1", kCiteR1);
                engine.set("sca_equals_ca", Tri::yes, "R1", kCiteR1);
                engine.set("kreps_yan", Tri::yes, "R2", kCiteR2);
                engine.set("class_S", Tri::yes, "R3", kCiteR3Dominated);
                engine.set("dedekind_complete", Tri::yes, "R1", kCiteR1);
                break;
            case Tri::no:
                engine.set("super_dedekind", Tri::no, "R1", kCiteR1);
                engine.set("kreps_yan", Tri::no, "R2", kCiteR2);
                break;
            case Tri::undecidable: break;
        }
        switch (engine.get("super_dedekind")) {
            case Tri::yes: engine.set("dominated", Tri::yes, "R1", kCiteR1); break;
            case Tri::no: engine.set("dominated", Tri::no, "R1", kCiteR1); break;
            case Tri::undecidable: break;
        }
        if (engine.get("kreps_yan") == Tri::yes) engine.set("dominated", Tri::yes, "R2", kCiteR2);
        if (engine.get("kreps_yan") == Tri::no) engine.set("dominated", Tri::no, "R2", kCiteR2);
    }

    // The ZFC elevation is annotated explicitly, never silent.
    if (engine.get("dedekind_complete") == Tri::yes && engine.get("class_S") == Tri::undecidable &&
        d.within_continuum) {
        engine.set("class_S", Tri::yes, "R8", kCiteR8,
                   "not refutable in ZFC given Dedekind completeness");
    }

    std::ostringstream provenance;
    provenance << "symbolic descriptor: cardinality=";
    switch (d.cardinality.kind) {
        case Cardinality::Kind::finite: provenance << "finite(" << d.cardinality.count << ")"; break;
        case Cardinality::Kind::countably_infinite: provenance << "countably_infinite"; break;
        case Cardinality::Kind::continuum: provenance << "continuum"; break;
    }
    provenance << ", pairwise_disjoint_supports=" << (d.pairwise_disjoint_supports ? "true" : "false")
               << ", all_members_supported=" << (d.all_members_supported ? "true" : "false")
               << ", admits_perfect_disjoint_subfamily="
               << (d.admits_perfect_disjoint_subfamily ? "true" : "false")
               << ", product_structure=" << (d.product_structure ? "true" : "false")
               << ", within_continuum=" << (d.within_continuum ? "true" : "false");
    if (d.hahn_property)
        provenance << ", hahn_property=" << (*d.hahn_property ? "true" : "false")
                   << " (recorded, no rule consumes it)";
    return finish(engine, provenance.str(), d.notes);
}

ClassificationReport classify_explicit(const MeasureFamily& family) {
    // Direct computation instead of trusted assertions: the member sum
    // dominates with the right null structure, and the exhaustion yields a
    // disjoint supported alternative.
    const Measure sum = sum_measure(family);
    for (int i = 0; i < family.space().size(); ++i) {
        if ((sum.weight(i) == 0) != family.atom_is_polar(i))
            fail("InternalCheck", "member sum does not reproduce the polar atoms");
    }
    const DisjointAlternative alternative = disjoint_supported_alternative(family);
    if (!equivalent(family, alternative.family))
        fail("InternalCheck", "exhaustion output is not equivalent to the family");
    const auto& members = alternative.family.members();
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            if (!measure_meet(members[a].second, members[b].second).is_zero())
                fail("InternalCheck", "exhaustion output is not pairwise disjoint");
        }
    }

    Engine engine;
    engine.set("dominated", Tri::yes, "R1", kCiteExplicit);
    engine.set("super_dedekind", Tri::yes, "R1", kCiteR1);
    engine.set("sca_equals_ca", Tri::yes, "R1", kCiteR1);
    engine.set("kreps_yan", Tri::yes, "R2", kCiteR2);
    engine.set("class_S", Tri::yes, "R3", kCiteExplicit);
    engine.set("dedekind_complete", Tri::yes, "R1", kCiteR1);

    std::ostringstream provenance;
    provenance << "explicit family: " << family.size() << " member(s) on "
               << family.space().size() << " atom(s)";
    return finish(engine, provenance.str(), "");
}

} // namespace

ClassificationReport classify(const ModelDescriptor& descriptor) {
    if (descriptor.explicit_family && descriptor.symbolic)
        fail("InconsistentFlags", "a descriptor is either explicit or symbolic, not both");
    if (descriptor.explicit_family) return classify_explicit(*descriptor.explicit_family);
    if (descriptor.symbolic) return classify_symbolic(*descriptor.symbolic);
    fail("InconsistentFlags", "empty descriptor");
}

std::string explain(const ClassificationReport& report) {
    std::ostringstream out;
    out << report.provenance << "\n";
    for (const auto& [name, flag] : report.flags) {
        out << "  " << name << " = " << to_string(flag.value);
        if (flag.value != Tri::undecidable) {
            out << "  [" << flag.rule << "] " << flag.citation;
            if (!flag.annotation.empty()) out << " (" << flag.annotation << ")";
        }
        out << "\n";
    }
    out << "  bipolar identities [R4]: the identity over supported measures holds exactly for "
           "class (S) families; the identity over all dominated measures holds exactly when "
           "every dominated measure is supported\n";
    if (!report.notes.empty()) out << "  notes: " << report.notes << "\n";
    return out.str();
}

namespace {

SymbolicDescriptor symbolic(Cardinality::Kind kind, bool disjoint, bool supported, bool perfect,
                            bool product, std::string notes) {
    SymbolicDescriptor d;
    d.cardinality.kind = kind;
    d.pairwise_disjoint_supports = disjoint;
    d.all_members_supported = supported;
    d.admits_perfect_disjoint_subfamily = perfect;
    d.product_structure = product;
    d.notes = std::move(notes);
    return d;
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "dominated_singleton", "dirac_unit_interval", "volatility_band", "product_theta",
        "innovation",          "typical_paths",       "robust_binomial"};
    return names;
}

ModelDescriptor preset(const std::string& name) {
    if (name == "dominated_singleton") {
        SymbolicDescriptor d = symbolic(Cardinality::Kind::finite, true, true, false, false,
                                        "a single probability measure; pure risk");
        d.cardinality.count = 1;
        return ModelDescriptor::from_symbolic(d);
    }
    if (name == "dirac_unit_interval") {
        return ModelDescriptor::from_symbolic(symbolic(
            Cardinality::Kind::continuum, true, true, true, false,
            "all Dirac measures on the unit interval with its Borel structure; the quasi-sure "
            "order is the pointwise order, and the uniform distribution is dominated but has "
            "no order support"));
    }
    if (name == "volatility_band") {
        return ModelDescriptor::from_symbolic(symbolic(
            Cardinality::Kind::continuum, true, true, true, false,
            "laws of constant-volatility diffusions across a band of volatilities; mixture "
            "functionals weighting the band diffusely are not order semicontinuous"));
    }
    if (name == "product_theta") {
        return ModelDescriptor::from_symbolic(symbolic(
            Cardinality::Kind::continuum, true, true, true, true,
            "one copy of a base probability per parameter value, each living on its own slice "
            "of a product state space; the slice embedding is onto"));
    }
    if (name == "innovation") {
        return ModelDescriptor::from_symbolic(symbolic(
            Cardinality::Kind::continuum, true, true, true, false,
            "fixed marginal on the known states paired with one novel state per member"));
    }
    if (name == "typical_paths") {
        return ModelDescriptor::from_symbolic(symbolic(
            Cardinality::Kind::continuum, true, true, true, false,
            "one Dirac measure per state of the prediction set"));
    }
    if (name == "robust_binomial") {
        return ModelDescriptor::from_symbolic(symbolic(
            Cardinality::Kind::continuum, false, true, true, false,
            "products of path-dependent binomial kernels constrained to node-level boxes; each "
            "product kernel is supported, so the family is a supported alternative to itself; a "
            "strictly parameterized slice of the box yields a perfect pairwise disjoint "
            "subfamily"));
    }
    fail("UnknownPreset", "no preset named \"" + name + "\"");
}

} // namespace qsa
