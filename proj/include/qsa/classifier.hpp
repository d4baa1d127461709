#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsa/measure.hpp"

namespace qsa {

enum class Tri { yes, no, undecidable };
const char* to_string(Tri value);

struct Flag {
    Tri value = Tri::undecidable;
    std::string rule;       // rule id, e.g. "R2"
    std::string citation;   // the mathematical fact the rule applies
    std::string annotation; // extra qualification, e.g. the ZFC elevation
};

/// Cardinality of the family; uncountability is not representable in
/// explicit data, so symbolic descriptors carry it as an assertion.
struct Cardinality {
    enum class Kind { finite, countably_infinite, continuum };
    Kind kind = Kind::finite;
    long count = 1; // meaningful for finite
};

/// Caller-asserted structural flags for families that cannot be materialized.
/// The flags are trusted inputs; the classifier contributes the propagation.
struct SymbolicDescriptor {
    Cardinality cardinality;
    bool pairwise_disjoint_supports = false;
    bool all_members_supported = false;
    bool admits_perfect_disjoint_subfamily = false;
    bool product_structure = false; // disjoint slices with onto embedding
    bool within_continuum = true;   // cardinality at most that of the reals
    std::optional<bool> hahn_property; // recorded only; no rule consumes it
    std::string notes;
};

struct ModelDescriptor {
    std::optional<MeasureFamily> explicit_family;
    std::optional<SymbolicDescriptor> symbolic;

    static ModelDescriptor from_family(MeasureFamily family);
    static ModelDescriptor from_symbolic(SymbolicDescriptor symbolic);
};

struct ClassificationReport {
    // Fixed order: dominated, super_dedekind, class_S, sca_equals_ca,
    // dedekind_complete, kreps_yan, aggregation_AG, fatou_F1_iff_F2,
    // L_infty_is_dual.
    std::vector<std::pair<std::string, Flag>> flags;
    std::string provenance;
    std::string notes;

    const Flag& flag(const std::string& name) const;
};

/// Rule engine mapping a descriptor to the equivalence-table conclusions.
/// Explicit finite families collapse to all-yes, verified by direct
/// computation. Throws Error("InconsistentFlags") on contradictory
/// assertions.
ClassificationReport classify(const ModelDescriptor& descriptor);

/// Human-readable derivation: one line per flag with rule id and citation.
std::string explain(const ClassificationReport& report);

const std::vector<std::string>& preset_names();
ModelDescriptor preset(const std::string& name);

} // namespace qsa
