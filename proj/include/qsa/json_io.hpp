#pragma once

#include <json.hpp>

#include "qsa/binomial.hpp"
#include "qsa/bipolar.hpp"
#include "qsa/classifier.hpp"
#include "qsa/measure.hpp"
#include "qsa/risk.hpp"

namespace qsa {

// Insertion-ordered JSON keeps every report byte-identical across runs.
using Json = nlohmann::ordered_json;

struct ParsedModel {
    SpacePtr space;
    MeasureFamily family;
};

/// Model file: { "atoms": [...], "measures": { name: { atom: "p/q" } } }.
/// Missing atoms weigh zero; serialization always lists every atom in space
/// order, so a canonical file round-trips byte-exactly.
ParsedModel parse_model(const Json& j);
Json serialize_model(const MeasureFamily& family);

/// Weights map { atom: "p/q" } for a not-necessarily-probability measure.
Measure parse_weights(const Json& j, const SpacePtr& space);
Json serialize_measure(const Measure& mu);

/// Random variable { atom: "p/q" }; missing atoms are zero.
QsRandomVariable parse_rv(const Json& j, const SpacePtr& space);
Json serialize_rv(const QsRandomVariable& x);

/// Event as an array of atom labels.
Event parse_event(const Json& j, const SampleSpace& space);
Json serialize_event(const SampleSpace& space, const Event& event);

/// Solid set { "generators": [ { atom: "p/q" } ] }.
SolidConvexSet parse_solid_set(const Json& j, const MeasureFamily& family);

/// Risk measure spec; see the kinds in risk.hpp. Penalties accept "inf".
RiskMeasureSpec parse_risk_spec(const Json& j, const SpacePtr& space);

/// Tree spec { "T": n, "grid": G, "bounds": {...} } with optional
/// "node_bounds" keyed by node path and optional "leaf_cap".
BinomialTreeSpec parse_tree_spec(const Json& j);

/// Payoff from JSON ({ "kind": "call", "strike": "p/q" } or
/// { "kind": "explicit", "values": { leaf: "p/q" } }).
Payoff parse_payoff(const Json& j);

/// Symbolic descriptor for the classifier.
SymbolicDescriptor parse_symbolic_descriptor(const Json& j);

Json serialize_classification(const ClassificationReport& report);

Json load_json_file(const std::string& path);

} // namespace qsa
