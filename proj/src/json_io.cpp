#include "qsa/json_io.hpp"

#include <fstream>

#include "qsa/error.hpp"

namespace qsa {

namespace {

void require_object(const Json& j, const char* what) {
    if (!j.is_object()) fail("SchemaError", std::string(what) + " must be a JSON object");
}

Rat rat_field(const Json& j, const char* what) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (!j.is_string()) fail("SchemaError", std::string(what) + " must be a \"p/q\" string");
    return parse_rational(j.get<std::string>());
}

} // namespace

ParsedModel parse_model(const Json& j) {
    require_object(j, "a model");
    if (!j.contains("atoms") || !j["atoms"].is_array())
        fail("SchemaError", "a model needs an \"atoms\" array");
    std::vector<std::string> atoms;
    for (const auto& a : j["atoms"]) {
        if (!a.is_string()) fail("SchemaError", "atom labels must be strings");
        atoms.push_back(a.get<std::string>());
    }
    SpacePtr space = make_space(std::move(atoms));

    if (!j.contains("measures") || !j["measures"].is_object())
        fail("SchemaError", "a model needs a \"measures\" object");
    std::vector<std::pair<std::string, Measure>> members;
    for (const auto& [name, weights] : j["measures"].items())
        members.emplace_back(name, parse_weights(weights, space));
    return ParsedModel{space, MeasureFamily(space, std::move(members))};
}

Json serialize_model(const MeasureFamily& family) {
    Json j;
    j["atoms"] = family.space().atoms();
    Json measures = Json::object();
    for (const auto& [name, measure] : family.members()) measures[name] = serialize_measure(measure);
    j["measures"] = std::move(measures);
    return j;
}

Measure parse_weights(const Json& j, const SpacePtr& space) {
    require_object(j, "a weights map");
    std::vector<Rat> weights(space->size(), Rat(0));
    for (const auto& [atom, value] : j.items())
        weights[space->index(atom)] = rat_field(value, "a weight");
    return Measure(space, std::move(weights));
}

Json serialize_measure(const Measure& mu) {
    Json j = Json::object();
    for (int i = 0; i < mu.space().size(); ++i)
        j[mu.space().label(i)] = format_rational(mu.weight(i));
    return j;
}

QsRandomVariable parse_rv(const Json& j, const SpacePtr& space) {
    require_object(j, "a random variable");
    std::vector<Rat> values(space->size(), Rat(0));
    for (const auto& [atom, value] : j.items())
        values[space->index(atom)] = rat_field(value, "a value");
    return QsRandomVariable(space, std::move(values));
}

Json serialize_rv(const QsRandomVariable& x) {
    Json j = Json::object();
    for (int i = 0; i < x.space().size(); ++i)
        j[x.space().label(i)] = format_rational(x.value(i));
    return j;
}

Event parse_event(const Json& j, const SampleSpace& space) {
    if (!j.is_array()) fail("SchemaError", "an event must be an array of atom labels");
    std::vector<std::string> labels;
    for (const auto& a : j) {
        if (!a.is_string()) fail("SchemaError", "atom labels must be strings");
        labels.push_back(a.get<std::string>());
    }
    return event_from_labels(space, labels);
}

Json serialize_event(const SampleSpace& space, const Event& event) {
    return Json(event_labels(space, event));
}

SolidConvexSet parse_solid_set(const Json& j, const MeasureFamily& family) {
    require_object(j, "a solid set");
    if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
        fail("SchemaError", "a solid set needs a nonempty \"generators\" array");
    std::vector<QsRandomVariable> generators;
    for (const auto& g : j["generators"]) generators.push_back(parse_rv(g, family.space_ptr()));
    return SolidConvexSet(family, std::move(generators));
}

RiskMeasureSpec parse_risk_spec(const Json& j, const SpacePtr& space) {
    require_object(j, "a risk spec");
    if (!j.contains("kind") || !j["kind"].is_string())
        fail("SchemaError", "a risk spec needs a \"kind\" string");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "worst_case") return RiskMeasureSpec::worst_case_spec();
    if (kind == "entropic") {
        if (!j.contains("gamma") || !j.contains("reference"))
            fail("SchemaError", "entropic risk needs \"gamma\" and \"reference\"");
        return RiskMeasureSpec::entropic_spec(rat_field(j["gamma"], "gamma"),
                                              j["reference"].get<std::string>());
    }
    if (kind == "scenario_penalty") {
        if (!j.contains("penalties") || !j["penalties"].is_object())
            fail("SchemaError", "scenario_penalty needs a \"penalties\" object");
        std::map<std::string, ExtRat> penalties;
        for (const auto& [name, value] : j["penalties"].items()) {
            if (value.is_string() && value.get<std::string>() == "inf") {
                penalties[name] = ExtRat::infinity();
            } else {
                penalties[name] = ExtRat::finite(rat_field(value, "a penalty"));
            }
        }
        return RiskMeasureSpec::scenario_penalty_spec(std::move(penalties));
    }
    if (kind == "acceptance_generated") {
        if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
            fail("SchemaError", "acceptance_generated needs a \"generators\" array");
        std::vector<QsRandomVariable> generators;
        for (const auto& g : j["generators"]) generators.push_back(parse_rv(g, space));
        return RiskMeasureSpec::acceptance_generated_spec(std::move(generators));
    }
    fail("SchemaError", "unknown risk kind \"" + kind + "\"");
}

namespace {

NodeBounds parse_bounds(const Json& j) {
    require_object(j, "bounds");
    for (const char* key : {"u", "U", "d", "D", "pi", "Pi"}) {
        if (!j.contains(key))
            fail("SchemaError", std::string("bounds need the field \"") + key + "\"");
    }
    NodeBounds bounds;
    bounds.u_lo = rat_field(j["u"], "u");
    bounds.u_hi = rat_field(j["U"], "U");
    bounds.d_lo = rat_field(j["d"], "d");
    bounds.d_hi = rat_field(j["D"], "D");
    bounds.p_lo = rat_field(j["pi"], "pi");
    bounds.p_hi = rat_field(j["Pi"], "Pi");
    return bounds;
}

} // namespace

BinomialTreeSpec parse_tree_spec(const Json& j) {
    require_object(j, "a tree spec");
    if (!j.contains("T") || !j["T"].is_number_integer())
        fail("SchemaError", "a tree spec needs an integer \"T\"");
    if (!j.contains("grid") || !j["grid"].is_number_integer())
        fail("SchemaError", "a tree spec needs an integer \"grid\"");
    if (!j.contains("bounds")) fail("SchemaError", "a tree spec needs \"bounds\"");
    BinomialTreeSpec spec;
    spec.periods = j["T"].get<int>();
    spec.grid = j["grid"].get<int>();
    spec.bounds = parse_bounds(j["bounds"]);
    if (j.contains("node_bounds")) {
        require_object(j["node_bounds"], "node_bounds");
        for (const auto& [path, bounds] : j["node_bounds"].items())
            spec.node_bounds.emplace(path, parse_bounds(bounds));
    }
    if (j.contains("leaf_cap")) spec.leaf_cap = j["leaf_cap"].get<long>();
    return spec;
}

Payoff parse_payoff(const Json& j) {
    if (j.is_string()) return Payoff::parse(j.get<std::string>());
    require_object(j, "a payoff");
    if (!j.contains("kind") || !j["kind"].is_string())
        fail("SchemaError", "a payoff needs a \"kind\" string");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "identity") return Payoff::identity();
    if (kind == "call" || kind == "put" || kind == "digital") {
        if (!j.contains("strike")) fail("SchemaError", kind + " needs a \"strike\"");
        const Rat strike = rat_field(j["strike"], "strike");
        if (kind == "call") return Payoff::call(strike);
        if (kind == "put") return Payoff::put(strike);
        return Payoff::digital(strike);
    }
    if (kind == "explicit") {
        if (!j.contains("values") || !j["values"].is_object())
            fail("SchemaError", "an explicit payoff needs a \"values\" object");
        std::map<std::string, Rat> values;
        for (const auto& [leaf, value] : j["values"].items())
            values[leaf] = rat_field(value, "a payoff value");
        return Payoff::explicit_map(std::move(values));
    }
    fail("SchemaError", "unknown payoff kind \"" + kind + "\"");
}

SymbolicDescriptor parse_symbolic_descriptor(const Json& j) {
    require_object(j, "a symbolic descriptor");
    SymbolicDescriptor d;
    if (!j.contains("cardinality")) fail("SchemaError", "a descriptor needs \"cardinality\"");
    const auto& c = j["cardinality"];
    if (c.is_string()) {
        const std::string kind = c.get<std::string>();
        if (kind == "countably_infinite") {
            d.cardinality.kind = Cardinality::Kind::countably_infinite;
        } else if (kind == "continuum") {
            d.cardinality.kind = Cardinality::Kind::continuum;
        } else {
            fail("SchemaError", "cardinality must be finite(n), countably_infinite or continuum");
        }
    } else if (c.is_number_integer()) {
        d.cardinality.kind = Cardinality::Kind::finite;
        d.cardinality.count = c.get<long>();
    } else {
        fail("SchemaError", "cardinality must be an integer or a kind string");
    }
    const auto flag = [&](const char* name, bool& target) {
        if (j.contains(name)) {
            if (!j[name].is_boolean()) fail("SchemaError", std::string(name) + " must be boolean");
            target = j[name].get<bool>();
        }
    };
    flag("pairwise_disjoint_supports", d.pairwise_disjoint_supports);
    flag("all_members_supported", d.all_members_supported);
    flag("admits_perfect_disjoint_subfamily", d.admits_perfect_disjoint_subfamily);
    flag("product_structure", d.product_structure);
    flag("within_continuum", d.within_continuum);
    if (j.contains("hahn_property")) d.hahn_property = j["hahn_property"].get<bool>();
    if (j.contains("notes")) d.notes = j["notes"].get<std::string>();
    return d;
}

Json serialize_classification(const ClassificationReport& report) {
    Json j;
    j["provenance"] = report.provenance;
    Json flags = Json::object();
    for (const auto& [name, flag] : report.flags) {
        Json f;
        f["value"] = to_string(flag.value);
        if (flag.value != Tri::undecidable) {
            f["rule"] = flag.rule;
            f["citation"] = flag.citation;
            if (!flag.annotation.empty()) f["annotation"] = flag.annotation;
        }
        flags[name] = std::move(f);
    }
    j["flags"] = std::move(flags);
    if (!report.notes.empty()) j["notes"] = report.notes;
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IOError", "cannot open \"" + path + "\"");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail("SchemaError", "cannot parse \"" + path + "\": " + e.what());
    }
    return j;
}

} // namespace qsa
