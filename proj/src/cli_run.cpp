#include "qsa/cli_run.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <set>

#include "qsa/acceptance.hpp"
#include "qsa/error.hpp"
#include "qsa/json_io.hpp"
#include "qsa/support.hpp"

namespace qsa {

namespace {

struct OutputOptions {
    std::string path; // empty = stdout
    bool pretty = false;
};

void emit(const Json& report, const OutputOptions& options, std::ostream& out) {
    const std::string text = options.pretty ? report.dump(2) : report.dump();
    if (options.path.empty()) {
        out << text << "\n";
        return;
    }
    std::ofstream file(options.path);
    if (!file) fail("IOError", "cannot write \"" + options.path + "\"");
    file << text << "\n";
}

Json selection_json(const KernelSelection& sel) {
    Json j;
    j["u"] = format_rational(sel.u);
    j["d"] = format_rational(sel.d);
    j["p"] = format_rational(sel.p);
    return j;
}

struct CliContext {
    OutputOptions output;
    std::ostream* out = nullptr;

    // classify
    std::string preset_name;
    std::string descriptor_path;

    // model-based verbs
    std::string model_path;
    std::string measure_name;
    std::string measure_path;
    bool exhaustive = false;
    std::string assignment_path;
    std::string vars_path;
    std::string set_path;
    std::string probes_path;
    std::string risk_spec_path;
    std::string grid_spec = "members+diracs";

    // price
    std::string tree_path;
    std::string payoff_text;
    std::string payoff_path;
    bool with_oracle = false;

    // selftest
    std::string filter;
    bool selftest_json = false;
};

int do_classify(const CliContext& ctx) {
    ModelDescriptor descriptor;
    if (!ctx.preset_name.empty()) {
        descriptor = preset(ctx.preset_name);
    } else if (!ctx.descriptor_path.empty()) {
        const Json j = load_json_file(ctx.descriptor_path);
        if (j.contains("atoms")) {
            descriptor = ModelDescriptor::from_family(parse_model(j).family);
        } else {
            descriptor = ModelDescriptor::from_symbolic(parse_symbolic_descriptor(j));
        }
    } else {
        fail("SchemaError", "classify needs --preset or --input");
    }
    const ClassificationReport report = classify(descriptor);
    Json j = serialize_classification(report);
    j["explanation"] = explain(report);
    emit(j, ctx.output, *ctx.out);
    return 0;
}

int do_support(const CliContext& ctx) {
    const ParsedModel model = parse_model(load_json_file(ctx.model_path));
    Measure mu = [&] {
        if (!ctx.measure_path.empty())
            return parse_weights(load_json_file(ctx.measure_path), model.space);
        if (ctx.measure_name.empty()) fail("SchemaError", "support needs --measure or --measure-file");
        return model.family.member(ctx.measure_name);
    }();
    const OrderSupport support = order_support(model.family, mu, ctx.measure_name);
    const SupportCheck fast = verify_support(model.family, mu, support.event, false);
    Json j;
    j["measure"] = ctx.measure_name.empty() ? "(file)" : ctx.measure_name;
    j["support"] = serialize_event(model.family.space(), support.event);
    j["verified"] = fast.ok;
    if (ctx.exhaustive) j["verified_exhaustive"] = verify_support(model.family, mu, support.event, true).ok;
    emit(j, ctx.output, *ctx.out);
    return 0;
}

int do_alternative(const CliContext& ctx) {
    const ParsedModel model = parse_model(load_json_file(ctx.model_path));
    const DisjointAlternative alternative = disjoint_supported_alternative(model.family);
    Json members = Json::object();
    for (const auto& [name, measure] : alternative.family.members())
        members[name] = serialize_measure(measure);
    Json supports = Json::object();
    for (const auto& [name, measure] : alternative.family.members())
        supports[name] = serialize_event(model.family.space(), alternative.supports.at(name));
    bool meets_zero = true;
    const auto& alt_members = alternative.family.members();
    for (std::size_t a = 0; a < alt_members.size(); ++a)
        for (std::size_t b = a + 1; b < alt_members.size(); ++b)
            meets_zero = meets_zero &&
                         measure_meet(alt_members[a].second, alt_members[b].second).is_zero();
    Json j;
    j["members"] = std::move(members);
    j["supports"] = std::move(supports);
    j["equivalent_to_source"] = equivalent(model.family, alternative.family);
    j["pairwise_meets_zero"] = meets_zero;
    emit(j, ctx.output, *ctx.out);
    return 0;
}

int do_aggregate(const CliContext& ctx) {
    const ParsedModel model = parse_model(load_json_file(ctx.model_path));
    const Json aj = load_json_file(ctx.assignment_path);
    std::map<std::string, QsRandomVariable> assignment;
    for (const auto& [name, rv] : aj.items()) assignment.emplace(name, parse_rv(rv, model.space));
    const DisjointAlternative alternative = disjoint_supported_alternative(model.family);
    const QsRandomVariable aggregated = aggregate(alternative, assignment);
    Json j;
    j["aggregator"] = serialize_rv(aggregated);
    Json supports = Json::object();
    for (const auto& [name, support] : alternative.supports)
        supports[name] = serialize_event(model.family.space(), support);
    j["supports"] = std::move(supports);
    emit(j, ctx.output, *ctx.out);
    return 0;
}

int do_esssup(const CliContext& ctx) {
    const ParsedModel model = parse_model(load_json_file(ctx.model_path));
    const Json vj = load_json_file(ctx.vars_path);
    if (!vj.is_array() || vj.empty())
        fail("SchemaError", "esssup needs a nonempty JSON array of random variables");
    std::vector<QsRandomVariable> xs;
    for (const auto& rv : vj) xs.push_back(parse_rv(rv, model.space));
    Json j;
    j["esssup"] = serialize_rv(ess_sup(model.family, xs));
    emit(j, ctx.output, *ctx.out);
    return 0;
}

int do_bipolar(const CliContext& ctx) {
    const ParsedModel model = parse_model(load_json_file(ctx.model_path));
    const SolidConvexSet set = parse_solid_set(load_json_file(ctx.set_path), model.family);
    std::vector<QsRandomVariable> probes;
    if (!ctx.probes_path.empty()) {
        const Json pj = load_json_file(ctx.probes_path);
        if (!pj.is_array()) fail("SchemaError", "probes must be a JSON array");
        for (const auto& rv : pj) probes.push_back(parse_rv(rv, model.space));
    }
    const BipolarReport report = check_bipolar_equivalence(model.family, set, probes);
    Json j;
    j["probes_checked"] = report.probes_checked;
    j["disagreements"] = Json::array();
    for (const auto& d : report.disagreements) {
        Json item;
        item["probe"] = serialize_rv(d.probe);
        item["direct_member"] = d.direct_member;
        item["bipolar_member"] = d.bipolar_member;
        j["disagreements"].push_back(std::move(item));
    }
    Json details = Json::array();
    for (const auto& probe : probes) {
        const MembershipResult membership = bipolar_membership(model.family, set, probe);
        Json item;
        item["probe"] = serialize_rv(probe);
        item["direct_member"] = solid_hull_member(model.family, set, probe);
        item["bipolar_member"] = membership.member;
        if (membership.optimum) item["optimum"] = format_rational(*membership.optimum);
        if (membership.certificate) {
            Json mu = Json::object();
            for (int i = 0; i < model.space->size(); ++i)
                mu[model.space->label(i)] = format_rational((*membership.certificate)[i]);
            item["certificate"] = std::move(mu);
        }
        if (membership.ray_atom) item["ray_atom"] = model.space->label(*membership.ray_atom);
        details.push_back(std::move(item));
    }
    j["probes"] = std::move(details);
    j["note"] = report.note;
    emit(j, ctx.output, *ctx.out);
    return 0;
}

std::vector<Measure> build_grid(const std::string& spec, const MeasureFamily& family) {
    std::vector<Measure> grid;
    if (spec == "members+diracs" || spec == "members" || spec == "diracs") {
        if (spec != "diracs")
            for (auto& m : member_grid(family)) grid.push_back(std::move(m));
        if (spec != "members")
            for (auto& m : dirac_grid(family)) grid.push_back(std::move(m));
        return grid;
    }
    if (spec.rfind("simplex:", 0) == 0) {
        const long n = std::stol(spec.substr(8));
        return simplex_grid(family, n);
    }
    fail("SchemaError", "unknown dual grid \"" + spec + "\"");
}

int do_risk(const CliContext& ctx) {
    const ParsedModel model = parse_model(load_json_file(ctx.model_path));
    const RiskMeasureSpec spec =
        parse_risk_spec(load_json_file(ctx.risk_spec_path), model.space);
    const Json pj = load_json_file(ctx.probes_path);
    if (!pj.is_array() || pj.empty())
        fail("SchemaError", "risk needs a nonempty JSON array of probes");
    std::vector<QsRandomVariable> probes;
    for (const auto& rv : pj) probes.push_back(parse_rv(rv, model.space));

    const std::vector<Measure> grid = build_grid(ctx.grid_spec, model.family);
    std::vector<ExtRiskValue> alphas;
    alphas.reserve(grid.size());
    for (const auto& q : grid) alphas.push_back(conjugate(spec, model.family, q));

    Json evaluations = Json::array();
    for (const auto& x : probes) {
        const RiskValue value = rho(spec, model.family, x);
        Json item;
        item["probe"] = serialize_rv(x);
        if (value.exact) {
            item["rho"] = format_rational(value.rational);
        } else {
            item["rho"] = value.approx;
        }
        // Certificate: the grid measure attaining the dual value.
        int best = -1;
        double best_value = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (alphas[i].infinite) continue;
            const double dual = (numerator(expectation(grid[i], x)).convert_to<double>() /
                                 denominator(expectation(grid[i], x)).convert_to<double>()) -
                                alphas[i].value.as_double();
            if (best < 0 || dual > best_value) {
                best = static_cast<int>(i);
                best_value = dual;
            }
        }
        if (best >= 0) item["best_dual"] = serialize_measure(grid[best]);
        evaluations.push_back(std::move(item));
    }
    const RepresentationReport report = verify_representation(spec, model.family, probes, grid);
    Json j;
    j["evaluations"] = std::move(evaluations);
    Json rep;
    rep["grid"] = ctx.grid_spec;
    rep["grid_size"] = report.grid_size;
    if (report.exact) {
        rep["max_gap"] = format_rational(report.max_gap_rational);
    } else {
        rep["max_gap"] = report.max_gap;
    }
    rep["note"] = report.note;
    j["representation"] = std::move(rep);
    emit(j, ctx.output, *ctx.out);
    return 0;
}

int do_price(const CliContext& ctx) {
    const BinomialTreeSpec spec = parse_tree_spec(load_json_file(ctx.tree_path));
    Payoff payoff = Payoff::identity();
    if (!ctx.payoff_text.empty()) {
        payoff = Payoff::parse(ctx.payoff_text);
    } else if (!ctx.payoff_path.empty()) {
        payoff = parse_payoff(load_json_file(ctx.payoff_path));
    } else {
        fail("SchemaError", "price needs --payoff or --payoff-file");
    }
    const Tree tree = build_tree(spec);
    const SuperhedgeResult result = superhedge_price(tree, payoff);
    Json j;
    j["value"] = format_rational(result.value);
    Json values = Json::object();
    for (int t = 0; t <= tree.periods(); ++t)
        for (std::size_t i = 0; i < tree.levels[t].size(); ++i)
            values[tree.levels[t][i].path.empty() ? "(root)" : tree.levels[t][i].path] =
                format_rational(result.node_values[t][i]);
    j["node_values"] = std::move(values);
    Json argmax = Json::object();
    for (int t = 0; t < tree.periods(); ++t)
        for (std::size_t i = 0; i < tree.levels[t].size(); ++i)
            argmax[tree.levels[t][i].path.empty() ? "(root)" : tree.levels[t][i].path] =
                selection_json(result.argmax[t][i]);
    j["argmax"] = std::move(argmax);
    if (ctx.with_oracle) {
        OracleOptions options;
        options.parallel = true;
        const Rat oracle = brute_force_price(tree, payoff, options);
        j["oracle"] = format_rational(oracle);
        j["oracle_matches"] = oracle == result.value;
    }
    emit(j, ctx.output, *ctx.out);
    return 0;
}

int do_selftest(const CliContext& ctx) {
    AcceptanceOptions options;
    options.filter = ctx.filter;
    const auto results = run_acceptance(options);
    if (ctx.selftest_json) {
        Json j = Json::array();
        for (const auto& r : results) {
            Json item;
            item["id"] = r.id;
            item["name"] = r.name;
            item["passed"] = r.passed;
            item["detail"] = r.detail;
            j.push_back(std::move(item));
        }
        emit(j, ctx.output, *ctx.out);
    } else {
        print_acceptance(results, *ctx.out);
    }
    return all_passed(results) ? 0 : 2;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliContext ctx;
    ctx.out = &out;

    CLI::App app{"quasi-sure analysis toolkit"};
    app.require_subcommand(1);
    app.add_option("--output,-o", ctx.output.path, "write the report to a file instead of stdout");
    app.add_flag("--pretty", ctx.output.pretty, "indent the JSON report");

    auto* classify_cmd = app.add_subcommand("classify", "classify a model descriptor");
    classify_cmd->add_option("--preset", ctx.preset_name, "preset descriptor name");
    classify_cmd->add_option("--input", ctx.descriptor_path, "model or symbolic descriptor JSON");

    auto* support_cmd = app.add_subcommand("support", "order support of a measure");
    support_cmd->add_option("model", ctx.model_path, "model JSON file")->required();
    support_cmd->add_option("--measure", ctx.measure_name, "family member name");
    support_cmd->add_option("--measure-file", ctx.measure_path, "weights JSON for a measure");
    support_cmd->add_flag("--exhaustive", ctx.exhaustive, "also run the exhaustive check");

    auto* alternative_cmd =
        app.add_subcommand("alternative", "disjoint supported alternative of the family");
    alternative_cmd->add_option("model", ctx.model_path, "model JSON file")->required();

    auto* aggregate_cmd = app.add_subcommand("aggregate", "aggregate a consistent assignment");
    aggregate_cmd->add_option("model", ctx.model_path, "model JSON file")->required();
    aggregate_cmd->add_option("--assignment", ctx.assignment_path, "member -> variable JSON")
        ->required();

    auto* esssup_cmd = app.add_subcommand("esssup", "essential supremum of random variables");
    esssup_cmd->add_option("model", ctx.model_path, "model JSON file")->required();
    esssup_cmd->add_option("--vars", ctx.vars_path, "JSON array of random variables")->required();

    auto* bipolar_cmd = app.add_subcommand("bipolar", "one-sided polar and bipolar membership");
    bipolar_cmd->add_option("model", ctx.model_path, "model JSON file")->required();
    bipolar_cmd->add_option("--set", ctx.set_path, "solid set JSON file")->required();
    bipolar_cmd->add_option("--probes", ctx.probes_path, "JSON array of probes");

    auto* risk_cmd = app.add_subcommand("risk", "risk measure evaluation and duality");
    risk_cmd->add_option("model", ctx.model_path, "model JSON file")->required();
    risk_cmd->add_option("--spec", ctx.risk_spec_path, "risk measure spec JSON")->required();
    risk_cmd->add_option("--probes", ctx.probes_path, "JSON array of probes")->required();
    risk_cmd->add_option("--grid", ctx.grid_spec,
                         "dual grid: members, diracs, members+diracs or simplex:N");

    auto* price_cmd = app.add_subcommand("price", "robust binomial superhedging price");
    price_cmd->add_option("tree", ctx.tree_path, "tree spec JSON file")->required();
    price_cmd->add_option("--payoff", ctx.payoff_text, "call:K, put:K, digital:K or identity");
    price_cmd->add_option("--payoff-file", ctx.payoff_path, "payoff JSON file");
    price_cmd->add_flag("--oracle", ctx.with_oracle, "cross-check against the enumeration oracle");

    auto* selftest_cmd = app.add_subcommand("selftest", "run the bundled acceptance suite");
    selftest_cmd->add_option("--filter", ctx.filter, "substring filter on criterion names");
    selftest_cmd->add_flag("--json", ctx.selftest_json, "emit a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (classify_cmd->parsed()) return do_classify(ctx);
        if (support_cmd->parsed()) return do_support(ctx);
        if (alternative_cmd->parsed()) return do_alternative(ctx);
        if (aggregate_cmd->parsed()) return do_aggregate(ctx);
        if (esssup_cmd->parsed()) return do_esssup(ctx);
        if (bipolar_cmd->parsed()) return do_bipolar(ctx);
        if (risk_cmd->parsed()) return do_risk(ctx);
        if (price_cmd->parsed()) return do_price(ctx);
        if (selftest_cmd->parsed()) return do_selftest(ctx);
        err << "no subcommand\n";
        return 1;
    } catch (const Error& e) {
        Json j;
        j["error"] = e.code();
        j["detail"] = e.detail();
        out << j.dump() << "\n";
        static const std::set<std::string> input_errors = {"IOError", "SchemaError", "BadRational"};
        return input_errors.count(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        Json j;
        j["error"] = "IOError";
        j["detail"] = e.what();
        out << j.dump() << "\n";
        return 1;
    }
}

} // namespace qsa
