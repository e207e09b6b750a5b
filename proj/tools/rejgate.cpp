// rejgate: command-line front end for the rejection-gate toolkit.
//
// Exit codes: 0 success, 1 data/runtime error, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rejgate/calibrate.hpp"
#include "rejgate/cost_core.hpp"
#include "rejgate/dataio.hpp"
#include "rejgate/error.hpp"
#include "rejgate/metrics.hpp"
#include "rejgate/rejector.hpp"
#include "rejgate/simulate.hpp"
#include "rejgate/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rejgate;

namespace {

struct CostFlags {
    std::optional<double> k;
    std::optional<double> v;
    std::optional<double> c_d;
    std::optional<double> c_w;

    bool given() const { return k || v || c_d || c_w; }

    CostModel resolve() const {
        const bool triple = v || c_d || c_w;
        if (triple && k) throw InvalidArgument("--k and --v/--cd/--cw are mutually exclusive");
        if (triple) {
            if (!v || !c_d || !c_w) throw InvalidArgument("--v, --cd and --cw must be given together");
            return CostModel(*v, *c_d, *c_w);
        }
        return CostModel::from_k(k.value_or(3.0));
    }
};

struct Options {
    CostFlags cost;
    std::string threshold = "auto";
    std::size_t bins = 15;
    std::string scheme = "equal_width";
    std::uint64_t seed = 0;
    std::string input;
    std::string input_format;
    std::string output;
    std::string format = "json";
    std::string group_col = "group";
    double epsilon = kDefaultEpsilon;
    std::size_t min_group_size = kDefaultMinGroupSize;
    bool deterministic = false;

    // calibrate
    std::string emit_recalibrated;
    double t_min = 0.05;
    double t_max = 20.0;

    // reject
    std::string spec;
    std::string spec_out;

    // simulate
    std::size_t n = 1000;
    double alpha = 2.0;
    double beta = 2.0;
    std::optional<double> hc;
    double high_conf = 0.99;
    double gamma = 1.0;
    double delta = 0.0;
    std::size_t replications = 20;
    std::string resample = "bernoulli";
    std::string emit_dataset;
};

void add_cost(CLI::App* app, Options& o) {
    auto* k = app->add_option("--k", o.cost.k, "Severity ratio: c_w = -k with v = 1, c_d = -1 (default 3)");
    auto* v = app->add_option("--v", o.cost.v, "Value of an accepted correct prediction");
    auto* cd = app->add_option("--cd", o.cost.c_d, "Value of the default path");
    auto* cw = app->add_option("--cw", o.cost.c_w, "Value of an accepted wrong prediction");
    k->excludes(v)->excludes(cd)->excludes(cw);
}

void add_input(CLI::App* app, Options& o, bool required = true) {
    auto* in = app->add_option("--input,-i", o.input, "Prediction log (csv or jsonl)");
    if (required) in->required();
    app->add_option("--input-format", o.input_format, "csv|jsonl (default: from extension)")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    app->add_option("--group-col", o.group_col, "Column holding the group tag");
}

void add_report_output(CLI::App* app, Options& o) {
    app->add_option("--output,-o", o.output, "Output path (default: stdout)");
    app->add_option("--format", o.format, "Report format: json|markdown")
        ->check(CLI::IsMember({"json", "markdown"}));
    app->add_flag("--deterministic", o.deterministic, "Omit the timestamp for byte-stable output");
}

Dataset load_input(const Options& o) {
    LoadOptions lo;
    lo.group_column = o.group_col;
    const fs::path path(o.input);
    const auto format = o.input_format.empty() ? dataset_format_from_path(path) : parse_dataset_format(o.input_format);
    return load_dataset(path, format, lo);
}

json cost_json(const CostModel& c) {
    const double k = c.k();
    return {{"v", c.v()}, {"c_d", c.c_d()}, {"c_w", c.c_w()}, {"k", std::isfinite(k) ? json(k) : json(nullptr)}};
}

Threshold resolve_threshold(const std::string& mode, const CostModel& cost, const Dataset* d) {
    if (mode == "auto") return optimal_threshold(cost);
    if (mode == "fit") {
        if (d == nullptr) throw InvalidArgument("--threshold fit requires an input dataset");
        return empirical_threshold(*d, cost).threshold;
    }
    return Threshold::parse(mode);
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(output, text);
    }
}

void emit_report(const ReportDocument& doc, const Options& o) { emit(render_report(doc, parse_report_format(o.format)), o.output); }

ReportDocument new_document(const std::string& command, const Options& o, const CostModel& cost) {
    ReportDocument doc;
    doc.command = command;
    doc.deterministic = o.deterministic;
    doc.parameters["cost"] = cost_json(cost);
    if (!o.input.empty()) {
        doc.parameters["input"] = fs::path(o.input).filename().string();
        doc.input_digest = file_digest(o.input);
    }
    return doc;
}

double accuracy(const Dataset& d) {
    const auto correct = std::count_if(d.records.begin(), d.records.end(), [](const auto& r) { return r.correct; });
    return static_cast<double>(correct) / static_cast<double>(d.size());
}

// ---- commands ----

int cmd_threshold(const Options& o) {
    const auto t = optimal_threshold(o.cost.resolve());
    std::cout << t.to_string() << '\n';
    return 0;
}

int cmd_analyze(const Options& o) {
    const auto cost = o.cost.resolve();
    const BinningScheme scheme{parse_binning_kind(o.scheme), o.bins};
    if (scheme.bins == 0) throw InvalidArgument("--bins must be >= 1");
    const auto d = load_input(o);
    const auto t = resolve_threshold(o.threshold, cost, &d);

    auto doc = new_document("analyze", o, cost);
    doc.parameters["threshold_mode"] = o.threshold;
    doc.parameters["threshold"] = to_json(t);
    doc.parameters["binning"] = {{"kind", to_string(scheme.kind)}, {"bins", scheme.bins}};
    doc.parameters["group_col"] = o.group_col;
    doc.calibration = full_report(d, cost, scheme);
    doc.value_reports.emplace_back("at_threshold", deployed_value(d, cost, t));
    doc.expected = expected_value(d, cost, t);
    doc.notes["n"] = d.size();
    doc.notes["accuracy"] = accuracy(d);
    doc.notes["value_gap_at_threshold"] = value_gap(d, cost, t);
    doc.notes["value_gap_standard_error"] = value_gap_standard_error(d, cost, t);
    doc.notes["reliability"] = to_json(reliability_table(d, scheme));
    emit_report(doc, o);
    return 0;
}

int cmd_sweep(const Options& o) {
    const auto cost = o.cost.resolve();
    const auto d = load_input(o);
    emit(render_curve(value_curve(d, cost)), o.output);
    return 0;
}

int cmd_calibrate(const Options& o) {
    const auto cost = o.cost.resolve();
    const auto d = load_input(o);
    TemperatureSearch search;
    search.min_temperature = o.t_min;
    search.max_temperature = o.t_max;
    const auto model = fit_temperature(d, search);
    const auto recalibrated = apply_temperature(d, model);

    auto doc = new_document("calibrate", o, cost);
    doc.parameters["search"] = {{"min_temperature", search.min_temperature},
                                {"max_temperature", search.max_temperature},
                                {"tolerance", search.tolerance},
                                {"max_iterations", search.max_iterations}};
    doc.temperature = model;
    const auto t = optimal_threshold(cost);
    doc.notes["nll_before"] = nll(d);
    doc.notes["nll_after"] = nll(recalibrated);
    doc.notes["ece_before"] = ece(d, {});
    doc.notes["ece_after"] = ece(recalibrated, {});
    doc.notes["value_gap_before"] = value_gap(d, cost, t);
    doc.notes["value_gap_after"] = value_gap(recalibrated, cost, t);

    if (!o.emit_recalibrated.empty()) {
        const fs::path out(o.emit_recalibrated);
        write_dataset(recalibrated, out, dataset_format_from_path(out),
                      {{"source", doc.parameters["input"]}, {"temperature", model.temperature}});
    }
    emit_report(doc, o);
    return 0;
}

int cmd_reject_fit(const Options& o, bool per_group) {
    const auto cost = o.cost.resolve();
    const auto d = load_input(o);
    const auto spec = per_group ? fit_per_group(d, cost, o.min_group_size) : fit_global(d, cost);
    emit(rejector_to_json(spec).dump(2) + "\n", o.output);
    return 0;
}

int cmd_reject_trust(const Options& o) {
    const auto cost = o.cost.resolve();
    const auto d = load_input(o);
    auto doc = new_document("reject trust", o, cost);
    doc.parameters["epsilon"] = o.epsilon;
    doc.parameters["min_group_size"] = o.min_group_size;
    doc.parameters["group_col"] = o.group_col;
    doc.groups = identify_trusted_subsets(d, cost, o.epsilon, o.min_group_size);
    if (!o.spec_out.empty()) save_rejector(fit_trusted_subset(d, cost, o.epsilon, o.min_group_size), o.spec_out);
    emit_report(doc, o);
    return 0;
}

int cmd_reject_apply(const Options& o) {
    const auto spec = load_rejector(o.spec);
    const auto d = load_input(o);
    std::ostringstream out;
    out << "id,decision\n";
    for (const auto& rec : d.records) {
        out << rec.id << ',' << (apply(spec, rec) == Decision::accept ? "accept" : "reject") << '\n';
    }
    emit(out.str(), o.output);
    return 0;
}

int cmd_reject_eval(const Options& o) {
    const auto spec = load_rejector(o.spec);
    const auto cost = o.cost.given() ? o.cost.resolve() : spec.cost;
    const auto d = load_input(o);
    auto doc = new_document("reject eval", o, cost);
    doc.parameters["spec"] = fs::path(o.spec).filename().string();
    doc.parameters["rejector_kind"] = to_string(spec.kind);
    doc.value_reports.emplace_back("rejector", evaluate(spec, d, cost));
    doc.value_reports.emplace_back("analytic_threshold", deployed_value(d, cost, optimal_threshold(cost)));
    emit_report(doc, o);
    return 0;
}

ResampleMode parse_resample(const std::string& s) {
    if (s == "bernoulli") return ResampleMode::bernoulli_confidence;
    if (s == "bootstrap") return ResampleMode::bootstrap;
    return ResampleMode::none;
}

int cmd_simulate(const Options& o) {
    const auto cost = o.cost.resolve();
    SyntheticConfig cfg;
    cfg.n = o.n;
    cfg.alpha = o.alpha;
    cfg.beta = o.beta;
    cfg.hc = o.hc;
    cfg.high_conf = o.high_conf;
    cfg.seed = o.seed;
    const bool distorted = o.gamma != 1.0 || o.delta != 0.0;
    if (distorted && o.hc) throw InvalidArgument("--hc cannot be combined with --gamma/--delta");

    std::string generator = "calibrated";
    Dataset d;
    if (o.hc) {
        generator = "rare_high_confidence";
        d = generate_rare_high_confidence(cfg);
    } else if (distorted) {
        generator = "distorted";
        d = generate_distorted(cfg, {o.gamma, o.delta});
    } else {
        d = generate_calibrated(cfg);
    }
    const auto t = resolve_threshold(o.threshold, cost, &d);
    const auto mode = parse_resample(o.resample);
    const auto sim = run_workflow(d, cost, t, o.replications, o.seed, mode);

    auto doc = new_document("simulate", o, cost);
    json gen = {{"generator", generator}, {"n", cfg.n},          {"alpha", cfg.alpha},
                {"beta", cfg.beta},       {"seed", cfg.seed},    {"gamma", o.gamma},
                {"delta", o.delta},       {"high_conf", cfg.high_conf}};
    gen["hc"] = cfg.hc ? json(*cfg.hc) : json(nullptr);
    doc.parameters["generator"] = gen;
    doc.parameters["threshold_mode"] = o.threshold;
    doc.parameters["threshold"] = to_json(t);
    doc.parameters["replications"] = o.replications;
    doc.parameters["resample"] = o.resample;
    doc.simulation = sim;
    doc.value_reports.emplace_back("logged_outcomes", deployed_value(d, cost, t));
    doc.notes["accuracy"] = accuracy(d);
    doc.notes["mean_advantage_per_item"] = sim.mean_advantage / static_cast<double>(d.size());
    doc.notes["adoption_costs"] = "development, deployment, testing and management costs are not modeled";

    if (!o.emit_dataset.empty()) {
        const fs::path out(o.emit_dataset);
        write_dataset(d, out, dataset_format_from_path(out), gen);
    }
    emit_report(doc, o);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rejgate: value-aligned evaluation of confidence-threshold rejection gates"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto* threshold = app.add_subcommand("threshold", "Print the analytic optimal threshold");
    add_cost(threshold, o);

    auto* analyze = app.add_subcommand("analyze", "ECE, value gap and threshold divergence report");
    add_cost(analyze, o);
    add_input(analyze, o);
    add_report_output(analyze, o);
    analyze->add_option("--threshold", o.threshold, "auto|fit|<decimal>|REJECT_ALL");
    analyze->add_option("--bins", o.bins, "Reliability bins");
    analyze->add_option("--scheme", o.scheme, "equal_width|equal_mass")
        ->check(CLI::IsMember({"equal_width", "equal_mass"}));

    auto* sweep = app.add_subcommand("sweep", "Value curve over every candidate threshold (csv)");
    add_cost(sweep, o);
    add_input(sweep, o);
    sweep->add_option("--output,-o", o.output, "Curve csv path (default: stdout)");

    auto* calibrate = app.add_subcommand("calibrate", "Fit temperature scaling on logits");
    add_cost(calibrate, o);
    add_input(calibrate, o);
    add_report_output(calibrate, o);
    calibrate->add_option("--emit-recalibrated", o.emit_recalibrated, "Write the recalibrated dataset here");
    calibrate->add_option("--t-min", o.t_min, "Lower temperature bound");
    calibrate->add_option("--t-max", o.t_max, "Upper temperature bound");

    auto* reject = app.add_subcommand("reject", "Build, apply and evaluate rejectors");
    reject->require_subcommand(1);
    auto* fit = reject->add_subcommand("fit", "Fit a global empirical-threshold rejector");
    auto* fit_pg = reject->add_subcommand("fit-per-group", "Fit per-group thresholds");
    auto* trust = reject->add_subcommand("trust", "Identify trusted groups");
    auto* apply_cmd = reject->add_subcommand("apply", "Print accept/reject decisions");
    auto* eval = reject->add_subcommand("eval", "Evaluate a rejector on a dataset");
    for (auto* sub : {fit, fit_pg, trust, apply_cmd, eval}) {
        add_cost(sub, o);
        add_input(sub, o);
    }
    for (auto* sub : {fit, fit_pg, apply_cmd}) sub->add_option("--output,-o", o.output, "Output path (default: stdout)");
    for (auto* sub : {trust, eval}) add_report_output(sub, o);
    for (auto* sub : {fit_pg, trust}) sub->add_option("--min-group-size", o.min_group_size, "Smallest group with its own threshold");
    trust->add_option("--epsilon", o.epsilon, "Largest value gap of a trusted group");
    trust->add_option("--spec-out", o.spec_out, "Also write the trusted_subset rejector here");
    for (auto* sub : {apply_cmd, eval}) sub->add_option("--spec", o.spec, "Rejector document")->required();

    auto* simulate = app.add_subcommand("simulate", "Generate synthetic predictions and replay the workflow");
    add_cost(simulate, o);
    add_report_output(simulate, o);
    simulate->add_option("--n", o.n, "Items per dataset");
    simulate->add_option("--alpha", o.alpha, "Beta shape alpha");
    simulate->add_option("--beta", o.beta, "Beta shape beta");
    simulate->add_option("--hc", o.hc, "Rare high-confidence fraction");
    simulate->add_option("--high-conf", o.high_conf, "Confidence of the rare slice");
    simulate->add_option("--gamma", o.gamma, "Logit scale distortion");
    simulate->add_option("--delta", o.delta, "Logit shift distortion");
    simulate->add_option("--threshold", o.threshold, "auto|fit|<decimal>|REJECT_ALL");
    simulate->add_option("--replications", o.replications, "Monte Carlo replications");
    simulate->add_option("--resample", o.resample, "bernoulli|bootstrap|none")
        ->check(CLI::IsMember({"bernoulli", "bootstrap", "none"}));
    simulate->add_option("--emit-dataset", o.emit_dataset, "Write the generated dataset here");
    simulate->add_option("--seed", o.seed, "Generator seed")->envname("REJECT_GATE_SEED");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*threshold) return cmd_threshold(o);
        if (*analyze) return cmd_analyze(o);
        if (*sweep) return cmd_sweep(o);
        if (*calibrate) return cmd_calibrate(o);
        if (*fit) return cmd_reject_fit(o, false);
        if (*fit_pg) return cmd_reject_fit(o, true);
        if (*trust) return cmd_reject_trust(o);
        if (*apply_cmd) return cmd_reject_apply(o);
        if (*eval) return cmd_reject_eval(o);
        if (*simulate) return cmd_simulate(o);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
