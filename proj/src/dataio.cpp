#include "rejgate/dataio.hpp"

#include <unistd.h>

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <memory>
#include <set>
#include <sstream>

#include "rejgate/error.hpp"
#include "rejgate/version.hpp"

namespace rejgate {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::optional<double> parse_decimal(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::general);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(const std::string& text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    return std::nullopt;
}

double require_confidence(std::optional<double> c, const std::string& raw, std::size_t line) {
    if (!c) throw DataError(where(line) + "cannot parse confidence '" + raw + "'");
    if (!(*c >= 0.0 && *c <= 1.0)) {
        throw DataError(where(line) + "confidence " + trim(raw) + " outside [0,1]");
    }
    return *c;
}

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and newlines.
// Lines starting with '#' and blank lines are skipped.
std::vector<CsvRow> read_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            ++i;
            ++line;
            continue;
        }
        CsvRow row;
        row.line = line;
        std::string field;
        bool in_quotes = false;
        bool done = false;
        while (i < text.size() && !done) {
            const char ch = text[i];
            if (in_quotes) {
                if (ch == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.push_back('"');
                        ++i;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (ch == '\n') ++line;
                    field.push_back(ch);
                }
            } else if (ch == '"') {
                in_quotes = true;
            } else if (ch == ',') {
                row.fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\n') {
                done = true;
                ++line;
            } else if (ch != '\r') {
                field.push_back(ch);
            }
            ++i;
        }
        if (in_quotes) throw DataError(where(row.line) + "unterminated quoted field");
        row.fields.push_back(std::move(field));
        const bool blank = row.fields.size() == 1 && trim(row.fields[0]).empty();
        if (!blank) rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

Dataset parse_csv(std::istream& in, const LoadOptions& options) {
    const auto rows = read_csv(in);
    if (rows.empty()) throw DataError("missing csv header row");
    const auto& header = rows.front();

    std::vector<std::string> names;
    for (const auto& f : header.fields) names.push_back(trim(f));
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) return std::nullopt;
        return static_cast<std::size_t>(it - names.begin());
    };
    const auto id_col = column("id");
    const auto conf_col = column("confidence");
    const auto correct_col = column("correct");
    for (const auto& [name, col] : {std::pair{"id", id_col}, {"confidence", conf_col}, {"correct", correct_col}}) {
        if (!col) throw DataError(std::string("missing required column '") + name + "'");
    }
    const auto group_col = column(options.group_column);
    const auto logit_col = column("logit");

    Dataset d;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != names.size()) {
            throw DataError(where(row.line) + "expected " + std::to_string(names.size()) + " fields, found " +
                            std::to_string(row.fields.size()));
        }
        PredictionRecord rec;
        rec.id = row.fields[*id_col];
        const auto& raw_conf = row.fields[*conf_col];
        rec.confidence = require_confidence(parse_decimal(raw_conf), raw_conf, row.line);
        const auto correct = parse_bool(row.fields[*correct_col]);
        if (!correct) {
            throw DataError(where(row.line) + "cannot parse boolean '" + row.fields[*correct_col] + "'");
        }
        rec.correct = *correct;
        if (group_col && !row.fields[*group_col].empty()) rec.group = row.fields[*group_col];
        if (logit_col && !trim(row.fields[*logit_col]).empty()) {
            const auto l = parse_decimal(row.fields[*logit_col]);
            if (!l) throw DataError(where(row.line) + "cannot parse logit '" + row.fields[*logit_col] + "'");
            rec.logit = *l;
        }
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (c == *id_col || c == *conf_col || c == *correct_col || (group_col && c == *group_col) ||
                (logit_col && c == *logit_col)) {
                continue;
            }
            rec.extra.emplace(names[c], row.fields[c]);
        }
        d.records.push_back(std::move(rec));
    }
    if (d.empty()) throw DataError("empty dataset");
    return d;
}

std::string json_scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

Dataset parse_jsonl(std::istream& in, const LoadOptions& options) {
    Dataset d;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (trim(text).empty()) continue;
        json obj;
        try {
            obj = json::parse(text);
        } catch (const json::parse_error& e) {
            throw DataError(where(line) + "invalid json (" + e.what() + ")");
        }
        if (!obj.is_object()) throw DataError(where(line) + "expected a json object");
        if (obj.contains("_provenance")) continue;

        for (const char* key : {"id", "confidence", "correct"}) {
            if (!obj.contains(key)) throw DataError(where(line) + "missing required column '" + key + "'");
        }
        PredictionRecord rec;
        rec.id = json_scalar_text(obj["id"]);

        const auto& conf = obj["confidence"];
        std::optional<double> c;
        if (conf.is_number()) c = conf.get<double>();
        rec.confidence = require_confidence(c, json_scalar_text(conf), line);

        const auto& corr = obj["correct"];
        std::optional<bool> b;
        if (corr.is_boolean()) {
            b = corr.get<bool>();
        } else if (corr.is_number_integer() || corr.is_number_unsigned()) {
            const auto v = corr.get<long long>();
            if (v == 0 || v == 1) b = (v == 1);
        } else if (corr.is_string()) {
            b = parse_bool(corr.get<std::string>());
        }
        if (!b) throw DataError(where(line) + "cannot parse boolean '" + json_scalar_text(corr) + "'");
        rec.correct = *b;

        if (obj.contains(options.group_column) && !obj[options.group_column].is_null()) {
            rec.group = json_scalar_text(obj[options.group_column]);
        }
        if (obj.contains("logit") && !obj["logit"].is_null()) {
            if (!obj["logit"].is_number()) throw DataError(where(line) + "cannot parse logit");
            rec.logit = obj["logit"].get<double>();
        }
        for (const auto& [key, value] : obj.items()) {
            if (key == "id" || key == "confidence" || key == "correct" || key == options.group_column ||
                key == "logit") {
                continue;
            }
            rec.extra.emplace(key, json_scalar_text(value));
        }
        d.records.push_back(std::move(rec));
    }
    if (d.empty()) throw DataError("empty dataset");
    return d;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string six_digits(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& v : j) flatten(v, prefix + "[" + std::to_string(i++) + "]", out);
        if (j.empty()) out.emplace_back(prefix, "[]");
    } else if (j.is_number_float()) {
        out.emplace_back(prefix, six_digits(j.get<double>()));
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError("parse error in '" + path.string() + "' at byte " + std::to_string(e.byte) + ": " +
                        e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

DatasetFormat parse_dataset_format(const std::string& text) {
    if (text == "csv") return DatasetFormat::csv;
    if (text == "jsonl") return DatasetFormat::jsonl;
    throw InvalidArgument("unknown dataset format '" + text + "'");
}

DatasetFormat dataset_format_from_path(const fs::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".ndjson") return DatasetFormat::jsonl;
    return DatasetFormat::csv;
}

ReportFormat parse_report_format(const std::string& text) {
    if (text == "json") return ReportFormat::json;
    if (text == "markdown" || text == "md") return ReportFormat::markdown;
    throw InvalidArgument("unknown report format '" + text + "'");
}

Dataset parse_dataset(std::istream& in, DatasetFormat format, const LoadOptions& options) {
    return format == DatasetFormat::csv ? parse_csv(in, options) : parse_jsonl(in, options);
}

Dataset load_dataset(const fs::path& path, DatasetFormat format, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    return parse_dataset(in, format, options);
}

Dataset load_dataset(const fs::path& path, const LoadOptions& options) {
    return load_dataset(path, dataset_format_from_path(path), options);
}

void write_dataset(const Dataset& d, const fs::path& path, DatasetFormat format, const json& provenance) {
    std::ostringstream out;
    if (format == DatasetFormat::jsonl) {
        if (!provenance.is_null()) out << json{{"_provenance", provenance}}.dump() << '\n';
        for (const auto& rec : d.records) {
            json obj;
            obj["id"] = rec.id;
            obj["confidence"] = rec.confidence;
            obj["correct"] = rec.correct;
            if (rec.group) obj["group"] = *rec.group;
            if (rec.logit) obj["logit"] = *rec.logit;
            for (const auto& [k, v] : rec.extra) obj[k] = v;
            out << obj.dump() << '\n';
        }
    } else {
        if (!provenance.is_null()) out << "# provenance: " << provenance.dump() << '\n';
        std::set<std::string> extra_keys;
        bool any_group = false;
        bool any_logit = false;
        for (const auto& rec : d.records) {
            for (const auto& kv : rec.extra) extra_keys.insert(kv.first);
            any_group = any_group || rec.group.has_value();
            any_logit = any_logit || rec.logit.has_value();
        }
        out << "id,confidence,correct";
        if (any_group) out << ",group";
        if (any_logit) out << ",logit";
        for (const auto& k : extra_keys) out << ',' << csv_escape(k);
        out << '\n';
        for (const auto& rec : d.records) {
            out << csv_escape(rec.id) << ',' << format_double(rec.confidence) << ',' << (rec.correct ? "true" : "false");
            if (any_group) out << ',' << (rec.group ? csv_escape(*rec.group) : "");
            if (any_logit) out << ',' << (rec.logit ? format_double(*rec.logit) : "");
            for (const auto& k : extra_keys) {
                const auto it = rec.extra.find(k);
                out << ',' << (it == rec.extra.end() ? "" : csv_escape(it->second));
            }
            out << '\n';
        }
    }
    write_file_atomic(path, out.str());
}

std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 unavailable");
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out = "sha256:";
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

json to_json(const Threshold& t) {
    if (t.is_reject_all()) return "REJECT_ALL";
    return t.value();
}

Threshold threshold_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "REJECT_ALL") return Threshold::reject_all();
        throw DataError("invalid threshold '" + j.get<std::string>() + "'");
    }
    if (!j.is_number()) throw DataError("invalid threshold " + j.dump());
    const double v = j.get<double>();
    if (!(v >= 0.0 && v <= 1.0)) throw DataError("threshold " + j.dump() + " outside [0,1]");
    return Threshold::at(v);
}

json to_json(const ValueReport& r) {
    return {{"total_value", r.total_value},
            {"mean_value", r.mean_value},
            {"acceptance_rate", r.acceptance_rate},
            {"accepted_correct", r.accepted_correct},
            {"accepted_wrong", r.accepted_wrong},
            {"rejected", r.rejected},
            {"rejected_ungrouped", r.rejected_ungrouped}};
}

json to_json(const ExpectedValueReport& r) {
    return {{"total_expected", r.total_expected}, {"mean_expected", r.mean_expected}, {"rho_t", r.rho_t}};
}

json to_json(const CalibrationReport& r) {
    return {{"ece", r.ece},
            {"scheme", {{"kind", to_string(r.scheme.kind)}, {"bins", r.scheme.bins}}},
            {"value_gap", r.value_gap},
            {"value_gap_at_t_empirical", r.value_gap_at_t_empirical},
            {"t_analytic", to_json(r.t_analytic)},
            {"t_empirical", to_json(r.t_empirical)},
            {"threshold_divergence", r.threshold_divergence},
            {"value_at_t_analytic", r.value_at_t_analytic},
            {"value_at_t_empirical", r.value_at_t_empirical}};
}

json to_json(const GroupReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"group", row.group},
                        {"count", row.count},
                        {"value_gap", row.value_gap},
                        {"best_threshold", to_json(row.best_threshold)},
                        {"best_mean_value", row.best_mean_value},
                        {"trusted", row.trusted}});
    }
    return {{"rows", rows}, {"ungrouped", r.ungrouped}, {"epsilon", r.epsilon}, {"min_group_size", r.min_group_size}};
}

json to_json(const TemperatureModel& m) {
    return {{"temperature", m.temperature}, {"fit_nll", m.fit_nll}, {"iterations", m.iterations}};
}

json to_json(const SimulationResult& r) {
    return {{"replications", r.replications},
            {"n", r.n},
            {"mean_total_value", r.mean_total_value},
            {"std_total_value", r.std_total_value},
            {"baseline_value", r.baseline_value},
            {"mean_advantage", r.mean_advantage},
            {"mean_item_value", r.mean_item_value()},
            {"per_replication", r.per_replication}};
}

json to_json(const ReliabilityTable& t) {
    json rows = json::array();
    for (const auto& b : t.bins) {
        rows.push_back({{"lower", b.lower},
                        {"upper", b.upper},
                        {"count", b.count},
                        {"mean_confidence", b.mean_confidence ? json(*b.mean_confidence) : json(nullptr)},
                        {"accuracy", b.accuracy ? json(*b.accuracy) : json(nullptr)}});
    }
    return {{"scheme", {{"kind", to_string(t.scheme.kind)}, {"bins", t.scheme.bins}}}, {"rows", rows}};
}

json to_json(const ReportDocument& doc) {
    json j;
    j["schema"] = kReportSchema;
    j["schema_version"] = kReportSchemaVersion;
    j["tool_version"] = kVersion;
    j["command"] = doc.command;
    j["parameters"] = doc.parameters;
    if (!doc.deterministic) j["generated_at"] = utc_timestamp();
    if (doc.input_digest) j["input_digest"] = *doc.input_digest;
    if (doc.calibration) j["calibration"] = to_json(*doc.calibration);
    if (!doc.value_reports.empty()) {
        json values = json::object();
        for (const auto& [name, report] : doc.value_reports) values[name] = to_json(report);
        j["value_reports"] = values;
    }
    if (doc.expected) j["expected"] = to_json(*doc.expected);
    if (doc.groups) j["groups"] = to_json(*doc.groups);
    if (doc.temperature) j["temperature"] = to_json(*doc.temperature);
    if (doc.simulation) j["simulation"] = to_json(*doc.simulation);
    if (!doc.notes.empty()) j["notes"] = doc.notes;
    return j;
}

std::string to_markdown(const ReportDocument& doc) {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(to_json(doc), "", rows);
    std::ostringstream out;
    out << "# rejgate " << doc.command << " report\n\n";
    out << "| field | value |\n|---|---|\n";
    for (const auto& [k, v] : rows) out << "| " << k << " | " << v << " |\n";
    return out.str();
}

std::string render_report(const ReportDocument& doc, ReportFormat format) {
    if (format == ReportFormat::markdown) return to_markdown(doc);
    return to_json(doc).dump(2) + "\n";
}

void write_report(const ReportDocument& doc, const fs::path& path, ReportFormat format) {
    write_file_atomic(path, render_report(doc, format));
}

std::string render_curve(const ValueCurve& curve) {
    std::ostringstream out;
    out << "threshold,deployed_mean_value,expected_mean_value,acceptance_rate\n";
    for (const auto& row : curve.rows) {
        out << row.threshold.to_string() << ',' << format_double(row.deployed_mean_value) << ','
            << format_double(row.expected_mean_value) << ',' << format_double(row.acceptance_rate) << '\n';
    }
    return out.str();
}

void write_curve(const ValueCurve& curve, const fs::path& path) {
    if (curve.rows.empty()) throw InvalidArgument("empty value curve");
    write_file_atomic(path, render_curve(curve));
}

ValueCurve parse_curve(std::istream& in) {
    const auto rows = read_csv(in);
    if (rows.empty()) throw DataError("missing curve header");
    const std::vector<std::string> expected{"threshold", "deployed_mean_value", "expected_mean_value",
                                            "acceptance_rate"};
    if (rows.front().fields != expected) throw DataError("unexpected curve header");
    ValueCurve curve;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r].fields;
        if (f.size() != 4) throw DataError(where(rows[r].line) + "expected 4 fields");
        ValueCurveRow row;
        try {
            row.threshold = Threshold::parse(trim(f[0]));
        } catch (const InvalidArgument& e) {
            throw DataError(where(rows[r].line) + e.what());
        }
        const auto a = parse_decimal(f[1]);
        const auto b = parse_decimal(f[2]);
        const auto c = parse_decimal(f[3]);
        if (!a || !b || !c) throw DataError(where(rows[r].line) + "cannot parse curve values");
        row.deployed_mean_value = *a;
        row.expected_mean_value = *b;
        row.acceptance_rate = *c;
        curve.rows.push_back(row);
    }
    return curve;
}

ValueCurve read_curve(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    return parse_curve(in);
}

json rejector_to_json(const RejectorSpec& spec) {
    json thresholds = json::object();
    for (const auto& [g, t] : spec.group_thresholds) thresholds[g] = to_json(t);
    const double k = spec.cost_k();
    return {{"format", kRejectorFormat},
            {"version", kRejectorVersion},
            {"kind", to_string(spec.kind)},
            {"global_threshold", to_json(spec.global_threshold)},
            {"group_thresholds", thresholds},
            {"trusted_groups", spec.trusted_groups},
            {"cost_k", std::isfinite(k) ? json(k) : json(nullptr)},
            {"cost", {{"v", spec.cost.v()}, {"c_d", spec.cost.c_d()}, {"c_w", spec.cost.c_w()}}},
            {"fit_metadata",
             {{"dataset_size", spec.fit_metadata.dataset_size},
              {"epsilon", spec.fit_metadata.epsilon},
              {"min_group_size", spec.fit_metadata.min_group_size},
              {"fallback_groups", spec.fit_metadata.fallback_groups},
              {"degenerate", spec.fit_metadata.degenerate}}}};
}

RejectorSpec rejector_from_json(const json& j) {
    try {
        if (!j.is_object()) throw DataError("rejector document must be a json object");
        if (j.value("format", std::string{}) != kRejectorFormat) throw DataError("not a rejector document");
        if (!j.contains("version") || !j["version"].is_number_integer() ||
            j["version"].get<int>() != kRejectorVersion) {
            throw DataError("unsupported spec version");
        }
        RejectorSpec spec;
        spec.kind = parse_rejector_kind(j.at("kind").get<std::string>());
        spec.global_threshold = threshold_from_json(j.at("global_threshold"));
        for (const auto& [g, t] : j.at("group_thresholds").items()) {
            spec.group_thresholds.emplace(g, threshold_from_json(t));
        }
        for (const auto& g : j.at("trusted_groups")) spec.trusted_groups.insert(g.get<std::string>());
        if (j.contains("cost")) {
            const auto& c = j["cost"];
            spec.cost = CostModel(c.at("v").get<double>(), c.at("c_d").get<double>(), c.at("c_w").get<double>());
        } else {
            spec.cost = CostModel::from_k(j.at("cost_k").get<double>());
        }
        const auto& m = j.at("fit_metadata");
        spec.fit_metadata.dataset_size = m.at("dataset_size").get<std::size_t>();
        spec.fit_metadata.epsilon = m.at("epsilon").get<double>();
        spec.fit_metadata.min_group_size = m.at("min_group_size").get<std::size_t>();
        spec.fit_metadata.fallback_groups = m.value("fallback_groups", std::vector<std::string>{});
        spec.fit_metadata.degenerate = m.at("degenerate").get<bool>();
        return spec;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed rejector document: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw DataError(std::string("malformed rejector document: ") + e.what());
    }
}

void save_rejector(const RejectorSpec& spec, const fs::path& path) {
    write_file_atomic(path, rejector_to_json(spec).dump(2) + "\n");
}

RejectorSpec load_rejector(const fs::path& path) { return rejector_from_json(read_json_file(path)); }

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + path.string() + "'");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError("cannot write '" + path.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw DataError("cannot write '" + path.string() + "'");
    }
}

}  // namespace rejgate
