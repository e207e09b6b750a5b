#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rejgate/calibrate.hpp"
#include "rejgate/cost_core.hpp"
#include "rejgate/metrics.hpp"
#include "rejgate/rejector.hpp"
#include "rejgate/simulate.hpp"

namespace rejgate {

enum class DatasetFormat { csv, jsonl };
enum class ReportFormat { json, markdown };

inline constexpr const char* kReportSchema = "rejgate.report";
inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kRejectorFormat = "rejgate.rejector";
inline constexpr int kRejectorVersion = 1;

DatasetFormat parse_dataset_format(const std::string& text);
/// .csv or .jsonl/.ndjson by extension.
DatasetFormat dataset_format_from_path(const std::filesystem::path& path);
ReportFormat parse_report_format(const std::string& text);

struct LoadOptions {
    std::string group_column = "group";
};

/// Reads a prediction log. Required columns are id, confidence and correct;
/// group (named by options.group_column) and logit are optional; any other
/// column lands in PredictionRecord::extra. CSV lines starting with '#' and
/// JSONL objects carrying a "_provenance" key are skipped.
Dataset parse_dataset(std::istream& in, DatasetFormat format, const LoadOptions& options = {});
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                     const LoadOptions& options = {});
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes a dataset readable by load_dataset. A non-null provenance object is
/// emitted as a leading '#' comment (csv) or a "_provenance" line (jsonl).
void write_dataset(const Dataset& d, const std::filesystem::path& path, DatasetFormat format,
                   const nlohmann::json& provenance = nullptr);

/// Hex SHA-256 of the file's bytes.
std::string file_digest(const std::filesystem::path& path);

/// Versioned result document shared by every CLI command.
struct ReportDocument {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::optional<std::string> input_digest;
    std::optional<CalibrationReport> calibration;
    std::vector<std::pair<std::string, ValueReport>> value_reports;
    std::optional<ExpectedValueReport> expected;
    std::optional<GroupReport> groups;
    std::optional<TemperatureModel> temperature;
    std::optional<SimulationResult> simulation;
    /// Free-form derived quantities (accuracy, NLL before/after, ...).
    nlohmann::json notes = nlohmann::json::object();
    /// Suppresses the timestamp so identical inputs give identical bytes.
    bool deterministic = false;
};

nlohmann::json to_json(const Threshold& t);
Threshold threshold_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ValueReport& r);
nlohmann::json to_json(const ExpectedValueReport& r);
nlohmann::json to_json(const CalibrationReport& r);
nlohmann::json to_json(const GroupReport& r);
nlohmann::json to_json(const TemperatureModel& m);
nlohmann::json to_json(const SimulationResult& r);
nlohmann::json to_json(const ReliabilityTable& t);
nlohmann::json to_json(const ReportDocument& doc);

/// Every leaf of the json document as a table row, numbers at 6 significant digits.
std::string to_markdown(const ReportDocument& doc);

/// Serialized report, byte-stable for the json format.
std::string render_report(const ReportDocument& doc, ReportFormat format);
void write_report(const ReportDocument& doc, const std::filesystem::path& path, ReportFormat format);

/// csv: threshold,deployed_mean_value,expected_mean_value,acceptance_rate.
std::string render_curve(const ValueCurve& curve);
void write_curve(const ValueCurve& curve, const std::filesystem::path& path);
ValueCurve parse_curve(std::istream& in);
ValueCurve read_curve(const std::filesystem::path& path);

nlohmann::json rejector_to_json(const RejectorSpec& spec);
/// Throws DataError("unsupported spec version") for unknown versions.
RejectorSpec rejector_from_json(const nlohmann::json& j);
void save_rejector(const RejectorSpec& spec, const std::filesystem::path& path);
/// Parse failures carry the byte offset of the error.
RejectorSpec load_rejector(const std::filesystem::path& path);

/// Writes content to a sibling temporary and renames it over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest decimal that round-trips the double.
std::string format_double(double v);

}  // namespace rejgate
