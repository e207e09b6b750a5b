#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rejgate/cost_core.hpp"

namespace rejgate {

enum class BinningKind { equal_width, equal_mass };

std::string to_string(BinningKind kind);
BinningKind parse_binning_kind(const std::string& text);

struct BinningScheme {
    BinningKind kind = BinningKind::equal_width;
    std::size_t bins = 15;
};

struct ReliabilityBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    // Unset for empty bins.
    std::optional<double> mean_confidence;
    std::optional<double> accuracy;
};

struct ReliabilityTable {
    BinningScheme scheme;
    std::vector<ReliabilityBin> bins;
};

struct ThresholdFit {
    Threshold threshold = Threshold::reject_all();
    double mean_value = 0.0;
};

struct ValueCurveRow {
    Threshold threshold = Threshold::reject_all();
    double deployed_mean_value = 0.0;
    double expected_mean_value = 0.0;
    double acceptance_rate = 0.0;
};

/// Gate statistics at every candidate threshold, ascending, REJECT_ALL last.
struct ValueCurve {
    std::vector<ValueCurveRow> rows;
};

struct CalibrationReport {
    double ece = 0.0;
    BinningScheme scheme;
    /// Per-item |expected - deployed| at the analytic threshold.
    double value_gap = 0.0;
    /// Same gap measured at the empirical threshold.
    double value_gap_at_t_empirical = 0.0;
    Threshold t_analytic = Threshold::reject_all();
    Threshold t_empirical = Threshold::reject_all();
    double threshold_divergence = 0.0;
    double value_at_t_analytic = 0.0;
    double value_at_t_empirical = 0.0;
};

/// Bins records by confidence.
///
/// Equal-width bins are [i/B, (i+1)/B) with the last bin closed at 1 and are
/// all emitted, empty ones included. Equal-mass bins split the confidence-
/// sorted sample into min(B, n) contiguous chunks whose sizes differ by at
/// most one; their bounds are the smallest and largest confidence inside.
ReliabilityTable reliability_table(const Dataset& d, const BinningScheme& scheme);

/// Expected calibration error: sum over nonempty bins of
/// (count/n) * |accuracy - mean_confidence|.
double ece(const Dataset& d, const BinningScheme& scheme);

/// |mean expected value - mean deployed value| at threshold t.
double value_gap(const Dataset& d, const CostModel& cost, const Threshold& t);

/// Standard error of the per-item value gap if the confidences were calibrated:
/// (v - c_w) * sqrt(sum over accepted of c(1-c)) / n.
double value_gap_standard_error(const Dataset& d, const CostModel& cost, const Threshold& t);

/// Threshold maximizing deployed mean value over {0} U {distinct confidences}
/// U {REJECT_ALL}. Ties resolve to the smallest threshold.
ThresholdFit empirical_threshold(const Dataset& d, const CostModel& cost);

/// |optimal_threshold - empirical_threshold|, REJECT_ALL counted as 1.
double threshold_divergence(const Dataset& d, const CostModel& cost);

ValueCurve value_curve(const Dataset& d, const CostModel& cost);

CalibrationReport full_report(const Dataset& d, const CostModel& cost,
                              const BinningScheme& scheme = {});

}  // namespace rejgate
