#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rejgate {

/// Utilities of the three outcomes of a gated prediction.
///
/// `v` is earned by an accepted correct prediction, `c_w` by an accepted
/// wrong one and `c_d` by routing the item to the default path. The
/// normalized model fixes v = 1, c_d = -1 and c_w = -k.
class CostModel {
public:
    /// General triple; requires v > c_d and c_w < v, all finite.
    CostModel(double v, double c_d, double c_w);

    /// Normalized model from the severity ratio k > 0.
    static CostModel from_k(double k);

    double v() const noexcept { return v_; }
    double c_d() const noexcept { return c_d_; }
    double c_w() const noexcept { return c_w_; }

    /// Severity ratio c_w / c_d. For c_d == 0 the ratio is undefined and
    /// NaN is returned.
    double k() const noexcept;

    friend bool operator==(const CostModel&, const CostModel&) = default;

private:
    double v_;
    double c_d_;
    double c_w_;
};

/// Accept/reject cut on confidence. Accepts when confidence >= value; the
/// REJECT_ALL sentinel accepts nothing, not even confidence 1.
class Threshold {
public:
    /// Requires 0 <= value <= 1.
    static Threshold at(double value);
    static Threshold reject_all() noexcept { return Threshold{}; }

    bool is_reject_all() const noexcept { return !value_.has_value(); }

    /// Numeric cut; throws InvalidArgument for REJECT_ALL.
    double value() const;

    /// Numeric position used for distances and ordering: REJECT_ALL maps to 1.
    double position() const noexcept { return value_.value_or(1.0); }

    bool accepts(double confidence) const noexcept {
        return value_.has_value() && confidence >= *value_;
    }

    /// "REJECT_ALL" or the shortest round-trip decimal of the value.
    std::string to_string() const;

    /// Inverse of to_string.
    static Threshold parse(const std::string& text);

    friend bool operator==(const Threshold&, const Threshold&) = default;
    // REJECT_ALL orders after every numeric threshold, including 1.0.
    friend std::strong_ordering operator<=>(const Threshold& a, const Threshold& b) noexcept;

private:
    Threshold() = default;
    explicit Threshold(double v) : value_(v) {}

    std::optional<double> value_;
};

/// One classifier output: the confidence of the predicted class and whether
/// that prediction was right.
struct PredictionRecord {
    std::string id;
    double confidence = 0.0;
    bool correct = false;
    std::optional<std::string> group;
    std::optional<double> logit;
    /// Unknown input columns, carried through untouched.
    std::map<std::string, std::string> extra;
};

/// Ordered prediction log. Ids may repeat; accounting is per row.
struct Dataset {
    std::vector<PredictionRecord> records;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }
};

/// Realized value of running the gate over a labeled dataset.
struct ValueReport {
    double total_value = 0.0;
    double mean_value = 0.0;
    double acceptance_rate = 0.0;
    std::size_t accepted_correct = 0;
    std::size_t accepted_wrong = 0;
    std::size_t rejected = 0;
    /// Rows rejected only because a grouped rejector found no group tag.
    std::size_t rejected_ungrouped = 0;

    std::size_t n() const noexcept { return accepted_correct + accepted_wrong + rejected; }
};

/// Value the model's own confidences predict for the gate.
struct ExpectedValueReport {
    double total_expected = 0.0;
    double mean_expected = 0.0;
    /// Fraction of confidences below the threshold.
    double rho_t = 0.0;
};

/// Confidence at which accepting and rejecting have equal expected value,
/// (c_d - c_w) / (v - c_w), clamped into [0, 1]. Equals (k-1)/(k+1) for the
/// normalized model.
Threshold optimal_threshold(const CostModel& cost);

/// Realized utility of one record behind the gate.
double item_value(const PredictionRecord& record, const CostModel& cost, const Threshold& t);

/// Utility the confidence predicts: c_d when rejected, otherwise
/// confidence * v + (1 - confidence) * c_w.
double item_expected_value(double confidence, const CostModel& cost, const Threshold& t);

ValueReport deployed_value(const Dataset& d, const CostModel& cost, const Threshold& t);

ExpectedValueReport expected_value(const Dataset& d, const CostModel& cost, const Threshold& t);

/// Throws DataError("empty dataset") when d has no records.
void require_nonempty(const Dataset& d);

}  // namespace rejgate
