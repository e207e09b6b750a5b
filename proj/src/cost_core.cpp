#include "rejgate/cost_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "rejgate/error.hpp"

namespace rejgate {

CostModel::CostModel(double v, double c_d, double c_w) : v_(v), c_d_(c_d), c_w_(c_w) {
    if (!std::isfinite(v) || !std::isfinite(c_d) || !std::isfinite(c_w)) {
        throw InvalidArgument("cost model values must be finite");
    }
    if (!(v > c_d)) {
        throw InvalidArgument("cost model requires v > c_d");
    }
    if (!(c_w < v)) {
        throw InvalidArgument("cost model requires c_w < v");
    }
}

CostModel CostModel::from_k(double k) {
    if (!std::isfinite(k) || !(k > 0.0)) {
        throw InvalidArgument("severity ratio k must be > 0");
    }
    return CostModel(1.0, -1.0, -k);
}

double CostModel::k() const noexcept {
    if (c_d_ == 0.0) return std::nan("");
    return c_w_ / c_d_;
}

Threshold Threshold::at(double value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw InvalidArgument("threshold must lie in [0, 1]");
    }
    return Threshold(value);
}

double Threshold::value() const {
    if (!value_) throw InvalidArgument("REJECT_ALL has no numeric value");
    return *value_;
}

std::string Threshold::to_string() const {
    if (!value_) return "REJECT_ALL";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), *value_);
    return std::string(buf, res.ptr);
}

Threshold Threshold::parse(const std::string& text) {
    if (text == "REJECT_ALL") return reject_all();
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw InvalidArgument("cannot parse threshold '" + text + "'");
    }
    return at(v);
}

std::strong_ordering operator<=>(const Threshold& a, const Threshold& b) noexcept {
    if (a.is_reject_all() || b.is_reject_all()) {
        return a.is_reject_all() <=> b.is_reject_all();
    }
    // Values are validated into [0, 1], never NaN.
    if (*a.value_ < *b.value_) return std::strong_ordering::less;
    if (*a.value_ > *b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Threshold optimal_threshold(const CostModel& cost) {
    const double raw = (cost.c_d() - cost.c_w()) / (cost.v() - cost.c_w());
    return Threshold::at(std::clamp(raw, 0.0, 1.0));
}

double item_value(const PredictionRecord& record, const CostModel& cost, const Threshold& t) {
    if (!t.accepts(record.confidence)) return cost.c_d();
    return record.correct ? cost.v() : cost.c_w();
}

double item_expected_value(double confidence, const CostModel& cost, const Threshold& t) {
    if (!t.accepts(confidence)) return cost.c_d();
    return confidence * cost.v() + (1.0 - confidence) * cost.c_w();
}

void require_nonempty(const Dataset& d) {
    if (d.empty()) throw DataError("empty dataset");
}

ValueReport deployed_value(const Dataset& d, const CostModel& cost, const Threshold& t) {
    require_nonempty(d);
    ValueReport r;
    for (const auto& rec : d.records) {
        r.total_value += item_value(rec, cost, t);
        if (!t.accepts(rec.confidence)) {
            ++r.rejected;
        } else if (rec.correct) {
            ++r.accepted_correct;
        } else {
            ++r.accepted_wrong;
        }
    }
    const auto n = static_cast<double>(d.size());
    r.mean_value = r.total_value / n;
    r.acceptance_rate = static_cast<double>(r.accepted_correct + r.accepted_wrong) / n;
    return r;
}

ExpectedValueReport expected_value(const Dataset& d, const CostModel& cost, const Threshold& t) {
    require_nonempty(d);
    ExpectedValueReport r;
    std::size_t below = 0;
    for (const auto& rec : d.records) {
        r.total_expected += item_expected_value(rec.confidence, cost, t);
        if (!t.accepts(rec.confidence)) ++below;
    }
    const auto n = static_cast<double>(d.size());
    r.mean_expected = r.total_expected / n;
    r.rho_t = static_cast<double>(below) / n;
    return r;
}

}  // namespace rejgate
