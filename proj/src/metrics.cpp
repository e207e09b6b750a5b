#include "rejgate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rejgate/error.hpp"

namespace rejgate {

namespace {

// Gate value computed from outcome counts. Every candidate in the sweep and
// every value_at_* field in the report goes through this one formula, so equal
// partitions compare exactly equal.
double counts_mean(std::size_t accepted_correct, std::size_t accepted_wrong, std::size_t rejected,
                   const CostModel& cost, std::size_t n) {
    const double total = static_cast<double>(accepted_correct) * cost.v() +
                         static_cast<double>(accepted_wrong) * cost.c_w() +
                         static_cast<double>(rejected) * cost.c_d();
    return total / static_cast<double>(n);
}

double counts_mean(const ValueReport& r, const CostModel& cost) {
    return counts_mean(r.accepted_correct, r.accepted_wrong, r.rejected, cost, r.n());
}

}  // namespace

std::string to_string(BinningKind kind) {
    return kind == BinningKind::equal_width ? "equal_width" : "equal_mass";
}

BinningKind parse_binning_kind(const std::string& text) {
    if (text == "equal_width") return BinningKind::equal_width;
    if (text == "equal_mass") return BinningKind::equal_mass;
    throw InvalidArgument("unknown binning scheme '" + text + "'");
}

ReliabilityTable reliability_table(const Dataset& d, const BinningScheme& scheme) {
    if (scheme.bins == 0) throw InvalidArgument("bins must be >= 1");
    require_nonempty(d);

    ReliabilityTable table;
    table.scheme = scheme;

    auto finish = [](ReliabilityBin& bin, double conf_sum, std::size_t correct) {
        if (bin.count == 0) return;
        const auto c = static_cast<double>(bin.count);
        bin.mean_confidence = conf_sum / c;
        bin.accuracy = static_cast<double>(correct) / c;
    };

    if (scheme.kind == BinningKind::equal_width) {
        const std::size_t b = scheme.bins;
        table.bins.resize(b);
        std::vector<double> conf_sum(b, 0.0);
        std::vector<std::size_t> correct(b, 0);
        for (std::size_t i = 0; i < b; ++i) {
            table.bins[i].lower = static_cast<double>(i) / static_cast<double>(b);
            table.bins[i].upper = static_cast<double>(i + 1) / static_cast<double>(b);
        }
        for (const auto& rec : d.records) {
            auto idx = static_cast<std::size_t>(rec.confidence * static_cast<double>(b));
            idx = std::min(idx, b - 1);
            ++table.bins[idx].count;
            conf_sum[idx] += rec.confidence;
            if (rec.correct) ++correct[idx];
        }
        for (std::size_t i = 0; i < b; ++i) finish(table.bins[i], conf_sum[i], correct[i]);
        return table;
    }

    // equal_mass
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d.records[a].confidence < d.records[b].confidence;
    });
    const std::size_t n = d.size();
    const std::size_t b = std::min(scheme.bins, n);
    table.bins.reserve(b);
    for (std::size_t i = 0; i < b; ++i) {
        const std::size_t lo = i * n / b;
        const std::size_t hi = (i + 1) * n / b;
        ReliabilityBin bin;
        bin.lower = d.records[order[lo]].confidence;
        bin.upper = d.records[order[hi - 1]].confidence;
        bin.count = hi - lo;
        double conf_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t j = lo; j < hi; ++j) {
            conf_sum += d.records[order[j]].confidence;
            if (d.records[order[j]].correct) ++correct;
        }
        finish(bin, conf_sum, correct);
        table.bins.push_back(bin);
    }
    return table;
}

double ece(const Dataset& d, const BinningScheme& scheme) {
    const auto table = reliability_table(d, scheme);
    const auto n = static_cast<double>(d.size());
    double total = 0.0;
    for (const auto& bin : table.bins) {
        if (bin.count == 0) continue;
        total += (static_cast<double>(bin.count) / n) * std::abs(*bin.accuracy - *bin.mean_confidence);
    }
    return total;
}

double value_gap(const Dataset& d, const CostModel& cost, const Threshold& t) {
    const auto expected = expected_value(d, cost, t);
    const auto deployed = deployed_value(d, cost, t);
    return std::abs(expected.mean_expected - deployed.mean_value);
}

double value_gap_standard_error(const Dataset& d, const CostModel& cost, const Threshold& t) {
    require_nonempty(d);
    double var = 0.0;
    for (const auto& rec : d.records) {
        if (t.accepts(rec.confidence)) var += rec.confidence * (1.0 - rec.confidence);
    }
    return (cost.v() - cost.c_w()) * std::sqrt(var) / static_cast<double>(d.size());
}

ValueCurve value_curve(const Dataset& d, const CostModel& cost) {
    require_nonempty(d);
    const std::size_t n = d.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d.records[a].confidence < d.records[b].confidence;
    });

    // Distinct confidences ascending, with the start offset of each run.
    struct Run {
        double confidence;
        std::size_t begin;
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = d.records[order[i]].confidence;
        if (runs.empty() || c != runs.back().confidence) runs.push_back({c, i});
    }

    // Suffix tallies: accepting everything from sorted position i onwards.
    std::vector<std::size_t> suffix_correct(n + 1, 0);
    std::vector<double> suffix_expected(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        const auto& rec = d.records[order[i]];
        suffix_correct[i] = suffix_correct[i + 1] + (rec.correct ? 1 : 0);
        suffix_expected[i] =
            suffix_expected[i + 1] + rec.confidence * cost.v() + (1.0 - rec.confidence) * cost.c_w();
    }

    const auto nd = static_cast<double>(n);
    auto row_from = [&](Threshold t, std::size_t first_accepted) {
        const std::size_t accepted = n - first_accepted;
        const std::size_t ac = suffix_correct[first_accepted];
        ValueCurveRow row;
        row.threshold = t;
        row.deployed_mean_value = counts_mean(ac, accepted - ac, first_accepted, cost, n);
        row.expected_mean_value =
            (suffix_expected[first_accepted] + static_cast<double>(first_accepted) * cost.c_d()) / nd;
        row.acceptance_rate = static_cast<double>(accepted) / nd;
        return row;
    };

    ValueCurve curve;
    curve.rows.reserve(runs.size() + 2);
    if (runs.front().confidence != 0.0) curve.rows.push_back(row_from(Threshold::at(0.0), 0));
    for (const auto& run : runs) curve.rows.push_back(row_from(Threshold::at(run.confidence), run.begin));
    curve.rows.push_back(row_from(Threshold::reject_all(), n));
    return curve;
}

ThresholdFit empirical_threshold(const Dataset& d, const CostModel& cost) {
    const auto curve = value_curve(d, cost);
    ThresholdFit best{curve.rows.front().threshold, curve.rows.front().deployed_mean_value};
    for (const auto& row : curve.rows) {
        if (row.deployed_mean_value > best.mean_value) {
            best = {row.threshold, row.deployed_mean_value};
        }
    }
    return best;
}

double threshold_divergence(const Dataset& d, const CostModel& cost) {
    const auto fit = empirical_threshold(d, cost);
    return std::abs(optimal_threshold(cost).position() - fit.threshold.position());
}

CalibrationReport full_report(const Dataset& d, const CostModel& cost, const BinningScheme& scheme) {
    CalibrationReport r;
    r.scheme = scheme;
    r.ece = ece(d, scheme);
    r.t_analytic = optimal_threshold(cost);
    r.t_empirical = empirical_threshold(d, cost).threshold;
    r.threshold_divergence = std::abs(r.t_analytic.position() - r.t_empirical.position());
    r.value_gap = value_gap(d, cost, r.t_analytic);
    r.value_gap_at_t_empirical = value_gap(d, cost, r.t_empirical);
    r.value_at_t_analytic = counts_mean(deployed_value(d, cost, r.t_analytic), cost);
    r.value_at_t_empirical = counts_mean(deployed_value(d, cost, r.t_empirical), cost);
    return r;
}

}  // namespace rejgate
