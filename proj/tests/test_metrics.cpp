#include "doctest.h"

#include <cmath>
#include <random>

#include "rejgate/error.hpp"
#include "rejgate/metrics.hpp"
#include "rejgate/simulate.hpp"
#include "support.hpp"

using namespace rejgate;
using namespace rejgate::testing;

namespace {

// Hand-rolled ECE over equal-width bins, straight from the definition.
double oracle_ece_equal_width(const Dataset& d, std::size_t bins) {
    std::vector<double> conf(bins, 0.0), acc(bins, 0.0), cnt(bins, 0.0);
    for (const auto& r : d.records) {
        std::size_t b = 0;
        while (b + 1 < bins && r.confidence >= static_cast<double>(b + 1) / static_cast<double>(bins)) ++b;
        conf[b] += r.confidence;
        acc[b] += r.correct ? 1.0 : 0.0;
        cnt[b] += 1.0;
    }
    double e = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        if (cnt[b] == 0.0) continue;
        e += cnt[b] / static_cast<double>(d.size()) * std::abs(acc[b] / cnt[b] - conf[b] / cnt[b]);
    }
    return e;
}

}  // namespace

TEST_CASE("reliability_table examples") {
    Dataset d = concat(repeat(0.8, true, 80), repeat(0.8, false, 20, "w"));
    const auto table = reliability_table(d, {BinningKind::equal_width, 10});
    REQUIRE(table.bins.size() == 10);
    std::size_t nonempty = 0;
    for (const auto& b : table.bins) {
        if (b.count == 0) {
            CHECK_FALSE(b.mean_confidence.has_value());
            CHECK_FALSE(b.accuracy.has_value());
            continue;
        }
        ++nonempty;
        CHECK(b.count == 100);
        CHECK(*b.mean_confidence == doctest::Approx(0.8));
        CHECK(*b.accuracy == doctest::Approx(0.8));
    }
    CHECK(nonempty == 1);

    const auto mass = reliability_table(d4(), {BinningKind::equal_mass, 2});
    REQUIRE(mass.bins.size() == 2);
    CHECK(mass.bins[0].lower == 0.2);
    CHECK(mass.bins[0].upper == 0.6);
    CHECK(mass.bins[0].count == 2);
    CHECK(mass.bins[1].lower == 0.7);
    CHECK(mass.bins[1].upper == 0.9);
    CHECK(mass.bins[1].count == 2);

    // bins > n degrades to one item per bin
    CHECK(reliability_table(d4(), {BinningKind::equal_mass, 50}).bins.size() == 4);

    CHECK_THROWS_AS(reliability_table(Dataset{}, {}), DataError);
    CHECK_THROWS_AS(reliability_table(d4(), {BinningKind::equal_width, 0}), InvalidArgument);
}

TEST_CASE("reliability tables partition the sample") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = random_small(rng, 40);
        for (auto kind : {BinningKind::equal_width, BinningKind::equal_mass}) {
            const auto table = reliability_table(d, {kind, 7});
            std::size_t total = 0;
            for (const auto& b : table.bins) {
                total += b.count;
                if (b.count > 0) {
                    CHECK(*b.accuracy >= 0.0);
                    CHECK(*b.accuracy <= 1.0);
                    CHECK(*b.mean_confidence >= b.lower - 1e-12);
                    CHECK(*b.mean_confidence <= b.upper + 1e-12);
                }
            }
            CHECK(total == d.size());
        }
    }
}

TEST_CASE("ece examples") {
    Dataset matched = concat(repeat(0.8, true, 80), repeat(0.8, false, 20, "w"));
    CHECK(ece(matched, {BinningKind::equal_width, 10}) == doctest::Approx(0.0));

    Dataset mixed = concat(concat(repeat(0.9, true, 35), repeat(0.9, false, 15, "a")),
                           concat(repeat(0.6, true, 30, "b"), repeat(0.6, false, 20, "c")));
    CHECK(ece(mixed, {BinningKind::equal_width, 10}) == doctest::Approx(0.1));

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        auto d = random_small(rng, 30);
        const double before = ece(d, {});
        CHECK(before == doctest::Approx(oracle_ece_equal_width(d, 15)).epsilon(1e-12));
        std::shuffle(d.records.begin(), d.records.end(), rng);
        for (auto& r : d.records) r.id = "renamed-" + r.id;
        CHECK(ece(d, {}) == doctest::Approx(before).epsilon(1e-12));
        CHECK(ece(d, {BinningKind::equal_mass, 5}) >= 0.0);
        CHECK(ece(d, {BinningKind::equal_mass, 5}) <= 1.0);
    }
}

TEST_CASE("value_gap examples") {
    const auto cost = CostModel::from_k(3.0);
    CHECK(value_gap(repeat(1.0, true, 10), cost, Threshold::at(0.5)) == 0.0);
    CHECK(value_gap(repeat(1.0, true, 10), cost, Threshold::at(1.0)) == 0.0);
    CHECK(value_gap(d4(), cost, Threshold::at(0.5)) == doctest::Approx(0.2));
    CHECK_THROWS_AS(value_gap(Dataset{}, cost, Threshold::at(0.5)), DataError);

    // Deterministic correctness (c in {0,1} matching the outcome) has no gap.
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = random_small(rng, 20);
        for (auto& r : d.records) r.confidence = r.correct ? 1.0 : 0.0;
        CHECK(value_gap(d, CostModel::from_k(2.0), Threshold::at(0.3)) == doctest::Approx(0.0));
    }
}

TEST_CASE("value_gap on calibrated synthetic data is sampling noise") {
    const auto cost = CostModel::from_k(3.0);
    const auto t = Threshold::at(0.5);
    const auto d = generate_calibrated({100000, 2.0, 2.0, std::nullopt, 0.99, 7});
    CHECK(value_gap(d, cost, t) <= 3.0 * value_gap_standard_error(d, cost, t));
}

TEST_CASE("empirical_threshold examples") {
    const auto cost = CostModel::from_k(3.0);
    const auto fit = empirical_threshold(d4(), cost);
    CHECK(fit.threshold == Threshold::at(0.7));
    CHECK(fit.mean_value == 0.0);

    const auto ones = empirical_threshold(repeat(1.0, true, 5), cost);
    CHECK(ones.threshold == Threshold::at(0.0));
    CHECK(ones.mean_value == 1.0);

    const auto wrong = empirical_threshold(concat(repeat(0.9, false, 3), repeat(0.3, false, 2, "w")), cost);
    CHECK(wrong.threshold.is_reject_all());
    CHECK(wrong.mean_value == -1.0);

    CHECK_THROWS_AS(empirical_threshold(Dataset{}, cost), DataError);
}

TEST_CASE("empirical_threshold dominates every candidate and every grid point") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const auto d = random_small(rng, 15);
        const auto cost = random_dyadic_cost(rng);
        const auto fit = empirical_threshold(d, cost);
        for (const auto& r : d.records) CHECK(oracle_mean(d, cost, false, r.confidence) <= fit.mean_value);
        CHECK(oracle_mean(d, cost, true, 0.0) <= fit.mean_value);
        for (int g = 0; g <= 200; ++g) CHECK(oracle_mean(d, cost, false, g / 200.0) <= fit.mean_value);
        CHECK(oracle_mean(d, cost, fit.threshold.is_reject_all(), fit.threshold.position()) == fit.mean_value);
    }
}

TEST_CASE("threshold_divergence examples") {
    const auto cost = CostModel::from_k(3.0);
    CHECK(threshold_divergence(d4(), cost) == doctest::Approx(0.2));
    CHECK(threshold_divergence(Dataset{{rec("one", 1.0, true)}}, cost) == doctest::Approx(0.5));
    // REJECT_ALL counts as 1
    CHECK(threshold_divergence(repeat(0.9, false, 4), cost) == doctest::Approx(0.5));
    CHECK_THROWS_AS(threshold_divergence(Dataset{}, cost), DataError);

    const auto calibrated = generate_calibrated({100000, 2.0, 2.0, std::nullopt, 0.99, 7});
    CHECK(threshold_divergence(calibrated, cost) <= 0.05);
}

TEST_CASE("value_curve examples") {
    const auto cost = CostModel::from_k(3.0);
    const auto curve = value_curve(d4(), cost);
    REQUIRE(curve.rows.size() == 6);
    const double expected_values[] = {-1.0, -1.0, -0.5, 0.0, -0.5, -1.0};
    const double thresholds[] = {0.0, 0.2, 0.6, 0.7, 0.9};
    for (std::size_t i = 0; i < 6; ++i) CHECK(curve.rows[i].deployed_mean_value == expected_values[i]);
    for (std::size_t i = 0; i < 5; ++i) CHECK(curve.rows[i].threshold == Threshold::at(thresholds[i]));
    CHECK(curve.rows.back().threshold.is_reject_all());

    const auto all = deployed_value(d4(), cost, Threshold::at(0.0));
    CHECK(curve.rows[0].deployed_mean_value == doctest::Approx(all.mean_value));
    CHECK(curve.rows[0].acceptance_rate == 1.0);
    CHECK(curve.rows[0].expected_mean_value ==
          doctest::Approx(expected_value(d4(), cost, Threshold::at(0.0)).mean_expected));

    const auto single = value_curve(Dataset{{rec("s", 0.4, true)}}, cost);
    REQUIRE(single.rows.size() == 3);
    CHECK(single.rows[1].threshold == Threshold::at(0.4));

    // confidence 0 merges with the 0.0 candidate
    CHECK(value_curve(Dataset{{rec("z", 0.0, false)}}, cost).rows.size() == 2);
}

TEST_CASE("the gate is piecewise constant between distinct confidences") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        auto d = random_small(rng, 30);
        for (auto& r : d.records) r.confidence = std::round(u(rng) * 1000.0) / 1000.0;
        const auto cost = random_dyadic_cost(rng);
        const auto curve = value_curve(d, cost);
        for (int i = 0; i < 1000; ++i) {
            const double tp = u(rng);
            // smallest candidate >= tp (REJECT_ALL if tp exceeds every confidence)
            const ValueCurveRow* row = &curve.rows.back();
            for (const auto& r : curve.rows) {
                if (!r.threshold.is_reject_all() && r.threshold.value() >= tp) {
                    row = &r;
                    break;
                }
            }
            const auto direct = deployed_value(d, cost, Threshold::at(tp));
            CHECK(direct.mean_value == doctest::Approx(row->deployed_mean_value).epsilon(1e-12));
            CHECK(direct.acceptance_rate == row->acceptance_rate);
        }
    }
}

TEST_CASE("full_report examples") {
    const auto cost = CostModel::from_k(3.0);
    const auto r = full_report(d4(), cost, {BinningKind::equal_width, 10});
    CHECK(r.t_analytic == Threshold::at(0.5));
    CHECK(r.t_empirical == Threshold::at(0.7));
    CHECK(r.threshold_divergence == doctest::Approx(0.2));
    CHECK(r.value_gap == doctest::Approx(0.2));
    CHECK(r.value_at_t_analytic == -0.5);
    CHECK(r.value_at_t_empirical == 0.0);

    const auto ones = full_report(repeat(1.0, true, 8), cost);
    CHECK(ones.ece == 0.0);
    CHECK(ones.value_gap == 0.0);
    CHECK(ones.threshold_divergence == doctest::Approx(0.5));
    CHECK(ones.value_at_t_analytic == ones.value_at_t_empirical);

    CHECK_THROWS_AS(full_report(Dataset{}, cost), DataError);
    CHECK(full_report(d4(), cost).scheme.bins == 15);
}

TEST_CASE("report value at the empirical threshold dominates the analytic one in-sample") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        auto d = random_small(rng, 25);
        for (auto& r : d.records) r.confidence = u(rng);
        const CostModel cost(1.0 + u(rng), -u(rng), -1.0 - 4.0 * u(rng));
        const auto r = full_report(d, cost);
        CHECK(r.value_at_t_empirical >= r.value_at_t_analytic);
    }
}

TEST_CASE("value_gap shrinks with sample size on calibrated data") {
    const auto cost = CostModel::from_k(3.0);
    const auto t = Threshold::at(0.5);
    std::vector<double> small, large;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        small.push_back(value_gap(generate_calibrated({1000, 2.0, 2.0, std::nullopt, 0.99, seed}), cost, t));
        large.push_back(value_gap(generate_calibrated({100000, 2.0, 2.0, std::nullopt, 0.99, seed + 100}), cost, t));
    }
    CHECK(median(large) < median(small));
}

TEST_CASE("misalignment grows with distortion strength") {
    const auto cost = CostModel::from_k(3.0);
    const auto t = optimal_threshold(cost);
    double prev_gap = -1.0;
    double prev_div = -1.0;
    for (double gamma : {1.0, 2.0, 4.0}) {
        std::vector<double> gaps, divs;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto d = generate_distorted({10000, 2.0, 2.0, std::nullopt, 0.99, seed}, {gamma, 0.0});
            gaps.push_back(value_gap(d, cost, t));
            divs.push_back(threshold_divergence(d, cost));
        }
        CHECK(median(gaps) >= prev_gap);
        CHECK(median(divs) >= prev_div);
        prev_gap = median(gaps);
        prev_div = median(divs);
    }
}
