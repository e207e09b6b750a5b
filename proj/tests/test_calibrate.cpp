#include "doctest.h"

#include <cmath>

#include "rejgate/calibrate.hpp"
#include "rejgate/error.hpp"
#include "rejgate/golden_section.hpp"
#include "rejgate/metrics.hpp"
#include "rejgate/simulate.hpp"
#include "support.hpp"

using namespace rejgate;
using namespace rejgate::testing;

TEST_CASE("golden-section search finds interior and boundary minima") {
    const auto m = golden_section_minimize([](double x) { return (x - 1.3) * (x - 1.3); }, -4.0, 5.0, 1e-8, 500);
    CHECK(m.x == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(m.iterations > 0);
    const auto edge = golden_section_minimize([](double x) { return x; }, 0.0, 1.0, 1e-6, 500);
    CHECK(edge.x < 1e-5);
    const auto capped = golden_section_minimize([](double x) { return x * x; }, -1.0, 1.0, 1e-12, 3);
    CHECK(capped.iterations == 3);
    CHECK_THROWS_AS(golden_section_minimize([](double x) { return x; }, 1.0, 0.0, 1e-3, 10), InvalidArgument);
}

TEST_CASE("nll examples") {
    CHECK(nll(concat(repeat(0.5, true, 3), repeat(0.5, false, 4, "w"))) == doctest::Approx(std::log(2.0)));
    CHECK(nll(repeat(1.0, true, 5)) < 1e-11);
    CHECK(nll(Dataset{{rec("a", 0.8, true), rec("b", 0.8, false)}}) ==
          doctest::Approx((-std::log(0.8) - std::log(0.2)) / 2.0));
    // clamped, stays finite
    CHECK(std::isfinite(nll(repeat(1.0, false, 2))));
    CHECK_THROWS_AS(nll(Dataset{}), DataError);
}

TEST_CASE("apply_temperature examples") {
    Dataset d;
    for (double l : {-3.0, 0.0, 2.0, 5.0}) {
        auto r = rec("l", 0.5, true);
        r.logit = l;
        r.group = "g";
        d.records.push_back(r);
    }
    const auto identity = apply_temperature(d, {1.0, 0.0, 0});
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(identity.records[i].confidence == doctest::Approx(sigmoid(*d.records[i].logit)));
        CHECK(identity.records[i].logit == d.records[i].logit);
        CHECK(identity.records[i].group == d.records[i].group);
    }
    const auto hot = apply_temperature(d, {2.0, 0.0, 0});
    CHECK(hot.records[1].confidence == 0.5);
    CHECK(hot.records[2].confidence == doctest::Approx(0.731059).epsilon(1e-6));
    CHECK(d.records[2].confidence == 0.5);  // input untouched

    CHECK_THROWS_WITH_AS(apply_temperature(d4(), {1.0, 0.0, 0}), "logits required", DataError);
}

TEST_CASE("fit_temperature recovers a planted temperature") {
    const auto over = generate_scaled_logits({50000, 2.0, 2.0, 1});
    const auto m = fit_temperature(over);
    CHECK(m.temperature >= 1.9);
    CHECK(m.temperature <= 2.1);
    CHECK(m.fit_nll <= temperature_nll(over, 1.0) + 1e-9);
    CHECK(m.fit_nll <= temperature_nll(over, m.temperature * 1.01));
    CHECK(m.fit_nll <= temperature_nll(over, m.temperature * 0.99));
    CHECK(m.iterations <= 200);

    const auto calibrated = generate_scaled_logits({50000, 2.0, 1.0, 2});
    const auto c = fit_temperature(calibrated);
    CHECK(c.temperature >= 0.95);
    CHECK(c.temperature <= 1.05);
}

TEST_CASE("fit_temperature rejects unusable inputs") {
    CHECK_THROWS_WITH_AS(fit_temperature(d4()), "logits required", DataError);
    Dataset all_correct;
    for (int i = 0; i < 10; ++i) {
        auto r = rec("c", 0.7, true);
        r.logit = 0.1 * i;
        all_correct.records.push_back(r);
    }
    CHECK_THROWS_WITH_AS(fit_temperature(all_correct), "degenerate labels", DataError);
    for (auto& r : all_correct.records) r.correct = false;
    CHECK_THROWS_WITH_AS(fit_temperature(all_correct), "degenerate labels", DataError);
    CHECK_THROWS_AS(fit_temperature(Dataset{}), DataError);
}

TEST_CASE("recalibration preserves confidence order and accept sets") {
    const auto d = generate_distorted({2000, 2.0, 2.0, std::nullopt, 0.99, 3}, {2.0, 0.0});
    const TemperatureModel m{1.7, 0.0, 0};
    const auto out = apply_temperature(d, m);
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < std::min(d.size(), i + 20); ++j) {
            if (*d.records[i].logit < *d.records[j].logit) CHECK(out.records[i].confidence <= out.records[j].confidence);
        }
    }
    // Accept set after recalibration at t equals the accept set before at the
    // corresponding pre-image threshold.
    for (double t : {0.1, 0.3, 0.5, 0.8, 0.95}) {
        const double z = m.temperature * std::log(t / (1.0 - t));
        const double pre = sigmoid(z);
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const bool after = out.records[i].confidence >= t;
            const bool before = d.records[i].confidence >= pre;
            // Tolerate records sitting within rounding of the boundary.
            if (after != before && std::abs(*d.records[i].logit - z) > 1e-9) ++mismatches;
        }
        CHECK(mismatches == 0);
    }
}

TEST_CASE("recalibration reduces the value gap on overconfident data") {
    const auto cost = CostModel::from_k(3.0);
    const auto t = optimal_threshold(cost);
    std::vector<double> before, after;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto d = generate_distorted({10000, 2.0, 2.0, std::nullopt, 0.99, seed}, {2.0, 0.0});
        before.push_back(value_gap(d, cost, t));
        after.push_back(value_gap(apply_temperature(d, fit_temperature(d)), cost, t));
    }
    CHECK(median(after) <= median(before));
}
