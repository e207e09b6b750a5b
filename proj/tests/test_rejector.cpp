#include "doctest.h"

#include <random>

#include "rejgate/error.hpp"
#include "rejgate/rejector.hpp"
#include "rejgate/simulate.hpp"
#include "support.hpp"

using namespace rejgate;
using namespace rejgate::testing;

namespace {

Dataset tag(Dataset d, const std::string& group) {
    for (auto& r : d.records) {
        r.group = group;
        r.id = group + "-" + r.id;
    }
    return d;
}

Dataset ab_fixture() {
    auto a = tag(generate_calibrated({100, 2.0, 2.0, std::nullopt, 0.99, 5}), "A");
    auto b = tag(repeat(0.9, false, 100), "B");
    return concat(a, b);
}

}  // namespace

TEST_CASE("fit_global examples") {
    const auto cost = CostModel::from_k(3.0);
    const auto spec = fit_global(d4(), cost);
    CHECK(spec.kind == RejectorKind::global);
    CHECK(spec.global_threshold == Threshold::at(0.7));
    CHECK(spec.cost_k() == 3.0);
    CHECK(spec.fit_metadata.dataset_size == 4);
    CHECK(fit_global(repeat(0.8, false, 6), cost).global_threshold.is_reject_all());
    CHECK(fit_global(repeat(1.0, true, 6), cost).global_threshold == Threshold::at(0.0));
    CHECK_THROWS_AS(fit_global(Dataset{}, cost), DataError);
}

TEST_CASE("fit_per_group examples") {
    const auto cost = CostModel::from_k(3.0);
    const auto d = ab_fixture();
    const auto spec = fit_per_group(d, cost, 30);
    REQUIRE(spec.group_thresholds.contains("A"));
    REQUIRE(spec.group_thresholds.contains("B"));
    CHECK_FALSE(spec.group_thresholds.at("A").is_reject_all());
    CHECK(spec.group_thresholds.at("B").is_reject_all());
    CHECK(evaluate(spec, d, cost).mean_value >= evaluate(fit_global(d, cost), d, cost).mean_value);

    // a single group behaves like the global rejector
    const auto single = tag(generate_calibrated({200, 2.0, 2.0, std::nullopt, 0.99, 9}), "only");
    const auto pg = fit_per_group(single, cost, 30);
    const auto gl = fit_global(single, cost);
    for (const auto& r : single.records) CHECK(apply(pg, r) == apply(gl, r));

    // small groups fall back to the global threshold
    auto small = concat(tag(repeat(0.9, false, 5), "tiny"), tag(generate_calibrated({100, 2.0, 2.0, std::nullopt, 0.99, 1}), "big"));
    const auto fb = fit_per_group(small, cost, 30);
    CHECK_FALSE(fb.group_thresholds.contains("tiny"));
    REQUIRE(fb.fit_metadata.fallback_groups.size() == 1);
    CHECK(fb.fit_metadata.fallback_groups[0] == "tiny");
    auto probe = grouped("p", 0.95, true, "tiny");
    CHECK(apply(fb, probe) == (fb.global_threshold.accepts(0.95) ? Decision::accept : Decision::reject));

    CHECK_THROWS_WITH_AS(fit_per_group(d4(), cost, 30), "grouping required", DataError);
}

TEST_CASE("identify_trusted_subsets separates calibrated from distorted groups") {
    const auto cost = CostModel::from_k(3.0);
    auto cal = tag(generate_calibrated({5000, 2.0, 2.0, std::nullopt, 0.99, 21}), "calibrated");
    auto dist = tag(generate_distorted({5000, 2.0, 2.0, std::nullopt, 0.99, 22}, {4.0, 0.0}), "distorted");
    auto d = concat(dist, cal);
    d.records.push_back(rec("loose", 0.9, true));  // ungrouped

    const auto report = identify_trusted_subsets(d, cost, 0.05, 30);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].group == "calibrated");  // lexicographic
    CHECK(report.rows[0].trusted);
    CHECK(report.rows[1].group == "distorted");
    CHECK_FALSE(report.rows[1].trusted);
    CHECK(report.rows[0].count + report.rows[1].count + report.ungrouped == d.size());
    CHECK(report.ungrouped == 1);

    // size gate dominates the gap
    const auto gated = identify_trusted_subsets(d, cost, 10.0, 6000);
    for (const auto& row : gated.rows) CHECK_FALSE(row.trusted);

    CHECK_THROWS_AS(identify_trusted_subsets(d4(), cost), DataError);
    CHECK_THROWS_AS(identify_trusted_subsets(d, cost, -0.1), InvalidArgument);
}

TEST_CASE("apply examples") {
    RejectorSpec global;
    global.global_threshold = Threshold::at(0.7);
    CHECK(apply(global, rec("x", 0.7, true)) == Decision::accept);
    CHECK(apply(global, rec("x", 0.69, true)) == Decision::reject);

    RejectorSpec trusted;
    trusted.kind = RejectorKind::trusted_subset;
    trusted.global_threshold = Threshold::at(0.0);
    trusted.trusted_groups = {"A"};
    trusted.group_thresholds = {{"A", Threshold::at(0.4)}};
    CHECK(apply(trusted, grouped("b", 0.99, true, "B")) == Decision::reject);
    CHECK(apply(trusted, grouped("a", 0.5, true, "A")) == Decision::accept);
    CHECK(apply(trusted, rec("none", 0.99, true)) == Decision::reject);

    RejectorSpec per_group;
    per_group.kind = RejectorKind::per_group;
    per_group.global_threshold = Threshold::at(0.5);
    per_group.group_thresholds = {{"A", Threshold::at(0.9)}};
    CHECK(apply(per_group, grouped("u", 0.6, false, "unseen")) == Decision::accept);
    CHECK(apply(per_group, grouped("a", 0.6, false, "A")) == Decision::reject);
    CHECK(apply(per_group, rec("none", 0.99, true)) == Decision::reject);
}

TEST_CASE("evaluate examples") {
    const auto cost = CostModel::from_k(3.0);
    CHECK(evaluate(fit_global(d4(), cost), d4(), cost).mean_value == 0.0);

    RejectorSpec none;
    none.global_threshold = Threshold::reject_all();
    CHECK(evaluate(none, d4(), cost).mean_value == cost.c_d());

    RejectorSpec grouped_spec;
    grouped_spec.kind = RejectorKind::per_group;
    grouped_spec.global_threshold = Threshold::at(0.0);
    const auto r = evaluate(grouped_spec, concat(d4(), Dataset{{grouped("g", 0.9, true, "G")}}), cost);
    CHECK(r.rejected_ungrouped == 4);
    CHECK(r.accepted_correct == 1);
    CHECK_THROWS_AS(evaluate(none, Dataset{}, cost), DataError);
}

TEST_CASE("in-sample dominance of fitted rejectors") {
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<int> groups(1, 3);
    for (int trial = 0; trial < 300; ++trial) {
        auto d = random_small(rng, 12);
        const int g = groups(rng);
        for (std::size_t i = 0; i < d.size(); ++i) d.records[i].group = "g" + std::to_string(i % g);
        const auto cost = random_dyadic_cost(rng);
        const auto global = evaluate(fit_global(d, cost), d, cost).mean_value;
        const auto per_group = evaluate(fit_per_group(d, cost, 1), d, cost).mean_value;
        CHECK(per_group >= global);
        CHECK(global >= deployed_value(d, cost, optimal_threshold(cost)).mean_value);
    }
}

TEST_CASE("apply is deterministic") {
    const auto cost = CostModel::from_k(3.0);
    const auto d = ab_fixture();
    const auto spec = fit_trusted_subset(d, cost, 0.05, 30);
    for (const auto& r : d.records) {
        const auto first = apply(spec, r);
        for (int i = 0; i < 3; ++i) CHECK(apply(spec, r) == first);
    }
}

TEST_CASE("fit_trusted_subset with no trusted group rejects everything") {
    const auto cost = CostModel::from_k(3.0);
    auto d = tag(generate_distorted({3000, 2.0, 2.0, std::nullopt, 0.99, 4}, {4.0, 0.0}), "bad");
    const auto spec = fit_trusted_subset(d, cost, 0.05, 30);
    CHECK(spec.trusted_groups.empty());
    CHECK(spec.fit_metadata.degenerate);
    CHECK(evaluate(spec, d, cost).acceptance_rate == 0.0);
}
