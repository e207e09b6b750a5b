#pragma once

// Shared fixtures and brute-force oracles. Oracles here deliberately avoid the
// library's sweep machinery: they enumerate items one at a time.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rejgate/cost_core.hpp"

namespace rejgate::testing {

inline PredictionRecord rec(std::string id, double c, bool correct) {
    PredictionRecord r;
    r.id = std::move(id);
    r.confidence = c;
    r.correct = correct;
    return r;
}

inline PredictionRecord grouped(std::string id, double c, bool correct, std::string group) {
    auto r = rec(std::move(id), c, correct);
    r.group = std::move(group);
    return r;
}

// {(0.9,correct),(0.6,wrong),(0.7,correct),(0.2,wrong)}
inline Dataset d4() {
    return Dataset{{rec("a", 0.9, true), rec("b", 0.6, false), rec("c", 0.7, true), rec("d", 0.2, false)}};
}

inline Dataset repeat(double c, bool correct, std::size_t count, const std::string& prefix = "r") {
    Dataset d;
    for (std::size_t i = 0; i < count; ++i) d.records.push_back(rec(prefix + std::to_string(i), c, correct));
    return d;
}

inline Dataset concat(Dataset a, const Dataset& b) {
    a.records.insert(a.records.end(), b.records.begin(), b.records.end());
    return a;
}

// Small random dataset with confidences on a coarse grid so ties are common.
inline Dataset random_small(std::mt19937_64& rng, std::size_t max_n) {
    std::uniform_int_distribution<std::size_t> size(1, max_n);
    std::uniform_int_distribution<int> level(0, 20);
    std::bernoulli_distribution coin(0.5);
    Dataset d;
    const auto n = size(rng);
    for (std::size_t i = 0; i < n; ++i) {
        d.records.push_back(rec("x" + std::to_string(i), level(rng) / 20.0, coin(rng)));
    }
    return d;
}

// Cost models whose utilities are exactly representable, so sums are exact.
inline CostModel random_dyadic_cost(std::mt19937_64& rng) {
    static const double ks[] = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 9.0, 0.25};
    std::uniform_int_distribution<int> pick(0, 7);
    return CostModel::from_k(ks[pick(rng)]);
}

// Per-item enumeration of the gate, independent of deployed_value.
struct OracleTally {
    double total = 0.0;
    std::size_t accepted_correct = 0;
    std::size_t accepted_wrong = 0;
    std::size_t rejected = 0;
};

inline OracleTally oracle_tally(const Dataset& d, const CostModel& cost, bool reject_all, double t) {
    OracleTally out;
    for (const auto& r : d.records) {
        const bool accept = !reject_all && r.confidence >= t;
        if (!accept) {
            out.total += cost.c_d();
            ++out.rejected;
        } else if (r.correct) {
            out.total += cost.v();
            ++out.accepted_correct;
        } else {
            out.total += cost.c_w();
            ++out.accepted_wrong;
        }
    }
    return out;
}

inline double oracle_mean(const Dataset& d, const CostModel& cost, bool reject_all, double t) {
    return oracle_tally(d, cost, reject_all, t).total / static_cast<double>(d.size());
}

template <class T>
T median(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / T(2);
}

}  // namespace rejgate::testing
