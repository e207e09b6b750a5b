#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rejgate/cost_core.hpp"
#include "rejgate/metrics.hpp"

namespace rejgate {

enum class RejectorKind { global, per_group, trusted_subset };

std::string to_string(RejectorKind kind);
RejectorKind parse_rejector_kind(const std::string& text);

enum class Decision { accept, reject };

inline constexpr double kDefaultEpsilon = 0.05;
inline constexpr std::size_t kDefaultMinGroupSize = 30;

struct FitMetadata {
    std::size_t dataset_size = 0;
    double epsilon = kDefaultEpsilon;
    std::size_t min_group_size = kDefaultMinGroupSize;
    /// Groups too small for their own threshold; they use the global one.
    std::vector<std::string> fallback_groups;
    /// trusted_subset with no trusted group: rejects everything.
    bool degenerate = false;
};

/// Serializable accept/reject policy.
///
/// global: confidence >= global_threshold.
/// per_group: the group's own threshold, global_threshold for groups without one.
/// trusted_subset: groups outside trusted_groups are rejected outright; trusted
///   groups use their group threshold (or global_threshold if they lack one).
/// Under both grouped kinds a record without a group tag is rejected.
struct RejectorSpec {
    RejectorKind kind = RejectorKind::global;
    Threshold global_threshold = Threshold::reject_all();
    std::map<std::string, Threshold> group_thresholds;
    std::set<std::string> trusted_groups;
    CostModel cost = CostModel::from_k(3.0);
    FitMetadata fit_metadata;

    double cost_k() const noexcept { return cost.k(); }
};

struct GroupRow {
    std::string group;
    std::size_t count = 0;
    double value_gap = 0.0;
    Threshold best_threshold = Threshold::reject_all();
    double best_mean_value = 0.0;
    bool trusted = false;
};

struct GroupReport {
    /// Sorted by group tag.
    std::vector<GroupRow> rows;
    /// Records without a group tag; excluded from every row.
    std::size_t ungrouped = 0;
    double epsilon = kDefaultEpsilon;
    std::size_t min_group_size = kDefaultMinGroupSize;
};

RejectorSpec fit_global(const Dataset& d, const CostModel& cost);

/// Empirical threshold per group with at least min_group_size records; the
/// global threshold (fit on all records) covers the rest.
RejectorSpec fit_per_group(const Dataset& d, const CostModel& cost,
                           std::size_t min_group_size = kDefaultMinGroupSize);

/// Marks a group trusted iff count >= min_group_size and its value gap at the
/// analytic threshold is <= epsilon.
GroupReport identify_trusted_subsets(const Dataset& d, const CostModel& cost,
                                     double epsilon = kDefaultEpsilon,
                                     std::size_t min_group_size = kDefaultMinGroupSize);

/// trusted_subset spec: trusted groups keep their empirical thresholds, all
/// other groups are rejected.
RejectorSpec fit_trusted_subset(const Dataset& d, const CostModel& cost,
                                double epsilon = kDefaultEpsilon,
                                std::size_t min_group_size = kDefaultMinGroupSize);

Decision apply(const RejectorSpec& spec, const PredictionRecord& r) noexcept;

/// Gate accounting with the spec's decisions; rows rejected for lacking a group
/// tag are also counted in rejected_ungrouped.
ValueReport evaluate(const RejectorSpec& spec, const Dataset& d, const CostModel& cost);

}  // namespace rejgate
