#include "rejgate/rejector.hpp"

#include "rejgate/error.hpp"

namespace rejgate {

namespace {

struct Partition {
    std::map<std::string, Dataset> groups;
    std::size_t ungrouped = 0;
};

Partition partition_by_group(const Dataset& d) {
    Partition p;
    for (const auto& rec : d.records) {
        if (rec.group) {
            p.groups[*rec.group].records.push_back(rec);
        } else {
            ++p.ungrouped;
        }
    }
    if (p.groups.empty()) throw DataError("grouping required");
    return p;
}

}  // namespace

std::string to_string(RejectorKind kind) {
    switch (kind) {
        case RejectorKind::global: return "global";
        case RejectorKind::per_group: return "per_group";
        case RejectorKind::trusted_subset: return "trusted_subset";
    }
    return "global";
}

RejectorKind parse_rejector_kind(const std::string& text) {
    if (text == "global") return RejectorKind::global;
    if (text == "per_group") return RejectorKind::per_group;
    if (text == "trusted_subset") return RejectorKind::trusted_subset;
    throw DataError("unknown rejector kind '" + text + "'");
}

RejectorSpec fit_global(const Dataset& d, const CostModel& cost) {
    RejectorSpec spec;
    spec.kind = RejectorKind::global;
    spec.global_threshold = empirical_threshold(d, cost).threshold;
    spec.cost = cost;
    spec.fit_metadata.dataset_size = d.size();
    return spec;
}

RejectorSpec fit_per_group(const Dataset& d, const CostModel& cost, std::size_t min_group_size) {
    require_nonempty(d);
    const auto parts = partition_by_group(d);

    RejectorSpec spec = fit_global(d, cost);
    spec.kind = RejectorKind::per_group;
    spec.fit_metadata.min_group_size = min_group_size;
    for (const auto& [tag, members] : parts.groups) {
        if (members.size() >= min_group_size) {
            spec.group_thresholds.emplace(tag, empirical_threshold(members, cost).threshold);
        } else {
            spec.fit_metadata.fallback_groups.push_back(tag);
        }
    }
    return spec;
}

GroupReport identify_trusted_subsets(const Dataset& d, const CostModel& cost, double epsilon,
                                     std::size_t min_group_size) {
    if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
    require_nonempty(d);
    const auto parts = partition_by_group(d);
    const auto t_analytic = optimal_threshold(cost);

    GroupReport report;
    report.ungrouped = parts.ungrouped;
    report.epsilon = epsilon;
    report.min_group_size = min_group_size;
    for (const auto& [tag, members] : parts.groups) {
        GroupRow row;
        row.group = tag;
        row.count = members.size();
        row.value_gap = value_gap(members, cost, t_analytic);
        const auto fit = empirical_threshold(members, cost);
        row.best_threshold = fit.threshold;
        row.best_mean_value = fit.mean_value;
        row.trusted = row.count >= min_group_size && row.value_gap <= epsilon;
        report.rows.push_back(std::move(row));
    }
    return report;
}

RejectorSpec fit_trusted_subset(const Dataset& d, const CostModel& cost, double epsilon,
                                std::size_t min_group_size) {
    const auto report = identify_trusted_subsets(d, cost, epsilon, min_group_size);

    RejectorSpec spec = fit_global(d, cost);
    spec.kind = RejectorKind::trusted_subset;
    spec.fit_metadata.epsilon = epsilon;
    spec.fit_metadata.min_group_size = min_group_size;
    for (const auto& row : report.rows) {
        if (!row.trusted) continue;
        spec.trusted_groups.insert(row.group);
        spec.group_thresholds.emplace(row.group, row.best_threshold);
    }
    spec.fit_metadata.degenerate = spec.trusted_groups.empty();
    return spec;
}

Decision apply(const RejectorSpec& spec, const PredictionRecord& r) noexcept {
    const Threshold* t = &spec.global_threshold;
    if (spec.kind != RejectorKind::global) {
        if (!r.group) return Decision::reject;
        if (spec.kind == RejectorKind::trusted_subset && !spec.trusted_groups.contains(*r.group)) {
            return Decision::reject;
        }
        if (auto it = spec.group_thresholds.find(*r.group); it != spec.group_thresholds.end()) {
            t = &it->second;
        }
    }
    return t->accepts(r.confidence) ? Decision::accept : Decision::reject;
}

ValueReport evaluate(const RejectorSpec& spec, const Dataset& d, const CostModel& cost) {
    require_nonempty(d);
    ValueReport r;
    for (const auto& rec : d.records) {
        if (apply(spec, rec) == Decision::reject) {
            r.total_value += cost.c_d();
            ++r.rejected;
            if (spec.kind != RejectorKind::global && !rec.group) ++r.rejected_ungrouped;
        } else if (rec.correct) {
            r.total_value += cost.v();
            ++r.accepted_correct;
        } else {
            r.total_value += cost.c_w();
            ++r.accepted_wrong;
        }
    }
    const auto n = static_cast<double>(d.size());
    r.mean_value = r.total_value / n;
    r.acceptance_rate = static_cast<double>(r.accepted_correct + r.accepted_wrong) / n;
    return r;
}

}  // namespace rejgate
