#include "rejgate/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "rejgate/error.hpp"
#include "rejgate/golden_section.hpp"

namespace rejgate {

namespace {

double record_nll(double p, bool correct) {
    p = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
    return correct ? -std::log(p) : -std::log1p(-p);
}

void require_logits(const Dataset& d) {
    for (const auto& rec : d.records) {
        if (!rec.logit) throw DataError("logits required");
    }
}

}  // namespace

double sigmoid(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double nll(const Dataset& d) {
    require_nonempty(d);
    double total = 0.0;
    for (const auto& rec : d.records) total += record_nll(rec.confidence, rec.correct);
    return total / static_cast<double>(d.size());
}

double temperature_nll(const Dataset& d, double temperature) {
    require_nonempty(d);
    require_logits(d);
    if (!(temperature > 0.0)) throw InvalidArgument("temperature must be > 0");
    double total = 0.0;
    for (const auto& rec : d.records) total += record_nll(sigmoid(*rec.logit / temperature), rec.correct);
    return total / static_cast<double>(d.size());
}

TemperatureModel fit_temperature(const Dataset& d, const TemperatureSearch& search) {
    require_nonempty(d);
    require_logits(d);
    if (!(search.min_temperature > 0.0 && search.min_temperature < search.max_temperature)) {
        throw InvalidArgument("temperature search interval must satisfy 0 < min < max");
    }
    const bool any_correct = std::any_of(d.records.begin(), d.records.end(),
                                         [](const auto& r) { return r.correct; });
    const bool any_wrong = std::any_of(d.records.begin(), d.records.end(),
                                       [](const auto& r) { return !r.correct; });
    if (!any_correct || !any_wrong) throw DataError("degenerate labels");

    auto objective = [&](double log_t) { return temperature_nll(d, std::exp(log_t)); };
    const double lo = std::log(search.min_temperature);
    const double hi = std::log(search.max_temperature);
    const auto best = golden_section_minimize(objective, lo, hi, search.tolerance, search.max_iterations);

    TemperatureModel m{std::exp(best.x), best.fx, best.iterations};
    if (lo <= 0.0 && 0.0 <= hi) {
        const double identity = objective(0.0);
        if (identity < m.fit_nll) m = {1.0, identity, best.iterations};
    }
    return m;
}

Dataset apply_temperature(const Dataset& d, const TemperatureModel& m) {
    require_logits(d);
    if (!(m.temperature > 0.0)) throw InvalidArgument("temperature must be > 0");
    Dataset out = d;
    for (auto& rec : out.records) rec.confidence = sigmoid(*rec.logit / m.temperature);
    return out;
}

}  // namespace rejgate
