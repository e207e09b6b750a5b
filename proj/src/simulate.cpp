#include "rejgate/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "rejgate/calibrate.hpp"
#include "rejgate/error.hpp"
#include "rejgate/random.hpp"

namespace rejgate {

namespace {

using TenDigits = boost::math::policies::policy<boost::math::policies::digits10<10>>;

constexpr double kLogitClamp = 1e-9;

void validate(const SyntheticConfig& cfg) {
    if (cfg.n == 0) throw InvalidArgument("n must be >= 1");
    if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0) || !std::isfinite(cfg.alpha) || !std::isfinite(cfg.beta)) {
        throw InvalidArgument("Beta shape parameters must be > 0");
    }
    if (cfg.hc && !(*cfg.hc >= 0.0 && *cfg.hc <= 1.0)) throw InvalidArgument("hc must lie in [0, 1]");
    if (!(cfg.high_conf >= 0.0 && cfg.high_conf <= 1.0)) throw InvalidArgument("high_conf must lie in [0, 1]");
}

std::string item_id(std::size_t i) { return "syn-" + std::to_string(i); }

}  // namespace

double beta_quantile(double alpha, double beta, double u) {
    return boost::math::ibeta_inv(alpha, beta, u, TenDigits());
}

Dataset generate_calibrated(const SyntheticConfig& cfg) {
    validate(cfg);
    const CounterUniform uniform(cfg.seed);
    Dataset d;
    d.records.resize(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        auto& rec = d.records[i];
        rec.id = item_id(i);
        rec.confidence = beta_quantile(cfg.alpha, cfg.beta, uniform(Stream::confidence, i));
        rec.correct = uniform(Stream::outcome, i) < rec.confidence;
    }
    return d;
}

Dataset generate_distorted(const SyntheticConfig& cfg, const DistortionParams& dist) {
    validate(cfg);
    if (!(dist.gamma > 0.0) || !std::isfinite(dist.gamma) || !std::isfinite(dist.delta)) {
        throw InvalidArgument("distortion requires finite gamma > 0 and finite delta");
    }
    const CounterUniform uniform(cfg.seed);
    Dataset d;
    d.records.resize(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        auto& rec = d.records[i];
        rec.id = item_id(i);
        const double p = beta_quantile(cfg.alpha, cfg.beta, uniform(Stream::confidence, i));
        rec.correct = uniform(Stream::outcome, i) < p;
        const double pc = std::clamp(p, kLogitClamp, 1.0 - kLogitClamp);
        const double z = dist.gamma * std::log(pc / (1.0 - pc)) + dist.delta;
        rec.logit = z;
        rec.confidence = sigmoid(z);
    }
    return d;
}

Dataset generate_rare_high_confidence(const SyntheticConfig& cfg) {
    validate(cfg);
    if (!cfg.hc) throw InvalidArgument("hc required for the rare high-confidence generator");
    const double hc = *cfg.hc;
    const CounterUniform uniform(cfg.seed);
    Dataset d;
    d.records.resize(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        auto& rec = d.records[i];
        rec.id = item_id(i);
        if (uniform(Stream::slice, i) < hc) {
            rec.confidence = cfg.high_conf;
        } else {
            rec.confidence = 0.5 * beta_quantile(cfg.alpha, cfg.beta, uniform(Stream::confidence, i));
        }
        rec.correct = uniform(Stream::outcome, i) < rec.confidence;
    }
    return d;
}

Dataset generate_scaled_logits(const ScaledLogitConfig& cfg) {
    if (cfg.n == 0) throw InvalidArgument("n must be >= 1");
    if (!(cfg.z_scale > 0.0) || !(cfg.planted_temperature > 0.0)) {
        throw InvalidArgument("z_scale and planted_temperature must be > 0");
    }
    const CounterUniform uniform(cfg.seed);
    const boost::math::normal_distribution<double> standard;
    Dataset d;
    d.records.resize(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        auto& rec = d.records[i];
        rec.id = item_id(i);
        const double z = cfg.z_scale * boost::math::quantile(standard, uniform(Stream::normal, i));
        rec.correct = uniform(Stream::outcome, i) < sigmoid(z);
        rec.logit = cfg.planted_temperature * z;
        rec.confidence = sigmoid(*rec.logit);
    }
    return d;
}

SimulationResult run_workflow(const Dataset& d, const CostModel& cost, const Threshold& t,
                              std::size_t replications, std::uint64_t seed, ResampleMode mode) {
    require_nonempty(d);
    if (replications == 0) throw InvalidArgument("replications must be >= 1");
    if (replications > UINT32_MAX) throw InvalidArgument("too many replications");

    const std::size_t n = d.size();
    const CounterUniform uniform(seed);

    auto outcome_value = [&](const PredictionRecord& rec, bool correct) {
        if (!t.accepts(rec.confidence)) return cost.c_d();
        return correct ? cost.v() : cost.c_w();
    };

    SimulationResult res;
    res.replications = replications;
    res.n = n;
    res.baseline_value = static_cast<double>(n) * cost.c_d();
    if (t.is_reject_all()) {
        res.per_replication.assign(replications, res.baseline_value);
        res.mean_total_value = res.baseline_value;
        return res;
    }
    res.per_replication.resize(replications);
    for (std::size_t r = 0; r < replications; ++r) {
        const auto slot = static_cast<std::uint32_t>(r);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            switch (mode) {
                case ResampleMode::none:
                    total += outcome_value(d.records[i], d.records[i].correct);
                    break;
                case ResampleMode::bernoulli_confidence: {
                    const auto& rec = d.records[i];
                    // Rejected items never consume their draw.
                    if (!t.accepts(rec.confidence)) {
                        total += cost.c_d();
                    } else {
                        total += outcome_value(rec, uniform(Stream::workflow, i, slot) < rec.confidence);
                    }
                    break;
                }
                case ResampleMode::bootstrap: {
                    const auto bits = uniform.bits(Stream::bootstrap, i, slot);
                    const auto j = static_cast<std::size_t>(
                        (static_cast<unsigned __int128>(bits) * n) >> 64);
                    total += outcome_value(d.records[j], d.records[j].correct);
                    break;
                }
            }
        }
        res.per_replication[r] = total;
    }

    double sum = 0.0;
    for (double v : res.per_replication) sum += v;
    res.mean_total_value = sum / static_cast<double>(replications);
    if (replications > 1) {
        double ss = 0.0;
        for (double v : res.per_replication) ss += (v - res.mean_total_value) * (v - res.mean_total_value);
        res.std_total_value = std::sqrt(ss / static_cast<double>(replications - 1));
    }
    res.mean_advantage = res.mean_total_value - res.baseline_value;
    return res;
}

}  // namespace rejgate
