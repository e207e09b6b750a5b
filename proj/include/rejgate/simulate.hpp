#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rejgate/cost_core.hpp"

namespace rejgate {

struct SyntheticConfig {
    std::size_t n = 1000;
    double alpha = 2.0;
    double beta = 2.0;
    /// Fraction of rare high-confidence items; only read by
    /// generate_rare_high_confidence.
    std::optional<double> hc;
    double high_conf = 0.99;
    std::uint64_t seed = 0;
};

/// Logit-space distortion sigmoid(gamma * logit(p) + delta).
/// gamma > 1 is overconfident; (1, 0) is the identity.
struct DistortionParams {
    double gamma = 1.0;
    double delta = 0.0;
};

/// Standard-normal latent scores planted with a known temperature.
struct ScaledLogitConfig {
    std::size_t n = 1000;
    /// Standard deviation of the latent score z.
    double z_scale = 2.0;
    /// Stored logit = planted_temperature * z; correctness ~ Bernoulli(sigmoid(z)).
    double planted_temperature = 2.0;
    std::uint64_t seed = 0;
};

enum class ResampleMode {
    /// Outcome of each accepted item redrawn as Bernoulli(confidence).
    bernoulli_confidence,
    /// Records redrawn with replacement; their logged outcomes are kept.
    bootstrap,
    /// Logged outcomes as-is; every replication equals deployed_value.
    none,
};

struct SimulationResult {
    std::size_t replications = 0;
    double mean_total_value = 0.0;
    /// Sample standard deviation across replications (0 for one replication).
    double std_total_value = 0.0;
    double baseline_value = 0.0;
    double mean_advantage = 0.0;
    std::size_t n = 0;
    std::vector<double> per_replication;

    double mean_item_value() const noexcept {
        return n == 0 ? 0.0 : mean_total_value / static_cast<double>(n);
    }
};

/// Quantile of Beta(alpha, beta) at u, to 1e-10.
double beta_quantile(double alpha, double beta, double u);

/// c ~ Beta(alpha, beta), correct ~ Bernoulli(c), reported confidence c.
Dataset generate_calibrated(const SyntheticConfig& cfg);

/// p ~ Beta(alpha, beta), correct ~ Bernoulli(p), reported confidence
/// sigmoid(gamma * logit(p) + delta) with p clamped to [1e-9, 1 - 1e-9];
/// the logit field stores gamma * logit(p) + delta.
Dataset generate_distorted(const SyntheticConfig& cfg, const DistortionParams& dist);

/// With probability hc the item has confidence high_conf; otherwise its
/// confidence is Beta(alpha, beta) scaled into [0, 0.5]. Correctness is
/// Bernoulli(confidence) on both slices.
Dataset generate_rare_high_confidence(const SyntheticConfig& cfg);

Dataset generate_scaled_logits(const ScaledLogitConfig& cfg);

/// Monte Carlo replay of the gated workflow against the no-model baseline
/// n * c_d. Replication r draws from its own counter stream, so results do not
/// depend on evaluation order.
SimulationResult run_workflow(const Dataset& d, const CostModel& cost, const Threshold& t,
                              std::size_t replications, std::uint64_t seed,
                              ResampleMode mode = ResampleMode::bernoulli_confidence);

}  // namespace rejgate
