#pragma once

#include <cstddef>

#include "rejgate/cost_core.hpp"

namespace rejgate {

struct TemperatureModel {
    double temperature = 1.0;
    /// Mean NLL of the recalibrated confidences on the fitting data.
    double fit_nll = 0.0;
    std::size_t iterations = 0;
};

struct TemperatureSearch {
    double min_temperature = 0.05;
    double max_temperature = 20.0;
    /// Absolute tolerance on ln(temperature).
    double tolerance = 1e-4;
    std::size_t max_iterations = 200;
};

inline constexpr double kProbabilityClamp = 1e-12;

double sigmoid(double x) noexcept;

/// Mean binary negative log-likelihood of the confidences against
/// correctness, with probabilities clamped to [1e-12, 1 - 1e-12].
double nll(const Dataset& d);

/// NLL of sigmoid(logit / temperature). Requires logits on every record.
double temperature_nll(const Dataset& d, double temperature);

/// Fits the single temperature minimizing temperature_nll by golden-section
/// search over ln(temperature). The identity temperature wins whenever the
/// search does not beat it.
TemperatureModel fit_temperature(const Dataset& d, const TemperatureSearch& search = {});

/// Copy of d with confidence = sigmoid(logit / temperature).
Dataset apply_temperature(const Dataset& d, const TemperatureModel& m);

}  // namespace rejgate
