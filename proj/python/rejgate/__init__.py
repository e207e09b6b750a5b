"""Value-aligned evaluation of classifiers deployed behind a confidence rejection gate."""

from ._rejgate import (
    CostModel,
    DataError,
    Dataset,
    Error,
    InvalidArgument,
    Rejector,
    Threshold,
    __version__,
    apply_temperature,
    deployed_value,
    ece,
    empirical_threshold,
    expected_value,
    fit_global,
    fit_per_group,
    fit_temperature,
    fit_trusted_subset,
    full_report,
    generate_calibrated,
    generate_distorted,
    generate_rare_high_confidence,
    generate_scaled_logits,
    identify_trusted_subsets,
    load_dataset,
    nll,
    optimal_threshold,
    reliability_table,
    run_workflow,
    threshold_divergence,
    value_curve,
    value_gap,
    write_dataset,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
