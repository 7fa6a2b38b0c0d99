"""Badge proximity interaction logs: preprocessing, validation and statistics."""

from ._core import (
    EventLog,
    apply_pipeline,
    classify,
    cohens_kappa,
    degrade,
    fit_logistic,
    format_edgelist,
    interpolate,
    min_duration_filter,
    read_edgelist,
    run_command,
    simulate_truth,
    sweep,
    table_metrics,
    triadic_closure,
)

__all__ = [
    "EventLog",
    "apply_pipeline",
    "classify",
    "cohens_kappa",
    "degrade",
    "fit_logistic",
    "format_edgelist",
    "interpolate",
    "min_duration_filter",
    "read_edgelist",
    "run_command",
    "simulate_truth",
    "sweep",
    "table_metrics",
    "triadic_closure",
]
