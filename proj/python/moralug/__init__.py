"""Python access to the moralug solver and estimator.

Results are plain dicts shaped like the CLI's JSON output.
"""

from ._moralug import (
    SCHEMA_VERSION,
    NumericError,
    dg_transfer,
    estimate,
    icl,
    nash_set,
    nec,
    predict_behavior,
    simulate_choices,
    solve,
)

__all__ = [
    "SCHEMA_VERSION",
    "NumericError",
    "dg_transfer",
    "estimate",
    "icl",
    "nash_set",
    "nec",
    "predict_behavior",
    "simulate_choices",
    "solve",
]
