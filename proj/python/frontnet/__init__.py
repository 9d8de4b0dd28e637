"""Feedback-control front propagation: problems, schemes, metrics.

The heavy lifting lives in the compiled extension ``frontnet._core``. This
package re-exports it and adds small conveniences that are easier to keep in
Python.
"""

import math

from ._core import (
    ConfigError,
    ErrorStats,
    NumericError,
    Policy,
    Problem,
    compute_errors,
    oracle_field,
    reference_grid,
    train,
    value_field,
    zero_contours,
)

__all__ = [
    "ConfigError",
    "ErrorStats",
    "NumericError",
    "Policy",
    "Problem",
    "compute_errors",
    "evaluate",
    "masked_errors",
    "oracle_field",
    "reference_grid",
    "train",
    "value_field",
    "zero_contours",
]

__version__ = "0.1.0"


def masked_errors(computed, reference, eta=0.1):
    """Error statistics over the cells where the reference is finite.

    Returns ``(stats, covered, total)``. Raises ``ValueError`` when no cell
    has a finite reference value.
    """
    if len(computed) != len(reference):
        raise ValueError("field sizes differ")
    pairs = [
        (c, r)
        for c, r in zip(computed, reference)
        if math.isfinite(r) and math.isfinite(c)
    ]
    if not pairs:
        raise ValueError("reference field is undefined everywhere")
    comp = [p[0] for p in pairs]
    ref = [p[1] for p in pairs]
    return compute_errors(comp, ref, eta), len(pairs), len(reference)


def evaluate(policy, problem, resolution=201, eta=0.1, t=0.0):
    """Train-time error report: V_0 of ``policy`` against the exact value.

    Oracle cells that are undefined (masked as NaN) are skipped, matching the
    command line evaluator. Returns ``(stats, covered, total)``.
    """
    vhat = value_field(policy, problem, 0, resolution)
    vref = oracle_field(problem, t, resolution)
    return masked_errors(vhat, vref, eta)
