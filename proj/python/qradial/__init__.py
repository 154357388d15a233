"""High-precision radial limits of periodic q-series.

Numbers come back as decimal or rational strings; feed them to mpmath or
fractions.Fraction when arithmetic is needed.
"""

import json

from ._core import (
    Error,
    InvalidArgument,
    bernoulli,
    classification,
    closed_form_limit,
    evaluate_at,
    lemma_limit,
    normalize_document,
    q_integral_power,
    run,
)

__all__ = [
    "Error",
    "InvalidArgument",
    "bernoulli",
    "classification",
    "closed_form_limit",
    "evaluate_at",
    "lemma_limit",
    "normalize_document",
    "q_integral_power",
    "report",
    "run",
]


def report(*args):
    """Run a command and parse its JSON report. Returns (exit_code, report)."""
    code, out, _ = run([str(a) for a in args])
    return code, (json.loads(out) if out else None)
