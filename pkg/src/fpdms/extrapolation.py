"""Richardson extrapolation for sequences with an even expansion in the step."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def richardson_table(values: Sequence[float], ratio: float = 2.0, powers: Sequence[int] | None = None):
    """Full Richardson table for ``values[j] = f(h0 / ratio**j)``.

    ``powers`` are the exponents of the error terms to eliminate, in order;
    by default ``2, 4, 6, ...`` (expansions even in ``h``).  Row ``m`` of the
    returned list holds the estimates after eliminating ``m`` terms; its last
    entry uses the ``m + 1`` finest values.
    """
    vals = [float(v) for v in values]
    n = len(vals)
    if n < 1:
        raise ValueError("need at least one value")
    if powers is None:
        powers = [2 * (m + 1) for m in range(n - 1)]
    table = [vals]
    for m in range(1, n):
        prev = table[-1]
        f = ratio ** powers[m - 1]
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1.0) for i in range(len(prev) - 1)])
    return table


def richardson_extrapolate(values: Sequence[float], ratio: float = 2.0, order: int | None = None) -> float:
    """Limit estimate eliminating ``order`` even error terms (default: as many as possible)."""
    table = richardson_table(values, ratio)
    order = len(values) - 1 if order is None else order
    return table[order][-1]


def observed_order(errors: Sequence[float], ratio: float = 2.0) -> np.ndarray:
    """Convergence orders ``log(e_j / e_{j+1}) / log(ratio)`` between successive levels."""
    e = np.abs(np.asarray(errors, dtype=float))
    return np.log(e[:-1] / e[1:]) / np.log(ratio)
