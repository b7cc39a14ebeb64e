from __future__ import annotations

import itertools
import json

import numpy as np
import pytest

from fpdms.core import FiniteMetricSpace


def cofactor_magnitude(d):
    """Independent oracle: sum of cofactors of zeta divided by its determinant."""
    z = np.exp(-np.asarray(d, dtype=float))
    n = len(z)
    det = np.linalg.det(z)
    total = 0.0
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(z, i, axis=0), j, axis=1)
            cof = (-1) ** (i + j) * (np.linalg.det(minor) if n > 1 else 1.0)
            total += cof
    return total / det


def brute_force_gh(X: FiniteMetricSpace, Xp: FiniteMetricSpace):
    """Plain enumeration of every (f, g), in the same mixed-radix order."""
    d, dp = X.d, Xp.d
    n, m = X.n, Xp.n
    best, arg = np.inf, None
    for f in itertools.product(range(m), repeat=n):
        fa = np.array(f)
        dis_f = np.abs(d - dp[np.ix_(fa, fa)]).max()
        for g in itertools.product(range(n), repeat=m):
            ga = np.array(g)
            val = max(dis_f, np.abs(d[np.ix_(ga, ga)] - dp).max(), np.abs(d[:, ga] - dp[fa, :]).max())
            if val < best:
                best, arg = val, (f, g)
    return 0.5 * best, arg


def random_metric(rng, n, lo=1.0, hi=2.0):
    # distances in [lo, 2 lo] always satisfy the triangle inequality
    a = rng.uniform(lo, hi, size=(n, n))
    d = np.triu(a, 1)
    d = d + d.T
    return FiniteMetricSpace(d)


@pytest.fixture
def write_json(tmp_path):
    def _write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return _write


ACCEPTANCE_LINES: list[str] = []


def acceptance_line(number: int, ok: bool, detail: str) -> str:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
