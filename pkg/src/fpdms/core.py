"""Finite metric spaces, zeta matrices and the linear-algebra route to magnitude."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import FPDMSError, MetricError, NotPositiveDefiniteError, ParseError

# relative eigenvalue threshold for numerical positive definiteness
PD_TOL = 1e-10
METRIC_TOL = 1e-12


class IllConditionedWarning(UserWarning):
    """Positive-definiteness decision was within 10x of the tolerance."""


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _metric_violations(d, tol):
    out = []
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        return [f"matrix is not square (shape {d.shape})"]
    if not np.all(np.isfinite(d)):
        return ["matrix has non-finite entries"]
    n = d.shape[0]
    scale = max(1.0, float(np.abs(d).max(initial=0.0)))
    atol = tol * scale
    for i, j in zip(*np.nonzero(np.abs(d - d.T) > atol)):
        if i < j:
            out.append(f"asymmetry at ({i},{j}): {float(d[i, j])!r} != {float(d[j, i])!r}")
    for i in np.nonzero(d.diagonal() != 0)[0]:
        out.append(f"nonzero diagonal at {i}: {float(d[i, i])!r}")
    for i, j in zip(*np.nonzero(d < 0)):
        out.append(f"negative entry at ({i},{j}): {float(d[i, j])!r}")
    off = ~np.eye(n, dtype=bool)
    for i, j in zip(*np.nonzero((d == 0) & off)):
        if i < j:
            out.append(f"duplicate points {i} and {j} (zero distance)")
    if n >= 3:
        # excess[i, j, k] = d[i, k] - d[i, j] - d[j, k]
        excess = d[:, None, :] - d[:, :, None] - d[None, :, :]
        for i, j, k in zip(*np.nonzero(excess > atol)):
            if i < k and j != i and j != k:
                out.append(
                    f"triangle violation at ({i},{j},{k}): d[{i}][{k}]={float(d[i, k])!r} > "
                    f"d[{i}][{j}]+d[{j}][{k}]={float(d[i, j] + d[j, k])!r}"
                )
    return out


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A validated finite metric space with distinct points.

    Construction validates every axiom and raises :class:`MetricError`
    listing all violations at once.
    """

    d: np.ndarray
    tol: float = field(default=METRIC_TOL, repr=False, compare=False)

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        if d.ndim == 0:
            d = d.reshape(1, 1)
        violations = _metric_violations(d, self.tol)
        if violations:
            raise MetricError(violations)
        # exact symmetry downstream
        d = 0.5 * (d + d.T)
        object.__setattr__(self, "d", _readonly(d))

    @property
    def n(self) -> int:
        return self.d.shape[0]

    @property
    def diameter(self) -> float:
        return float(self.d.max(initial=0.0))

    @property
    def min_distance(self) -> float:
        """Smallest positive distance; infinite for a singleton."""
        if self.n < 2:
            return math.inf
        return float(self.d[~np.eye(self.n, dtype=bool)].min())

    def __eq__(self, other):
        return isinstance(other, FiniteMetricSpace) and np.array_equal(self.d, other.d)

    def __hash__(self):
        return hash(self.d.tobytes())

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d.tolist()}


def validate_metric(d, tol: float = METRIC_TOL) -> FiniteMetricSpace:
    """Validate a square matrix as a metric and return the space."""
    return FiniteMetricSpace(np.asarray(d, dtype=float), tol=tol)


def zeta(X: FiniteMetricSpace) -> np.ndarray:
    """Similarity matrix ``exp(-d)``."""
    return _readonly(np.exp(-X.d))


def is_positive_definite(z, tol: float = PD_TOL) -> tuple[bool, float]:
    """Return ``(smallest eigenvalue > tol * largest eigenvalue, smallest eigenvalue)``."""
    z = np.asarray(z, dtype=float)
    w = np.linalg.eigvalsh(z)
    lo, hi = float(w[0]), float(w[-1])
    return bool(lo > tol * max(hi, 0.0) and lo > 0), lo


@dataclass(frozen=True)
class MagnitudeReport:
    value: float
    route: str  # "inverse-sum" | "volume-ratio" | "circumradius"
    conditioning: float  # smallest eigenvalue of zeta
    near_threshold: bool = False


def _near_threshold(lo, hi, tol):
    return lo <= 10 * tol * hi


def magnitude_linalg(X: FiniteMetricSpace, tol: float = PD_TOL) -> MagnitudeReport:
    """Magnitude as the sum of the weighting ``w`` solving ``zeta w = 1``."""
    z = zeta(X)
    w = np.linalg.eigvalsh(z)
    ok, lo = is_positive_definite(z, tol)
    if not ok:
        raise NotPositiveDefiniteError(lo)
    near = _near_threshold(lo, float(w[-1]), tol)
    if near:
        warnings.warn(
            f"smallest eigenvalue {lo:.3e} is within 10x of the positive-definiteness threshold",
            IllConditionedWarning,
            stacklevel=2,
        )
    weights = scipy.linalg.solve(z, np.ones(X.n), assume_a="pos")
    return MagnitudeReport(float(weights.sum()), "inverse-sum", lo, near)


def random_fpdms(
    n: int, seed: int = 0, scale: float = 0.1, jitter: float = 0.3, max_tries: int = 1000
) -> FiniteMetricSpace:
    """Sample a finite positive definite metric space with ``n`` points.

    Points are a regular simplex of edge ``scale * sqrt(2)`` in ``R^n`` with
    Gaussian jitter of relative size ``jitter``, and the metric
    ``-log(1 - |y_i - y_j|^2 / 2)`` is recovered from them.  Draws that fail
    metric validation or positive definiteness are rejected.
    """
    if n < 1:
        raise FPDMSError("n must be at least 1")
    if n == 1:
        return FiniteMetricSpace(np.zeros((1, 1)))
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        y = scale * (np.eye(n) + jitter * rng.standard_normal((n, n)))
        sq = ((y[:, None, :] - y[None, :, :]) ** 2).sum(-1)
        if np.any(sq >= 2.0):
            continue
        d = -np.log1p(-0.5 * sq)
        np.fill_diagonal(d, 0.0)
        try:
            X = FiniteMetricSpace(d)
        except MetricError:
            continue
        if is_positive_definite(zeta(X))[0]:
            return X
    raise FPDMSError(f"could not generate a positive definite {n}-point space in {max_tries} tries")


def _reject_constant(name):
    raise ParseError(f"non-finite number {name} in JSON input")


def _finite_float(text):
    x = float(text)
    if not math.isfinite(x):
        _reject_constant(text)
    return x


def _matrix(value, what):
    try:
        a = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what} is not a rectangular array of numbers") from exc
    if a.ndim != 2:
        raise ParseError(f"{what} must be a 2-d array")
    return a


def _count(obj, key):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise ParseError(f"{key} must be a nonnegative integer")
    return v


def loads(text: str):
    """Parse a JSON space ``{"n", "d"}`` or point config ``{"dim", "points"}``.

    Malformed input raises :class:`ParseError`; a well-formed matrix that is
    not a metric raises :class:`MetricError`.
    """
    from .embedding import PointConfig

    try:
        obj = json.loads(text, parse_constant=_reject_constant, parse_float=_finite_float)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")
    if "d" in obj:
        if set(obj) != {"n", "d"}:
            raise ParseError(f"space object must have exactly the fields n, d (got {sorted(obj)})")
        n = _count(obj, "n")
        d = _matrix(obj["d"], "d")
        if d.shape != (n, n):
            raise ParseError(f"d must be an n x n matrix with n={n}")
        return validate_metric(d)
    if "points" in obj:
        if set(obj) != {"dim", "points"}:
            raise ParseError(f"config object must have exactly the fields dim, points (got {sorted(obj)})")
        dim = _count(obj, "dim")
        pts = _matrix(obj["points"], "points")
        if pts.shape[1] != dim or pts.shape[0] == 0:
            raise ParseError(f"points must be a non-empty list of {dim}-vectors")
        return PointConfig(pts)
    raise ParseError("JSON object is neither a space nor a point config")


def load(path):
    return loads(Path(path).read_text())


def dumps(obj) -> str:
    return json.dumps(obj.to_json())
