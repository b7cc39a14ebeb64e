"""Counterexample families, convergence sweeps and formula audits.

Four one-parameter families ``Y_t`` of similarity embeddings converge in
Hausdorff distance to a small limit configuration ``Y`` while their
circumradius converges to something strictly larger than the radius of
``Y``.  They are named by their cluster type: ``T4`` (type <4>), ``T30``
(<3,0>), ``T21`` (<2,1>) and ``T111`` (<1,1,1>).

Besides generating the coordinates, this module audits every printed
closed form (centers, radii, limits, the small-t tables in
:mod:`fpdms.expansions`) against the circumsphere solver.  A mismatch is a
report outcome, not an exception.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import expansions
from .embedding import PointConfig, circumsphere, tri_similarity_check
from .errors import ConstraintError, DomainError, ExtrapolationError, FitError, FPDMSError
from .extrapolation import richardson_table
from .gh import ClusterPartition, ClusterType

FAMILIES = ("T4", "T30", "T21", "T111")
SQ2, SQ3, SQ6 = math.sqrt(2), math.sqrt(3), math.sqrt(6)

LABELS = {"T4": "ABCDE", "T30": "ABCDE", "T21": "ABCDE", "T111": "ABCDEF"}
BLOCKS = {
    "T4": ((0, 1, 2, 3, 4),),
    "T30": ((0, 1, 2, 3), (4,)),
    "T21": ((0, 1, 2), (3, 4)),
    "T111": ((0, 1), (2, 3), (4, 5)),
}


@dataclass(frozen=True)
class FamilySpec:
    """Parameters of one family.

    ``s`` is an angle for T30 (the family uses ``cos s`` and ``sin s``) and a
    plain positive number otherwise.  T4 comes in two variants: ``literal``
    with the printed range ``0 < s < 6/7`` and ``repaired`` with ``s > 7/6``,
    the range in which its limit radius ``7/(6s)`` stays below one.
    """

    family: str
    rho: float | None = None
    s: float = 0.5
    variant: str = "literal"

    def __post_init__(self):
        bad = self.violations()
        if bad:
            raise ConstraintError(f"{self.family}: " + "; ".join(bad))

    def violations(self):
        f, r, s = self.family, self.rho, self.s
        if f not in FAMILIES:
            return [f"unknown family {f!r}; expected one of {FAMILIES}"]
        out = []
        if f == "T4":
            if r is not None:
                out.append("T4 takes no rho")
            if self.variant == "literal" and not 0 < s < 6 / 7:
                out.append(f"literal T4 needs 0 < s < 6/7 (got s={s})")
            elif self.variant == "repaired" and not s > 7 / 6:
                out.append(f"repaired T4 needs s > 7/6 (got s={s})")
            elif self.variant not in ("literal", "repaired"):
                out.append(f"unknown T4 variant {self.variant!r}")
            return out
        if self.variant != "literal":
            out.append(f"{f} has no variant {self.variant!r}")
        if r is None or not r > 0:
            return out + [f"{f} needs rho > 0"]
        if f == "T30":
            if not r < 1 / SQ2:
                out.append(f"rho < 1/sqrt(2) required (got {r})")
            bound = (2 - 4 * r * r) / (8 * r)
            if not (0 < s < math.pi / 2 and 0 < math.cos(s) < bound):
                out.append(f"need 0 < cos s < (2 - 4 rho^2)/(8 rho) = {bound:.6g} (got cos s = {math.cos(s):.6g})")
        elif f == "T21":
            if not r < 1 / SQ2:
                out.append(f"rho < 1/sqrt(2) required (got {r})")
            if not s > 0:
                out.append("s > 0 required")
        elif f == "T111":
            if not r < math.sqrt(2 / 3):
                out.append(f"rho < sqrt(2/3) required (got {r})")
            if not s > 0:
                out.append("s > 0 required")
        return out

    @classmethod
    def default(cls, family: str) -> FamilySpec:
        """Default parameters: T4 literal s=0.5, T30 (0.5, cos s=0.2), T21 and T111 (0.5, 2)."""
        return {
            "T4": lambda: cls("T4", None, 0.5),
            "T30": lambda: cls("T30", 0.5, math.acos(0.2)),
            "T21": lambda: cls("T21", 0.5, 2.0),
            "T111": lambda: cls("T111", 0.5, 2.0),
        }[family]()

    @classmethod
    def certified(cls, family: str) -> FamilySpec:
        """Parameters for which the family is a similarity embedding at small t.

        T21 needs ``8 - 4 sqrt(3) - 4 rho - 8 rho^2 > 0`` and T111 needs
        ``4 - 2 sqrt(2) - 3 rho - 3 rho^2 > 0`` (leading tri-similarity
        coefficients), which the defaults violate.
        """
        return {
            "T4": lambda: cls("T4", None, 1.5, "repaired"),
            "T30": lambda: cls("T30", 0.5, math.acos(0.2)),
            "T21": lambda: cls("T21", 0.15, 2.0),
            "T111": lambda: cls("T111", 0.25, 2.0),
        }[family]()

    @property
    def labels(self) -> str:
        return LABELS[self.family]

    @property
    def blocks(self):
        return BLOCKS[self.family]

    @property
    def cluster_type(self) -> ClusterType:
        return ClusterType(tuple(sorted((len(b) - 1 for b in self.blocks), reverse=True)))

    @property
    def t_max(self) -> float:
        """Supremum of t for which the coordinates are defined."""
        if self.family == "T4":
            return 1.0 / self.s
        if self.family == "T30":
            return 1.0
        return math.inf

    def limit_points(self) -> PointConfig:
        r = self.rho
        if self.family == "T4":
            return PointConfig(np.zeros((1, 4)))
        if self.family == "T30":
            return PointConfig([[r, 0, 0, 0], [-r, 0, 0, 0]])
        if self.family == "T21":
            return PointConfig([[-r, 0, 0, 0], [r, 0, 0, 0]])
        return PointConfig([[-r, 0, 0, 0, 0], [r / 2, SQ3 * r / 2, 0, 0, 0], [r / 2, -SQ3 * r / 2, 0, 0, 0]])

    def describe(self) -> dict:
        out = {"family": self.family, "rho": self.rho, "s": self.s}
        if self.family == "T30":
            out["cos_s"] = math.cos(self.s)
        if self.family == "T4":
            out["variant"] = self.variant
        return out


def family_points(spec: FamilySpec, t: float) -> PointConfig:
    """Coordinates of ``Y_t`` in the order given by ``spec.labels``."""
    if not t > 0:
        raise DomainError(f"t must be positive (got {t})")
    if not t < spec.t_max:
        raise DomainError(f"{spec.family} coordinates are undefined for t >= {spec.t_max:g}")
    r, s = spec.rho, spec.s
    if spec.family == "T4":
        q = 3 * t * math.sqrt(1 - (s * t) ** 2)
        return PointConfig(
            [
                [-4 * t, 0, 0, 0],
                [2 * t, 2 * SQ3 * t, 0, 0],
                [2 * t, -2 * SQ3 * t, 0, 0],
                [0, 0, q, 3 * s * t * t],
                [0, 0, -q, 3 * s * t * t],
            ]
        )
    if spec.family == "T30":
        c, sn = math.cos(s), math.sin(s)
        q = t * math.sqrt(1 - t * t)
        u = t * t
        return PointConfig(
            [
                [r - u * c, -u * sn, q, 0],
                [r + u * c, u * sn, 0, q],
                [r - u * c, -u * sn, -q, 0],
                [r + u * c, u * sn, 0, -q],
                [-r, 0, 0, 0],
            ]
        )
    if spec.family == "T21":
        u = t * t
        return PointConfig(
            [
                [-r, 0, 0, 0],
                [-r + u, SQ3 * t, t, s * u],
                [-r + u, SQ3 * t, -t, s * u],
                [r, 0, 0, 0],
                [r - u, 2 * t, 0, s * u],
            ]
        )
    u = t * t
    cx, cy = r / 2, SQ3 * r / 2
    return PointConfig(
        [
            [-r, 0, 0, 0, 0],
            [-r + u, 0, s * u, SQ2 * t, 0],
            [cx, cy, 0, 0, 0],
            [cx, cy - u, 0, t, t],
            [cx, -cy, 0, 0, 0],
            [cx, -cy + u, 0, t, -t],
        ]
    )


# printed closed forms -------------------------------------------------------


def printed_center(spec: FamilySpec, t: float) -> np.ndarray:
    r, s = spec.rho, spec.s
    if spec.family == "T4":
        return np.array([0, 0, 0, -7 * s / 6])
    if spec.family == "T30":
        return np.array([t * t / (4 * r), (4 * r * r - t * t) / (4 * r * math.tan(s)), 0, 0])
    if spec.family == "T21":
        return np.array([0, 0, 0, (2 - r) / s + (1 + s * s) * t * t / (2 * s)])
    w = (2 - 2 * SQ2 + (SQ6 - 2) * r) / (2 * s) + (1 - SQ2 + s * s) * t * t / (2 * s)
    return np.array([0, 0, w, (2 - SQ3 * r) * t / 2 + t**3 / 2, 0])


def printed_radius(spec: FamilySpec, t: float) -> float | None:
    """Printed radius; ``None`` when only its leading order is printed (T111)."""
    r, s = spec.rho, spec.s
    if spec.family == "T4":
        return math.sqrt(16 * t * t + 49 / 36 * s * s)
    if spec.family == "T30":
        sn2 = math.sin(s) ** 2
        return math.sqrt(r * r / sn2 - t * t / (2 * sn2) + t**4 / (4 * r * r * sn2))
    if spec.family == "T21":
        w = (2 - r) / s + (1 + s * s) * t * t / (2 * s)
        return math.sqrt(r * r + w * w)
    return None


def printed_radius_leading(spec: FamilySpec) -> float:
    return printed_limit(spec)


def printed_limit(spec: FamilySpec) -> float:
    r, s = spec.rho, spec.s
    if spec.family == "T4":
        return 7 * s / 6
    if spec.family == "T30":
        return r / math.sin(s)
    if spec.family == "T21":
        return math.sqrt(r * r + ((2 - r) / s) ** 2)
    return math.sqrt(r * r + ((2 - 2 * SQ2 + (SQ6 - 2) * r) / (2 * s)) ** 2)


def corrected_limit(spec: FamilySpec) -> float:
    """Limit radius from the equidistance equations on the printed coordinates."""
    if spec.family == "T4":
        return 7 / (6 * spec.s)
    return printed_limit(spec)


# limits -----------------------------------------------------------------------


@dataclass(frozen=True)
class LimitReport:
    spec: FamilySpec
    printed_value: float
    audited_value: float
    corrected_value: float
    order2: float
    order3: float
    t_values: tuple[float, ...]
    radii: tuple[float, ...]
    limit_config_radius: float

    @property
    def verdict(self) -> str:
        return "match" if abs(self.audited_value - self.printed_value) <= 1e-6 else "mismatch"

    @property
    def gap(self) -> float:
        """Excess of the limit radius over the radius of the limit configuration."""
        return self.audited_value - self.limit_config_radius


def solver_radius(spec: FamilySpec, t: float) -> float:
    return circumsphere(family_points(spec, t)).radius


def family_limit_radius(spec: FamilySpec, j_start: int = 5, levels: int = 4, tol: float = 1e-6) -> LimitReport:
    """Printed limit radius and the solver limit by Richardson extrapolation.

    Radii are computed at ``t = 2**-j`` for ``levels`` consecutive ``j`` and
    extrapolated in ``t^2``.  Raises :class:`ExtrapolationError` if the
    estimates with ``levels - 2`` and ``levels - 1`` eliminated terms differ
    by more than ``tol``.
    """
    if levels < 4:
        raise ValueError("need at least four levels for orders 2 and 3")
    ts = tuple(2.0**-j for j in range(j_start, j_start + levels))
    radii = tuple(solver_radius(spec, t) for t in ts)
    table = richardson_table(radii)
    o2, o3 = table[levels - 2][-1], table[levels - 1][-1]
    if not abs(o2 - o3) <= tol:
        raise ExtrapolationError(f"{spec.family}: order-2 and order-3 limits differ by {abs(o2 - o3):.3e}")
    return LimitReport(
        spec=spec,
        printed_value=printed_limit(spec),
        audited_value=o3,
        corrected_value=corrected_limit(spec),
        order2=o2,
        order3=o3,
        t_values=ts,
        radii=radii,
        limit_config_radius=circumsphere(spec.limit_points()).radius,
    )


# sweeps -----------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    t: float
    radius_solver: float
    radius_closed_form: float | None
    magnitude: float
    worst_tri_margin: float
    valid_embedding: bool
    error: str | None = field(default=None, compare=False)


CSV_HEADER = (
    "family",
    "rho",
    "s",
    "t",
    "radius_solver",
    "radius_closed_form",
    "magnitude",
    "worst_tri_margin",
    "valid_embedding",
)


def default_t_grid(j_min: int = 4, j_max: int = 20):
    return [2.0**-j for j in range(j_min, j_max + 1)]


def sweep_row(spec: FamilySpec, t: float) -> SweepRecord:
    nan = math.nan
    try:
        Y = family_points(spec, t)
        rho = circumsphere(Y).radius
        margin = tri_similarity_check(Y).worst_margin
    except FPDMSError as exc:
        return SweepRecord(t, nan, None, nan, nan, False, str(exc))
    valid = bool(rho < 1 and margin > 0)
    mag = 1.0 / (1.0 - rho * rho) if valid else nan
    return SweepRecord(t, rho, printed_radius(spec, t), mag, margin, valid)


def family_sweep(spec: FamilySpec, t_values) -> list[SweepRecord]:
    """One :class:`SweepRecord` per ``t``; per-row failures are recorded, not raised."""
    ts = [float(t) for t in t_values]
    if not ts:
        raise ValueError("empty t grid")
    if any(not t > 0 for t in ts):
        raise ValueError("t values must be positive")
    if any(a <= b for a, b in zip(ts, ts[1:])):
        raise ValueError("t values must be strictly decreasing")
    return [sweep_row(spec, t) for t in ts]


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return repr(float(x))


def sweep_to_csv(spec: FamilySpec, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    rho = "" if spec.rho is None else repr(spec.rho)
    for row in rows:
        w.writerow(
            [
                spec.family,
                rho,
                repr(spec.s),
                _fmt(row.t),
                _fmt(row.radius_solver),
                _fmt(row.radius_closed_form),
                _fmt(row.magnitude),
                _fmt(row.worst_tri_margin),
                _fmt(row.valid_embedding),
            ]
        )
    return buf.getvalue()


def read_sweep_csv(text: str) -> list[dict]:
    """Parse a sweep CSV, checking the header and field types."""
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise FPDMSError(f"unexpected sweep header {header}")
    out = []
    for line in reader:
        rec = dict(zip(header, line))
        if len(line) != len(header) or rec["family"] not in FAMILIES:
            raise FPDMSError(f"malformed sweep row {line}")
        for key in ("rho", "radius_closed_form"):
            rec[key] = float(rec[key]) if rec[key] else None
        for key in ("s", "t", "radius_solver", "magnitude", "worst_tri_margin"):
            rec[key] = float(rec[key])
        if rec["valid_embedding"] not in ("true", "false"):
            raise FPDMSError(f"bad boolean {rec['valid_embedding']!r}")
        rec["valid_embedding"] = rec["valid_embedding"] == "true"
        out.append(rec)
    return out


def is_valid_at(spec: FamilySpec, t: float) -> bool:
    return sweep_row(spec, t).valid_embedding


@functools.lru_cache(maxsize=None)
def validity_threshold(spec: FamilySpec, j_min: int = 1, j_max: int = 12, iters: int = 60) -> float:
    """Largest ``t0`` with the family valid on the scanned part of ``(0, t0]``.

    Scans ``t = 2**-j`` from ``j_max`` upward and bisects the first sign
    change of validity.  Returns 0 when the family is invalid already at
    ``2**-j_max``.  Below about ``2**-15`` the cluster offsets fall under the
    circumsphere rank tolerance, so ``j_max`` defaults to 12.
    """
    ts = [2.0**-j for j in range(j_max, j_min - 1, -1) if 2.0**-j < spec.t_max]
    if not ts or not is_valid_at(spec, ts[0]):
        return 0.0
    lo = ts[0]
    hi = None
    for t in ts[1:]:
        if is_valid_at(spec, t):
            lo = t
        else:
            hi = t
            break
    if hi is None:
        hi = min(2 * lo, spec.t_max)
        if hi < spec.t_max and is_valid_at(spec, hi):
            return hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if is_valid_at(spec, mid):
            lo = mid
        else:
            hi = mid
    return lo


# audits -----------------------------------------------------------------------


def _sq_dist(Y: PointConfig, labels: str, pair: str) -> float:
    i, j = labels.index(pair[0]), labels.index(pair[1])
    v = Y.points[i] - Y.points[j]
    return float(v @ v)


def expression_value(Y: PointConfig, labels: str, mid: str, a: str, b: str) -> float:
    p = _sq_dist(Y, labels, a + mid)
    q = _sq_dist(Y, labels, mid + b)
    r = _sq_dist(Y, labels, a + b)
    return p + q - r - 0.5 * p * q


@dataclass(frozen=True)
class DistanceCheck:
    pair: str
    printed: float
    computed: float
    rel_error: float
    ok: bool


@dataclass(frozen=True)
class CoefficientCheck:
    expression: str
    printed_power: int
    printed_coefficient: float
    detected_power: int
    fitted_coefficient: float
    rel_error: float
    ok: bool


@dataclass(frozen=True)
class ExpansionReport:
    spec: FamilySpec
    distances: tuple[DistanceCheck, ...]
    coefficients: tuple[CoefficientCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.distances) and all(c.ok for c in self.coefficients)

    def mismatches(self) -> list:
        return [c for c in self.distances + self.coefficients if not c.ok]


def _fit_leading(ts, values, printed_power):
    ts = np.asarray(ts)
    values = np.asarray(values)
    nz = np.abs(values) > 0
    slope = np.polyfit(np.log(ts[nz]), np.log(np.abs(values[nz])), 1)[0] if nz.sum() >= 2 else 2 * 99
    detected = int(2 * round(slope / 2))
    lowest = max(0, min(detected, printed_power))
    powers = [lowest + 2 * i for i in range(4)]
    x = ts / ts.max()
    A = np.stack([x**p for p in powers], axis=1)
    coef, *_ = np.linalg.lstsq(A, values, rcond=None)
    resid = values - A @ coef
    scale = np.abs(values).max()
    rel_resid = float(np.abs(resid).max() / scale) if scale > 0 else 0.0
    # back to the unscaled variable t
    coef = coef / ts.max() ** np.array(powers, dtype=float)
    fitted = dict(zip(powers, coef))
    return detected, fitted.get(printed_power, 0.0), rel_resid


def expansion_audit(
    spec: FamilySpec,
    t_check: float = 1e-3,
    fit_range=(2.0**-10, 2.0**-6),
    n_fit: int = 17,
    dist_tol: float = 1e-10,
    coef_tol: float = 0.01,
    zero_tol: float = 1e-6,
    resid_tol: float = 1e-6,
) -> ExpansionReport:
    """Check the printed squared distances and leading tri-similarity coefficients.

    Distances are compared at ``t_check`` with relative tolerance
    ``dist_tol``.  Each expression is sampled at ``n_fit`` log-spaced ``t``
    in ``fit_range``; the leading power is read off the log-log slope and the
    coefficient of the printed power is found by least squares in
    ``t^p, t^(p+2), ...``.  A coefficient passes within ``coef_tol``
    relative (``zero_tol`` absolute for a printed zero).  Raises
    :class:`FitError` when a fit residual exceeds ``resid_tol``.
    """
    labels, r, s = spec.labels, spec.rho, spec.s
    Y = family_points(spec, t_check)
    dchecks = []
    for pairs, fn in expansions.DISTANCES[spec.family]:
        printed = fn(r, s, t_check)
        for pair in pairs:
            got = _sq_dist(Y, labels, pair)
            rel = abs(got - printed) / abs(printed)
            dchecks.append(DistanceCheck(pair, float(printed), got, float(rel), bool(rel <= dist_tol)))
    ts = np.geomspace(fit_range[0], fit_range[1], n_fit)
    configs = [family_points(spec, t) for t in ts]
    cchecks = []
    for mid, a, b, power, coef_fn in expansions.EXPRESSIONS[spec.family]:
        label = expansions.expression_label(mid, a, b)
        values = [expression_value(Y_, labels, mid, a, b) for Y_ in configs]
        detected, fitted, rel_resid = _fit_leading(ts, values, power)
        if rel_resid > resid_tol:
            raise FitError(f"{spec.family} {label}: fit residual {rel_resid:.2e}")
        printed = coef_fn(r, s)
        if printed == 0 or abs(printed) < zero_tol:
            rel = abs(fitted - printed)
            ok = rel <= zero_tol
        else:
            rel = abs(fitted - printed) / abs(printed)
            ok = rel <= coef_tol
        cchecks.append(CoefficientCheck(label, power, float(printed), detected, float(fitted), float(rel), bool(ok)))
    return ExpansionReport(spec, tuple(dchecks), tuple(cchecks))


@dataclass(frozen=True)
class ComponentCheck:
    name: str
    printed: float
    solver: float
    abs_error: float
    verdict: str  # match | leading-order-match | mismatch


@dataclass(frozen=True)
class ClosedFormReport:
    spec: FamilySpec
    t: float
    components: tuple[ComponentCheck, ...]

    @property
    def verdict(self) -> str:
        order = ("match", "leading-order-match", "mismatch")
        return max((c.verdict for c in self.components), key=order.index)


def _center_radius(spec, t):
    cs = circumsphere(family_points(spec, t))
    return cs.center, cs.radius


def closed_form_audit(spec: FamilySpec, t: float = 1e-3, tol: float = 1e-9) -> ClosedFormReport:
    """Compare the solver center and radius with the printed ``K_t`` and ``rho_t``.

    A component matches when the absolute error is at most
    ``tol * max(1, |value|)``.  Otherwise it is a leading-order match when
    the error shrinks at least like ``t^2`` from ``t`` to ``t/4`` (so the
    printed and solver values share their ``t -> 0`` limit) and a mismatch
    when it does not.
    """
    K, rho = _center_radius(spec, t)
    K4, rho4 = _center_radius(spec, t / 4)
    comps = []

    def judge(name, printed, solver, printed4, solver4):
        err = abs(printed - solver)
        err4 = abs(printed4 - solver4)
        if err <= tol * max(1.0, abs(solver)):
            v = "match"
        elif err4 <= err / 8:
            v = "leading-order-match"
        else:
            v = "mismatch"
        comps.append(ComponentCheck(name, float(printed), float(solver), float(err), v))

    pc, pc4 = printed_center(spec, t), printed_center(spec, t / 4)
    for i in range(len(K)):
        judge(f"K[{i}]", pc[i], K[i], pc4[i], K4[i])
    pr, pr4 = printed_radius(spec, t), printed_radius(spec, t / 4)
    if pr is None:
        pr = pr4 = printed_radius_leading(spec)
    judge("rho", pr, rho, pr4, rho4)
    return ClosedFormReport(spec, t, tuple(comps))


# flatness diagnostic ----------------------------------------------------------


def degeneracy_volume(Y_t, partition: ClusterPartition, reference) -> float:
    """Volume spanned by reference differences and unit intra-cluster displacements.

    Each block is matched to the reference point nearest its centroid; its
    first member is the representative ``y^(i,0)``.  The spanning vectors
    are ``ref_0 - ref_i`` (``i >= 1``) and ``(y^(i,0) - y^(i,j)) / |...|``
    for every other block member.  Values near zero mean the displacement
    directions have gone flat.
    """
    Y = Y_t if isinstance(Y_t, PointConfig) else PointConfig(Y_t)
    ref = reference if isinstance(reference, PointConfig) else PointConfig(reference)
    if len(partition.blocks) != ref.k:
        raise FPDMSError(f"{len(partition.blocks)} blocks for {ref.k} reference points")
    dim = max(Y.dim, ref.dim)
    P, R = Y.padded(dim).points, ref.padded(dim).points
    owner = {}
    for block in partition.blocks:
        c = P[list(block)].mean(0)
        i = int(np.argmin(np.linalg.norm(R - c, axis=1)))
        if i in owner:
            raise FPDMSError("two blocks map onto the same reference point")
        owner[i] = block
    vecs = [R[0] - R[i] for i in range(1, ref.k)]
    for i in range(ref.k):
        block = owner[i]
        rep = P[block[0]]
        for j in block[1:]:
            v = rep - P[j]
            vecs.append(v / np.linalg.norm(v))
    if not vecs:
        return 1.0
    V = np.array(vecs)
    if V.shape[0] > dim:
        return 0.0
    det = np.linalg.det(V @ V.T)
    return math.sqrt(max(det, 0.0))
