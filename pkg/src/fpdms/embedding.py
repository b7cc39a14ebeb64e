"""Similarity embeddings and the geometric routes to magnitude.

A similarity embedding of a positive definite space ``X`` is a Euclidean
point set whose Gram matrix is the zeta matrix of ``X``.  Equivalently it is
a point set with circumradius below one whose triples all satisfy the
tri-similarity inequality

    |y_i - y_j|^2 + |y_j - y_k|^2 >= |y_i - y_k|^2 + 1/2 |y_i - y_j|^2 |y_j - y_k|^2,

and then ``|X| = 1 / (1 - radius^2)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist

from .core import PD_TOL, FiniteMetricSpace, MagnitudeReport, _readonly, is_positive_definite, zeta
from .errors import (
    AffinelyDependentError,
    DomainError,
    FPDMSError,
    NotPositiveDefiniteError,
    RadiusError,
    TriSimilarityError,
)

RANK_TOL = 1e-9


@dataclass(frozen=True)
class PointConfig:
    """Ordered points in Euclidean space, one per row of ``points``.

    ``validated`` is set only by :func:`validate_embedding`.
    """

    points: np.ndarray
    validated: bool = field(default=False, compare=False)

    def __post_init__(self):
        p = np.array(self.points, dtype=float)
        if p.ndim == 1:
            p = p.reshape(1, -1)
        if p.ndim != 2 or p.shape[0] == 0:
            raise FPDMSError("points must be a non-empty 2-d array")
        if not np.all(np.isfinite(p)):
            raise FPDMSError("point coordinates must be finite")
        object.__setattr__(self, "points", _readonly(p))

    @property
    def k(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.k

    def squared_distances(self) -> np.ndarray:
        p = self.points
        return ((p[:, None, :] - p[None, :, :]) ** 2).sum(-1)

    def distance_matrix(self) -> np.ndarray:
        return np.sqrt(self.squared_distances())

    @property
    def diameter(self) -> float:
        return float(self.distance_matrix().max(initial=0.0))

    def padded(self, dim: int) -> PointConfig:
        """Same points with zero coordinates appended up to ``dim``."""
        if dim < self.dim:
            raise FPDMSError("cannot pad to a smaller dimension")
        return PointConfig(np.pad(self.points, ((0, 0), (0, dim - self.dim))))

    def scaled(self, u: float, about=None) -> PointConfig:
        c = np.zeros(self.dim) if about is None else np.asarray(about, dtype=float)
        return PointConfig(c + u * (self.points - c))

    def appended(self, point) -> PointConfig:
        point = np.asarray(point, dtype=float).reshape(1, -1)
        dim = max(self.dim, point.shape[1])
        base = self.padded(dim).points
        point = np.pad(point, ((0, 0), (0, dim - point.shape[1])))
        return PointConfig(np.vstack([base, point]))

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": self.points.tolist()}


@dataclass(frozen=True)
class CircumSphere:
    center: np.ndarray
    radius: float
    hull_basis: np.ndarray  # dim x (k-1), orthonormal columns

    @property
    def height(self) -> float:
        """Distance from the origin to the affine hull when the points lie on the unit sphere."""
        return math.sqrt(max(0.0, 1.0 - self.radius**2))


@dataclass(frozen=True)
class TriSimilarityReport:
    worst_margin: float
    witness: tuple | None  # (outer, middle, outer)
    all_margins: list = field(repr=False)

    @property
    def ok(self) -> bool:
        return self.worst_margin > 0


def _as_config(Y) -> PointConfig:
    return Y if isinstance(Y, PointConfig) else PointConfig(Y)


def embed(X: FiniteMetricSpace, tol: float = PD_TOL) -> PointConfig:
    """Unit vectors whose Gram matrix is the zeta matrix of ``X``.

    Uses the symmetric eigendecomposition ``zeta = V diag(w) V^T`` and takes
    the rows of ``V sqrt(w)``; the ambient dimension equals the numerical rank.
    """
    z = zeta(X)
    ok, lo = is_positive_definite(z, tol)
    if not ok:
        raise NotPositiveDefiniteError(lo)
    w, V = np.linalg.eigh(z)
    keep = w > tol * w[-1]
    Y = V[:, keep] * np.sqrt(w[keep])
    return PointConfig(Y[:, ::-1])


def phi(t):
    """Distance map ``t -> -log(1 - t^2/2)`` taking Euclidean to metric distance."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t >= math.sqrt(2)):
        raise DomainError("phi is defined on 0 <= t < sqrt(2)")
    out = -np.log1p(-0.5 * t * t)
    return float(out) if out.ndim == 0 else out


def phi_inverse(d):
    """Inverse of :func:`phi`, ``d -> sqrt(2 (1 - exp(-d)))``."""
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise DomainError("phi_inverse is defined on d >= 0")
    out = np.sqrt(-2.0 * np.expm1(-d))
    return float(out) if out.ndim == 0 else out


def recover_metric(Y) -> FiniteMetricSpace:
    """Metric space whose similarity embedding is ``Y``.

    Raises :class:`DomainError` if two points are at distance ``>= sqrt(2)``
    and :class:`MetricError` when ``Y`` violates tri-similarity (the recovered
    distances then violate the triangle inequality).
    """
    Y = _as_config(Y)
    sq = Y.squared_distances()
    if np.any(sq >= 2.0):
        i, j = np.argwhere(sq >= 2.0)[0]
        raise DomainError(f"points {i} and {j} are at distance >= sqrt(2)")
    d = -np.log1p(-0.5 * sq)
    np.fill_diagonal(d, 0.0)
    return FiniteMetricSpace(d)


def tri_similarity_margins(sq):
    """Margins for each unordered triple and each choice of middle vertex.

    Returns a list of ``((i, j, k), margin)`` with ``j`` the middle vertex.
    """
    out = []
    k = sq.shape[0]
    for a, b, c in itertools.combinations(range(k), 3):
        for i, j, l in ((b, a, c), (a, b, c), (a, c, b)):
            m = sq[i, j] + sq[j, l] - sq[i, l] - 0.5 * sq[i, j] * sq[j, l]
            out.append(((i, j, l), float(m)))
    return out


def tri_similarity_check(Y) -> TriSimilarityReport:
    """Worst tri-similarity margin over all triples (``+inf`` when ``k <= 2``)."""
    Y = _as_config(Y)
    margins = tri_similarity_margins(Y.squared_distances())
    if not margins:
        return TriSimilarityReport(math.inf, None, [])
    witness, worst = min(margins, key=lambda tm: tm[1])
    return TriSimilarityReport(worst, witness, margins)


def circumsphere(Y, rank_tol: float = RANK_TOL) -> CircumSphere:
    """Circumcenter and circumradius of affinely independent points.

    The center is sought in the affine hull, ``K = y_0 + B c`` with ``B`` an
    orthonormal basis of the hull's tangent space.  Equidistance from ``y_0``
    and ``y_i`` reads ``(y_i - y_0) . (K - y_0) = |y_i - y_0|^2 / 2``, which is
    solved through a column-pivoted QR factorisation of the difference matrix.
    """
    Y = _as_config(Y)
    p = Y.points
    if Y.k == 1:
        return CircumSphere(p[0].copy(), 0.0, np.zeros((Y.dim, 0)))
    D = p[1:] - p[0]
    if D.shape[0] > Y.dim:
        raise AffinelyDependentError(f"{Y.k} points cannot be affinely independent in R^{Y.dim}")
    Q, R, piv = scipy.linalg.qr(D.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.min() <= rank_tol * diag.max():
        raise AffinelyDependentError(
            f"difference matrix is rank deficient (|R_ii| ratio {diag.min() / diag.max():.2e})"
        )
    # D[piv] = R^T Q^T, so the system D Q c = b becomes R^T c = b[piv]
    b = 0.5 * (D * D).sum(1)
    c = scipy.linalg.solve_triangular(R, b[piv], trans="T")
    K = p[0] + Q @ c
    radii = np.linalg.norm(p - K, axis=1)
    return CircumSphere(K, float(radii.mean()), Q)


def validate_embedding(Y, rank_tol: float = RANK_TOL) -> PointConfig:
    """Return ``Y`` flagged as validated, or raise.

    Raises :class:`TriSimilarityError` or :class:`RadiusError`.
    """
    Y = _as_config(Y)
    rep = tri_similarity_check(Y)
    if not rep.ok:
        raise TriSimilarityError(rep.worst_margin, rep.witness)
    cs = circumsphere(Y, rank_tol)
    if not cs.radius < 1:
        raise RadiusError(f"circumradius {cs.radius!r} is not below 1")
    return PointConfig(Y.points, validated=True)


def is_similarity_embedding(Y) -> bool:
    try:
        validate_embedding(Y)
    except (TriSimilarityError, RadiusError, AffinelyDependentError):
        return False
    return True


def magnitude_from_radius(Y) -> MagnitudeReport:
    """Magnitude ``1 / (1 - radius^2)`` of the space embedded by ``Y``."""
    Y = validate_embedding(Y)
    rho = circumsphere(Y).radius
    lo = float("nan")
    try:
        lo = is_positive_definite(zeta(recover_metric(Y)))[1]
    except FPDMSError:
        pass
    return MagnitudeReport(1.0 / (1.0 - rho * rho), "circumradius", lo)


def gram_volume_squared(vectors) -> float:
    """Squared volume of the parallelepiped spanned by the rows (1 for no rows)."""
    v = np.asarray(vectors, dtype=float)
    if v.size == 0:
        return 1.0
    sign, logdet = np.linalg.slogdet(v @ v.T)
    if sign <= 0:
        return 0.0
    return math.exp(logdet)


def magnitude_from_volumes(Y, norm_tol: float = 1e-8) -> MagnitudeReport:
    """Magnitude as the squared ratio of two parallelepiped volumes.

    ``[Vol(y_2 - y_1, ..., y_k - y_1) / Vol(y_1, ..., y_k)]^2`` for points on
    the unit sphere, as produced by :func:`embed`.
    """
    Y = _as_config(Y)
    p = Y.points
    if np.any(np.abs(np.linalg.norm(p, axis=1) - 1.0) > norm_tol):
        raise DomainError("volume route needs points on the unit sphere")
    G = p @ p.T
    ok, lo = is_positive_definite(G)
    if not ok:
        raise AffinelyDependentError(f"points are linearly dependent (smallest Gram eigenvalue {lo:.2e})")
    _, ld_pts = np.linalg.slogdet(G)
    D = p[1:] - p[0]
    if Y.k == 1:
        ld_diff = 0.0
    else:
        s_diff, ld_diff = np.linalg.slogdet(D @ D.T)
        if s_diff <= 0:
            raise AffinelyDependentError("difference vectors are linearly dependent")
    return MagnitudeReport(math.exp(ld_diff - ld_pts), "volume-ratio", lo)


def hausdorff_distance(Y, Z) -> float:
    """Symmetric Hausdorff distance between two finite point sets."""
    Y, Z = _as_config(Y), _as_config(Z)
    if Y.dim != Z.dim:
        raise DomainError(f"dimension mismatch: {Y.dim} vs {Z.dim}")
    D = cdist(Y.points, Z.points)
    return float(max(D.min(1).max(), D.min(0).max()))


def nonflat_bound_check(y1, y1p, y2, y2p, tol: float = 1e-12) -> float:
    """Slack in the near-orthogonality bound for two short displacements.

    For ``u = y1' - y1`` and ``v = y2' - y2`` returns
    ``C * min(|u|/|v|, |v|/|u|) - |cos(u, v)|`` with
    ``C = 1 - m^2 / 2`` and ``m`` the smallest of the four cross distances.
    The value is nonnegative whenever every triple of the four points
    satisfies tri-similarity.
    """
    y1, y1p, y2, y2p = (np.asarray(v, dtype=float) for v in (y1, y1p, y2, y2p))
    u, v = y1p - y1, y2p - y2
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise DomainError("coincident pair: y1 == y1' or y2 == y2'")
    rep = tri_similarity_check(np.vstack([y1, y1p, y2, y2p]))
    if rep.worst_margin < -tol:
        raise TriSimilarityError(rep.worst_margin, rep.witness)
    m = min(np.linalg.norm(a - b) for a in (y1, y1p) for b in (y2, y2p))
    C = 1.0 - 0.5 * m * m
    cos = abs(float(u @ v)) / (nu * nv)
    return float(C * min(nu / nv, nv / nu) - cos)
