"""Constructive moves on similarity embeddings and the experiments built on them.

* :func:`add_point_rotation` duplicates a point by rotating it about the
  affine hull of the others into a fresh dimension.
* :func:`push_apex_dilate` adds an apex above the circumcenter and dilates.
* :func:`amplify_type` combines the two to move a counterexample family to a
  larger cluster type.
* :func:`stability_ratios`, :func:`continuous_region_sweep` and
  :func:`sample_four_point_configs` are the empirical checks of the
  continuity region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .embedding import PointConfig, circumsphere, hausdorff_distance, is_similarity_embedding, tri_similarity_check
from .errors import DomainError, FPDMSError, HypothesisViolation, TriSimilarityError, UnreachableTypeError
from .gh import ClusterType, cluster_partition, cluster_type, type_leq


def _config(Y) -> PointConfig:
    return Y if isinstance(Y, PointConfig) else PointConfig(Y)


# rotation ---------------------------------------------------------------------


@dataclass(frozen=True)
class RotationFrame:
    """Pose of a point relative to the affine hull of the other points.

    ``foot`` is the orthogonal projection of the point onto that hull,
    ``a`` its distance from it along the unit vector ``e1``, ``e2`` the fresh
    unit direction, and ``q`` the ``e1`` coordinate of the circumcenter
    measured from the hull.
    """

    foot: np.ndarray
    a: float
    e1: np.ndarray
    e2: np.ndarray
    q: float
    radius: float


def rotation_frame(Y, index: int = -1) -> RotationFrame:
    Y = _config(Y)
    k = Y.k
    if k < 2:
        raise DomainError("rotation needs at least two points")
    idx = index % k
    P = Y.padded(Y.dim + 1).points
    y = P[idx]
    others = np.delete(P, idx, axis=0)
    base = others[0]
    D = (others[1:] - base).T
    if D.shape[1]:
        Q, _ = np.linalg.qr(D)
        v = y - base
        foot = base + Q @ (Q.T @ v)
    else:
        foot = base
    a_vec = y - foot
    a = float(np.linalg.norm(a_vec))
    if a <= 1e-12 * max(1.0, Y.diameter):
        raise DomainError("point lies in the affine hull of the others")
    e1 = a_vec / a
    e2 = np.zeros(P.shape[1])
    e2[-1] = 1.0
    cs = circumsphere(Y)
    K = np.pad(cs.center, (0, 1))
    q = float((K - foot) @ e1)
    return RotationFrame(foot, a, e1, e2, q, cs.radius)


def add_point_rotation(Y, t: float, index: int = -1) -> PointConfig:
    """Append a copy of ``Y[index]`` rotated by angle ``t`` into a new dimension.

    The rotation fixes the affine hull of the remaining points, so the new
    point keeps its distances to them.  The returned config has one more
    dimension than ``Y``; its circumradius is ``sqrt(rho^2 + q^2 tan^2(t/2))``
    with ``q`` from :func:`rotation_frame`.  Raises :class:`DomainError` for
    ``t`` outside ``(0, pi)`` (``t = 0`` duplicates the point).
    """
    if not 0 < t < math.pi:
        raise DomainError(f"rotation angle must lie in (0, pi) (got {t})")
    Y = _config(Y)
    fr = rotation_frame(Y, index)
    new = fr.foot + fr.a * (math.cos(t) * fr.e1 + math.sin(t) * fr.e2)
    return PointConfig(np.vstack([Y.padded(Y.dim + 1).points, new]))


def rotation_radius(Y, t: float, index: int = -1) -> float:
    """Closed-form circumradius after :func:`add_point_rotation`."""
    fr = rotation_frame(Y, index)
    return math.sqrt(fr.radius**2 + (fr.q * math.tan(t / 2)) ** 2)


def max_rotation_angle(Y, index: int = -1, hi: float = math.pi / 2, iters: int = 60) -> float:
    """Largest angle (up to ``hi``) keeping the rotated config a similarity embedding.

    Halves ``hi`` until the rotation is admissible, then bisects the last
    bracket.  Validity is monotone in the angle near zero because the only
    new triples are ``(y_i, y, y')`` with ``|y_i - y| = |y_i - y'|``.
    """
    Y = _config(Y)

    def ok(t):
        try:
            return is_similarity_embedding(add_point_rotation(Y, t, index))
        except FPDMSError:
            return False

    if ok(hi):
        return hi
    lo = hi
    while not ok(lo):
        lo /= 2
        if lo < 1e-12:
            raise TriSimilarityError(-1.0, None, "no admissible rotation angle; is Y a similarity embedding?")
    hi = 2 * lo
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


# apex push --------------------------------------------------------------------


@dataclass(frozen=True)
class PushConstants:
    c0: float
    c1: float
    c2: float
    c3: float

    @classmethod
    def for_configs(cls, Y1, Y2, margin: float = 1e-9) -> PushConstants:
        """Constants as close to the hypothesis boundaries as ``margin`` allows."""
        r1 = circumsphere(Y1).radius
        r2 = circumsphere(Y2).radius
        c0 = 0.5 * (r2 + 1.0)
        c1 = math.sqrt(max(r2 * r2 - r1 * r1, 0.0)) * (1 - margin)
        c2 = min(2.0, _config(Y2).diameter / r2 * (1 + margin)) if r2 > 0 else 2.0
        c3 = (1 + 1e-3) * (1 / c0 + math.sqrt(1 / c0**2 - 1))
        return cls(c0, c1, c2, c3)


def push_hypotheses(Y1, Y2, consts: PushConstants) -> list[str]:
    """Names of the failed hypotheses of the apex push (empty if all hold)."""
    Y1, Y2 = _config(Y1), _config(Y2)
    r1 = circumsphere(Y1).radius
    r2 = circumsphere(Y2).radius
    c0, c1, c2, c3 = consts.c0, consts.c1, consts.c2, consts.c3
    bad = []
    if min(c0, c1, c2, c3) <= 0:
        bad.append("constants positive")
    if not is_similarity_embedding(Y1):
        bad.append("Y1 similarity embedding")
    if not is_similarity_embedding(Y2):
        bad.append("Y2 similarity embedding")
    if not _is_subset(Y1, Y2):
        bad.append("Y1 subset of Y2")
    if not r2 < c0:
        bad.append("rho_Y2 < c0")
    if not math.sqrt(max(r2 * r2 - r1 * r1, 0.0)) > c1:
        bad.append("sqrt(rho_Y2^2 - rho_Y1^2) > c1")
    if not Y2.diameter < c2 * r2:
        bad.append("diam Y2 < c2 rho_Y2")
    if not c2 <= 2:
        bad.append("c2 <= 2")
    if not (c0 <= 1 and 1 / c0 + math.sqrt(1 / c0**2 - 1) < c3):
        bad.append("1/c0 + sqrt(1/c0^2 - 1) < c3")
    return bad


def _is_subset(Y1: PointConfig, Y2: PointConfig, tol: float = 1e-12) -> bool:
    dim = max(Y1.dim, Y2.dim)
    A, B = Y1.padded(dim).points, Y2.padded(dim).points
    return all(np.min(np.linalg.norm(B - a, axis=1)) <= tol * max(1.0, Y2.diameter) for a in A)


@dataclass(frozen=True)
class PushResult:
    Y1p: PointConfig
    Y2p: PointConfig
    apex: np.ndarray
    u: float
    radius_gap: float
    similarity_residual: float
    lower_threshold_actual: float
    lower_threshold_printed: float
    upper_threshold_printed: float


def push_apex(Y1, Y2, c3: float) -> tuple[PointConfig, PointConfig, np.ndarray]:
    """Undilated ``Y1 + {y'}`` and ``Y2 + {y'}`` with ``y'`` at height ``c3 rho_Y2`` above ``K_Y2``."""
    Y1, Y2 = _config(Y1), _config(Y2)
    dim = max(Y1.dim, Y2.dim) + 1
    cs = circumsphere(Y2)
    K = np.pad(cs.center, (0, dim - cs.center.shape[0]))
    apex = K.copy()
    apex[-1] = c3 * cs.radius
    return Y1.padded(dim).appended(apex), Y2.padded(dim).appended(apex), apex


def lower_expression(Y2, apex, i: int, j: int, u: float) -> float:
    """Tri-similarity value of ``(u y_j, u y_i, u y')`` with middle vertex ``y_i``."""
    P = _config(Y2).padded(apex.shape[0]).points
    a = u * u * float(np.sum((P[i] - apex) ** 2))
    b = u * u * float(np.sum((P[i] - P[j]) ** 2))
    c = u * u * float(np.sum((P[j] - apex) ** 2))
    return a + b - c - 0.5 * a * b


def push_apex_dilate(Y1, Y2, c3: float | None = None, u: float = 0.5, consts: PushConstants | None = None) -> PushResult:
    """Apex push followed by dilation by ``u``.

    Checks the hypotheses (raising :class:`HypothesisViolation` with the
    failed names), builds ``Y1' = Y1 + {y'}`` and ``Y2' = Y2 + {y'}``,
    dilates both by ``u`` about the origin and reports

    * the radius gap ``sqrt(rho_{uY2'}^2 - rho_{uY1'}^2)``,
    * the residual of the similar-triangles identity
      ``|K1 - K2| / |K2' - K1'| = |y' - K1| / |y' - K2'|``,
    * the ``u`` where the tri-similarity value of ``(u y_j, u y_i, u y')``
      (middle ``y_i``, farthest pair of ``Y2``) crosses zero, next to the printed
      bounds ``sqrt(2) / (c1 sqrt(1 + c3^2))`` and
      ``sqrt(4 + 4 c3^2 - 2 c2^2) / ((1 + c3^2) c1)``.
    """
    Y1, Y2 = _config(Y1), _config(Y2)
    if consts is None:
        consts = PushConstants.for_configs(Y1, Y2)
    if c3 is not None:
        consts = PushConstants(consts.c0, consts.c1, consts.c2, c3)
    bad = push_hypotheses(Y1, Y2, consts)
    if bad:
        raise HypothesisViolation(bad)
    if not u > 0:
        raise DomainError("dilation factor must be positive")
    c1, c2, c3 = consts.c1, consts.c2, consts.c3
    Y1p, Y2p, apex = push_apex(Y1, Y2, c3)

    K1 = np.pad(circumsphere(Y1).center, (0, apex.shape[0] - Y1.dim))
    K2 = np.pad(circumsphere(Y2).center, (0, apex.shape[0] - Y2.dim))
    K1p = circumsphere(Y1p).center
    K2p = circumsphere(Y2p).center
    lhs = np.linalg.norm(K1 - K2) / np.linalg.norm(K2p - K1p)
    rhs = np.linalg.norm(apex - K1) / np.linalg.norm(apex - K2p)
    sim_res = float(abs(lhs - rhs)) if np.isfinite(lhs) else 0.0

    uY1, uY2 = Y1p.scaled(u), Y2p.scaled(u)
    gap = math.sqrt(max(circumsphere(uY2).radius ** 2 - circumsphere(uY1).radius ** 2, 0.0))

    sq = Y2.squared_distances()
    i, j = np.unravel_index(np.argmax(sq), sq.shape)
    if Y2.k >= 2:
        hi = 1.0
        while lower_expression(Y2, apex, i, j, hi) > 0:
            hi *= 2
        actual = brentq(lambda v: lower_expression(Y2, apex, i, j, v), 1e-6, hi, xtol=1e-15, rtol=1e-15)
    else:
        actual = math.inf
    printed_lower = math.sqrt(2) / (c1 * math.sqrt(1 + c3 * c3)) if c1 > 0 else math.inf
    inner = 4 + 4 * c3 * c3 - 2 * c2 * c2
    printed_upper = math.sqrt(inner) / ((1 + c3 * c3) * c1) if c1 > 0 and inner > 0 else math.nan
    return PushResult(uY1, uY2, apex * u, u, gap, sim_res, float(actual), printed_lower, printed_upper)


def lower_threshold_exact(Y2, c3: float) -> float:
    """Where the lower tri-similarity value vanishes: ``sqrt(2) / (rho_Y2 sqrt(1 + c3^2))``."""
    r2 = circumsphere(Y2).radius
    return math.sqrt(2) / (r2 * math.sqrt(1 + c3 * c3))


def max_dilation(Y, hi: float = 1.0, iters: int = 60) -> float:
    """Largest ``u <= hi`` for which ``u Y`` is a similarity embedding (bisection)."""
    Y = _config(Y)
    if is_similarity_embedding(Y.scaled(hi)):
        return hi
    lo = 1e-9
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if is_similarity_embedding(Y.scaled(mid)):
            lo = mid
        else:
            hi = mid
    return lo


# type amplification -------------------------------------------------------------


def amplification_plan(seed_type: ClusterType, target: ClusterType) -> tuple[int, tuple[int, ...]]:
    """Number of apex pushes and per-block rotation counts taking ``seed_type`` to ``target``.

    Pushes append zero entries; rotations then raise entries.  Raises
    :class:`UnreachableTypeError` when ``target`` is shorter than the seed
    type or not componentwise above it.
    """
    m = len(seed_type)
    if len(target) < m:
        raise UnreachableTypeError(f"{target} has fewer clusters than {seed_type}")
    padded = ClusterType(seed_type.r + (0,) * (len(target) - m))
    if not type_leq(padded, target):
        raise UnreachableTypeError(f"{target} is not reachable from {seed_type}: need {padded} <= {target}")
    return len(target) - m, tuple(b - a for a, b in zip(padded.r, target.r))


@dataclass(frozen=True)
class AmplifiedStep:
    t: float
    config: PointConfig
    blocks: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Amplification:
    target: ClusterType
    limit: PointConfig
    steps: tuple[AmplifiedStep, ...]
    pushes: int
    rotations: tuple[int, ...]
    dilation: float


def _ordered_blocks(blocks):
    # blocks sorted the way the cluster type lists them: by size, descending
    return sorted(blocks, key=lambda b: (-len(b), b))


def amplify_type(seed, target, t_values, u: float | None = None, limit_t: float = 2.0**-12) -> Amplification:
    """Configs clustered in ``target`` built from a counterexample family.

    ``seed`` is a :class:`~fpdms.families.FamilySpec`.  For each ``t`` the
    seed config is first extended by apex pushes (one fresh singleton
    cluster each, followed by a common dilation ``u``) and then by
    rotations inside the clusters with angle
    ``min(t, half the largest admissible angle)``.  The limit configuration
    gets the apexes computed at ``limit_t``, close enough for clustering at
    a quarter of its smallest distance.
    """
    from .families import family_points

    if isinstance(target, str):
        target = ClusterType.parse(target)
    pushes, rotations = amplification_plan(seed.cluster_type, target)
    ts = [float(t) for t in t_values]
    if not ts:
        raise ValueError("empty t grid")

    c3 = None
    if pushes:
        base_rho = max(circumsphere(family_points(seed, t)).radius for t in ts + [limit_t])
        c0 = 0.5 * (base_rho + 1.0)
        c3 = (1 + 1e-3) * (1 / c0 + math.sqrt(1 / c0**2 - 1))

    def pushed(t):
        Y = family_points(seed, t)
        blocks = [list(b) for b in seed.blocks]
        apexes = []
        for _ in range(pushes):
            reps = PointConfig(Y.points[[b[0] for b in blocks]])
            _, Y, apex = push_apex(reps, Y, c3)
            apexes.append(apex)
            blocks.append([Y.k - 1])
        return Y, blocks, apexes

    configs = [(t, *pushed(t)[:2]) for t in ts]
    limit = seed.limit_points()
    if pushes:
        for apex in pushed(limit_t)[2]:
            limit = limit.appended(apex)
        if u is None:
            u = 0.5 * min(max_dilation(Y) for _, Y, _ in configs)
        configs = [(t, Y.scaled(u), b) for t, Y, b in configs]
        limit = limit.scaled(u)
    else:
        u = 1.0

    steps = []
    for t, Y, blocks in configs:
        ordered = _ordered_blocks([tuple(b) for b in blocks])
        for pos, extra in enumerate(rotations):
            block = list(ordered[pos])
            for _ in range(extra):
                idx = block[-1]
                angle = min(t, 0.5 * max_rotation_angle(Y, idx))
                Y = add_point_rotation(Y, angle, idx)
                block.append(Y.k - 1)
            ordered[pos] = tuple(block)
        steps.append(AmplifiedStep(t, Y, tuple(ordered)))
    return Amplification(target, limit, tuple(steps), pushes, rotations, u)


def check_amplified(amp: Amplification) -> list[tuple[float, str, bool]]:
    """Per step: ``(t, detected type, similarity embedding)`` at epsilon = delta0/4 of the limit."""
    out = []
    for st in amp.steps:
        dim = max(st.config.dim, amp.limit.dim)
        part = cluster_partition(st.config.padded(dim), reference=amp.limit.padded(dim))
        out.append((st.t, str(cluster_type(part)), is_similarity_embedding(st.config)))
    return out


# continuity-region experiments -----------------------------------------------


def two_point_perturbation(Y, h: float, alpha: int = 0, beta: int = 1) -> tuple[PointConfig, float]:
    """Type <1,1> perturbation of ``Y`` of size ``h`` and its ``h_{alpha beta}``.

    Rotates ``y_alpha`` and ``y_beta`` by angle ``h`` into two fresh
    dimensions and dilates the result by ``1 + h`` about the circumcenter
    of ``Y``.  Points ``0..k-1`` of the output correspond to ``Y``; the two
    appended points pair with ``y_alpha`` and ``y_beta``.
    """
    Y = _config(Y)
    k = Y.k
    Z = add_point_rotation(Y, h, alpha)
    Z = add_point_rotation(Z, h, beta)
    K = np.pad(circumsphere(Y).center, (0, Z.dim - Y.dim))
    Z = Z.scaled(1 + h, about=K)
    base = Y.padded(Z.dim).points
    P = Z.points
    hsq = np.sum((P[:k] - base) ** 2) + np.sum((P[k] - base[alpha]) ** 2) + np.sum((P[k + 1] - base[beta]) ** 2)
    return Z, float(math.sqrt(hsq))


@dataclass(frozen=True)
class StabilityRow:
    h: float
    h_ab: float
    radius: float
    ratio: float
    valid: bool


def stability_ratios(Y, js=range(4, 17), alpha: int = 0, beta: int = 1) -> list[StabilityRow]:
    """``|rho' - rho| / h_{alpha beta}`` along ``h = 2**-j``."""
    Y = _config(Y)
    rho = circumsphere(Y).radius
    rows = []
    for j in js:
        h = 2.0**-j
        Z, hab = two_point_perturbation(Y, h, alpha, beta)
        r = circumsphere(Z).radius
        rows.append(StabilityRow(h, hab, r, abs(r - rho) / hab, is_similarity_embedding(Z)))
    return rows


@dataclass(frozen=True)
class ContinuousSweep:
    cluster_type: str
    limit_radius: float
    rows: tuple[tuple[float, float, float], ...]  # (t, hausdorff, radius)

    def ratios(self):
        return [abs(r - self.limit_radius) / h for _, h, r in self.rows]


def continuous_region_sweep(Y, rotations: dict[int, int], js=range(4, 13)) -> ContinuousSweep:
    """Clustered sweep around ``Y`` built from rotations only.

    ``rotations`` maps a point index of ``Y`` to the number of copies added
    near it; the resulting type has ``norm1 = sum(rotations.values())``.
    """
    Y = _config(Y)
    rows = []
    r_type = None
    for j in js:
        t = 2.0**-j
        Z = Y
        for idx, count in sorted(rotations.items()):
            cur = idx
            for _ in range(count):
                Z = add_point_rotation(Z, t, cur)
                cur = Z.k - 1
        if not is_similarity_embedding(Z):
            raise TriSimilarityError(tri_similarity_check(Z).worst_margin, tri_similarity_check(Z).witness)
        dim = Z.dim
        part = cluster_partition(Z, reference=Y.padded(dim))
        r_type = str(cluster_type(part))
        rows.append((t, hausdorff_distance(Z, Y.padded(dim)), circumsphere(Z).radius))
    return ContinuousSweep(r_type, circumsphere(Y).radius, tuple(rows))


def _batch_circumradius(P):
    # P: (N, 4, 3); circumcenter solves 2 (p_i - p_0) . c = |p_i|^2 - |p_0|^2
    A = 2 * (P[:, 1:] - P[:, :1])
    b = (P[:, 1:] ** 2).sum(-1) - (P[:, :1] ** 2).sum(-1)
    c = np.linalg.solve(A, b[..., None])[..., 0]
    return np.linalg.norm(c - P[:, 0], axis=1)


def _batch_margins(P):
    sq = ((P[:, :, None, :] - P[:, None, :, :]) ** 2).sum(-1)
    k = P.shape[1]
    worst = np.full(P.shape[0], np.inf)
    for i in range(k):
        for j in range(k):
            for l in range(i + 1, k):
                if j in (i, l):
                    continue
                m = sq[:, i, j] + sq[:, j, l] - sq[:, i, l] - 0.5 * sq[:, i, j] * sq[:, j, l]
                worst = np.minimum(worst, m)
    return worst


def sample_four_point_configs(count: int, seed: int = 0, adversarial_fraction: float = 0.3, batch: int = 20000):
    """Rejection-sample validated 4-point configs in R^3.

    Most candidates are Gaussian clouds at log-uniform scales; a fraction
    are near-cospherical (points on a circle lifted slightly off its plane),
    which pushes the circumradius up relative to the diameter.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n_adv = int(batch * adversarial_fraction)
        scale = np.exp(rng.uniform(np.log(0.02), np.log(0.8), size=(batch, 1, 1)))
        P = rng.standard_normal((batch, 4, 3)) * scale
        ang = np.sort(rng.uniform(0, 2 * np.pi, size=(n_adv, 4)), axis=1)
        R = scale[:n_adv, 0, 0][:, None]
        lift = rng.normal(size=(n_adv, 4)) * R * np.exp(rng.uniform(np.log(1e-3), np.log(0.3), size=(n_adv, 1)))
        P[:n_adv] = np.stack([R * np.cos(ang), R * np.sin(ang), lift], axis=-1)
        with np.errstate(all="ignore"):
            ok = _batch_margins(P) > 0
            P = P[ok]
            rad = _batch_circumradius(P) if len(P) else np.zeros(0)
        for p, r in zip(P, rad):
            if np.isfinite(r) and r < 1:
                out.append(PointConfig(p))
                if len(out) == count:
                    break
    return out


def four_point_ratio(Y) -> float:
    """``rho / diam`` for a 4-point config (bounded by 2 when every angle is acute)."""
    Y = _config(Y)
    return circumsphere(Y).radius / Y.diameter
