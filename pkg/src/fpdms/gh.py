"""Exact Gromov-Hausdorff distance for small spaces and cluster types.

The distance is computed from the distortion formula

    d_GH(X, X') = 1/2 inf_{f: X -> X', g: X' -> X} max(dis f, dis g, codis(f, g))

by depth-first enumeration of all map pairs in mixed-radix order
(``f[0]`` most significant, ``g[-1]`` least).  Branches whose partial
distortion already exceeds the incumbent are pruned; the incumbent is only
replaced by a strictly better pair, so the witness is the first optimal pair
in enumeration order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .core import FiniteMetricSpace
from .errors import BudgetExceededError, FPDMSError, NotClusteredError

DEFAULT_MAX_SIZE = 6


@dataclass(frozen=True)
class MapPair:
    f: tuple[int, ...]
    g: tuple[int, ...]
    distortion: float


def distortion(X: FiniteMetricSpace, Xp: FiniteMetricSpace, f, g) -> float:
    """Max of ``dis f``, ``dis g`` and ``codis(f, g)`` for explicit maps."""
    d, dp = X.d, Xp.d
    f, g = np.asarray(f), np.asarray(g)
    dis_f = np.abs(d - dp[np.ix_(f, f)]).max()
    dis_g = np.abs(d[np.ix_(g, g)] - dp).max()
    codis = np.abs(d[:, g] - dp[f, :]).max()
    return float(max(dis_f, dis_g, codis))


def _upper_bound(d, dp):
    # nearest-distance-profile guesses for f and g; only seeds the pruning bound
    n, m = len(d), len(dp)
    f = [min(range(m), key=lambda j: abs(max(dp[j]) - max(d[i]))) for i in range(n)]
    g = [min(range(n), key=lambda i: abs(max(d[i]) - max(dp[j]))) for j in range(m)]
    dis_f = max((abs(d[a][b] - dp[f[a]][f[b]]) for a in range(n) for b in range(n)), default=0.0)
    dis_g = max((abs(d[g[a]][g[b]] - dp[a][b]) for a in range(m) for b in range(m)), default=0.0)
    codis = max((abs(d[a][g[b]] - dp[f[a]][b]) for a in range(n) for b in range(m)), default=0.0)
    return max(dis_f, dis_g, codis)


def gh_distance_exact(X: FiniteMetricSpace, Xp: FiniteMetricSpace, max_size: int = DEFAULT_MAX_SIZE):
    """Exact Gromov-Hausdorff distance and one optimal :class:`MapPair`.

    Raises :class:`BudgetExceededError` if either space has more than
    ``max_size`` points.
    """
    n, m = X.n, Xp.n
    if n > max_size or m > max_size:
        raise BudgetExceededError(
            f"exact GH enumeration is capped at {max_size} points per space (got {n} and {m})"
        )
    d = X.d.tolist()
    dp = Xp.d.tolist()
    bound = _upper_bound(d, dp)
    best = [math.inf, None, None]
    f = [0] * n
    g = [0] * m

    def assign_g(j, cur):
        if j == m:
            if cur < best[0]:
                best[0], best[1], best[2] = cur, tuple(f), tuple(g)
            return
        limit = min(best[0], bound * (1 + 1e-12) + 1e-300)
        dpj = dp[j]
        for x in range(n):
            dx = d[x]
            c = cur
            for l in range(j):
                e = abs(dx[g[l]] - dpj[l])
                if e > c:
                    c = e
            if c > limit or c >= best[0]:
                continue
            for a in range(n):
                e = abs(d[a][x] - dp[f[a]][j])
                if e > c:
                    c = e
                    if c > limit or c >= best[0]:
                        break
            if c > limit or c >= best[0]:
                continue
            g[j] = x
            assign_g(j + 1, c)

    def assign_f(i, cur):
        if i == n:
            assign_g(0, cur)
            return
        di = d[i]
        for y in range(m):
            dpy = dp[y]
            c = cur
            for a in range(i):
                e = abs(di[a] - dpy[f[a]])
                if e > c:
                    c = e
            if c > bound * (1 + 1e-12) + 1e-300 or c >= best[0]:
                continue
            f[i] = y
            assign_f(i + 1, c)

    assign_f(0, 0.0)
    if best[1] is None:  # pragma: no cover - the bound is attained by construction
        raise FPDMSError("enumeration failed to find a map pair")
    value = best[0]
    return 0.5 * value, MapPair(best[1], best[2], value)


@dataclass(frozen=True)
class ClusterType:
    """Nonincreasing sequence of (cluster size - 1)."""

    r: tuple[int, ...]

    def __post_init__(self):
        r = tuple(int(x) for x in self.r)
        if any(x < 0 for x in r):
            raise FPDMSError(f"cluster type entries must be nonnegative: {r}")
        if any(a < b for a, b in zip(r, r[1:])):
            raise FPDMSError(f"cluster type must be nonincreasing: {r}")
        object.__setattr__(self, "r", r)

    @classmethod
    def parse(cls, text: str) -> ClusterType:
        text = text.strip().strip("<>⟨⟩")
        return cls(tuple(int(x) for x in text.split(",") if x.strip()))

    @property
    def norm1(self) -> int:
        return sum(self.r)

    def __len__(self):
        return len(self.r)

    def __str__(self):
        return "<" + ",".join(map(str, self.r)) + ">"


@dataclass(frozen=True)
class ClusterPartition:
    blocks: tuple[tuple[int, ...], ...]
    epsilon: float
    delta0: float | None = None


def _distance_matrix(space):
    if isinstance(space, FiniteMetricSpace):
        return np.asarray(space.d)
    if hasattr(space, "distance_matrix"):
        return space.distance_matrix()
    return np.asarray(space, dtype=float)


def cluster_partition(space, epsilon: float | None = None, reference=None) -> ClusterPartition:
    """Classes of the relation ``d(x1, x2) < epsilon``.

    ``space`` may be a :class:`FiniteMetricSpace` or a point config (Euclidean
    distances).  When ``epsilon`` is omitted it defaults to a quarter of the
    smallest positive distance of ``reference``.  Raises
    :class:`NotClusteredError` if the relation is not transitive.
    """
    d = _distance_matrix(space)
    delta0 = None
    if reference is not None:
        rd = _distance_matrix(reference)
        off = ~np.eye(len(rd), dtype=bool)
        delta0 = float(rd[off].min()) if off.any() else math.inf
        if epsilon is None:
            epsilon = delta0 / 4
    if epsilon is None:
        raise FPDMSError("either epsilon or a reference space is required")
    if not epsilon > 0:
        raise FPDMSError("epsilon must be positive")
    adj = d < epsilon
    _, labels = connected_components(adj, directed=False)
    blocks = {}
    for idx, lab in enumerate(labels):
        blocks.setdefault(lab, []).append(idx)
    for members in blocks.values():
        sub = adj[np.ix_(members, members)]
        if not sub.all():
            a, c = np.argwhere(~sub)[0]
            i, k = members[a], members[c]
            # a path i ~ ... ~ k exists; report a length-two witness along it
            j = _middle(adj, i, k, members)
            raise NotClusteredError(epsilon, (i, j, k) if j is not None else (i, i, k))
    ordered = tuple(sorted(tuple(b) for b in blocks.values()))
    return ClusterPartition(ordered, float(epsilon), delta0)


def _middle(adj, i, k, members):
    # shortest path from i to k inside the block; return a non-transitive triple
    prev = {i: None}
    frontier = [i]
    while frontier:
        nxt = []
        for u in frontier:
            for v in members:
                if adj[u, v] and v not in prev:
                    prev[v] = u
                    nxt.append(v)
        frontier = nxt
    path = [k]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    path.reverse()
    for a in range(len(path) - 2):
        x, y, z = path[a : a + 3]
        if not adj[x, z]:
            return y
    return None


def cluster_type(p: ClusterPartition) -> ClusterType:
    return ClusterType(tuple(sorted((len(b) - 1 for b in p.blocks), reverse=True)))


def type_leq(r: ClusterType, rp: ClusterType) -> bool:
    """Componentwise ``r <= r'`` after zero-padding the shorter sequence."""
    m = max(len(r), len(rp))
    a = r.r + (0,) * (m - len(r))
    b = rp.r + (0,) * (m - len(rp))
    return all(x <= y for x, y in zip(a, b))


class Verdict(enum.Enum):
    CONTINUOUS = "CONTINUOUS"
    DISCONTINUOUS_POSSIBLE = "DISCONTINUOUS-POSSIBLE"


def theorem_region(r: ClusterType, k: int) -> Verdict:
    """Whether magnitude is continuous along sequences clustered in type ``r``
    converging to a ``k``-point space."""
    if r.norm1 <= 2 or (r.norm1 == 3 and k == 1):
        return Verdict.CONTINUOUS
    return Verdict.DISCONTINUOUS_POSSIBLE
