"""Exact discrete optimal transport between atomic measures in R^n.

The solver is a transportation simplex (vertex-following on the
transportation polytope, northwest-corner start, dual pricing) with a
deterministic anti-cycling rule, so the returned plan is always a vertex
with at most ``m + n - 1`` entries.  A brute-force assignment
enumeration for small equal-weight inputs doubles as an independent
oracle.  On top of the solver sit certifiers for coupling structure:
cyclical monotonicity, translation detection, the quadratic inequality
that rules out complete non-translation geodesics, the
independent-coupling cost and dilation distances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .measures import CANON_TOL, SizeCapError

__all__ = [
    "MeasureRn",
    "Coupling",
    "CycleWitness",
    "GeodesicWitness",
    "measure_rn",
    "measure_rn_to_json",
    "measure_rn_from_json",
    "translate",
    "dilate",
    "discrete_ot",
    "brute_force_assignment",
    "cyclical_monotonicity_check",
    "is_translation_coupling",
    "geodesic_inequality_witness",
    "independent_coupling_cost",
    "dilation_distance",
]

DEFAULT_SIZE_CAP = 64


@dataclass(frozen=True)
class MeasureRn:
    """Finitely atomic probability measure in R^n, points sorted and distinct."""

    points: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def points_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)

    def weights_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


def measure_rn(points, weights=None) -> MeasureRn:
    """Canonical atomic measure from points and (optional, else uniform) weights.

    Points are sorted lexicographically and duplicates (component-wise
    within 1e-12) merged by weight addition; weights must be positive and
    sum to 1 within 1e-12.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    k = len(pts)
    if weights is None:
        w = np.full(k, 1.0 / k)
    else:
        w = np.asarray(weights, dtype=float)
    if len(w) != k:
        raise ValueError(f"{k} points but {len(w)} weights")
    if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(w)):
        raise ValueError("non-finite point or weight")
    if np.any(w <= 0.0):
        raise ValueError("non-positive weight")
    if abs(float(w.sum()) - 1.0) > CANON_TOL:
        raise ValueError(f"total mass {w.sum()!r} outside tolerance of 1")
    order = np.lexsort(pts.T[::-1])
    pts, w = pts[order], w[order]
    out_pts: list[np.ndarray] = []
    out_w: list[float] = []
    for p, wi in zip(pts, w):
        if out_pts and np.max(np.abs(p - out_pts[-1])) <= CANON_TOL:
            tw = out_w[-1] + wi
            out_pts[-1] = (out_pts[-1] * out_w[-1] + p * wi) / tw
            out_w[-1] = tw
        else:
            out_pts.append(p.copy())
            out_w.append(float(wi))
    total = sum(out_w)
    return MeasureRn(
        points=tuple(tuple(float(c) for c in p) for p in out_pts),
        weights=tuple(wi / total for wi in out_w),
    )


def measure_rn_to_json(mu: MeasureRn) -> dict:
    return {
        "dim": mu.dim,
        "points": [list(p) for p in mu.points],
        "weights": list(mu.weights),
    }


def measure_rn_from_json(obj: dict) -> MeasureRn:
    try:
        points = obj["points"]
        weights = obj.get("weights")
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed R^n measure JSON: {exc}") from exc
    mu = measure_rn(points, weights)
    if "dim" in obj and int(obj["dim"]) != mu.dim:
        raise ValueError(f"declared dim {obj['dim']} but points have dim {mu.dim}")
    return mu


def translate(mu: MeasureRn, v) -> MeasureRn:
    return measure_rn(mu.points_array() + np.asarray(v, dtype=float), mu.weights)


def dilate(mu: MeasureRn, center, ratio: float) -> MeasureRn:
    c = np.asarray(center, dtype=float)
    return measure_rn(c + ratio * (mu.points_array() - c), mu.weights)


@dataclass(frozen=True)
class Coupling:
    """Transport plan between two atomic measures.

    entries: ``(source index, target index, mass)`` triples; row sums
    must reproduce the source weights and column sums the target weights.
    """

    source: MeasureRn
    target: MeasureRn
    entries: tuple[tuple[int, int, float], ...]

    def cost(self) -> float:
        x = self.source.points_array()
        y = self.target.points_array()
        return float(
            sum(m * np.sum((x[i] - y[j]) ** 2) for i, j, m in self.entries)
        )

    def marginals(self) -> tuple[np.ndarray, np.ndarray]:
        row = np.zeros(len(self.source.points))
        col = np.zeros(len(self.target.points))
        for i, j, m in self.entries:
            row[i] += m
            col[j] += m
        return row, col

    def marginal_defect(self) -> float:
        row, col = self.marginals()
        return float(
            max(
                np.max(np.abs(row - self.source.weights_array())),
                np.max(np.abs(col - self.target.weights_array())),
            )
        )


def _tree_duals(row_basis, col_basis, cost, m, n):
    u = np.full(m, np.nan)
    v = np.full(n, np.nan)
    u[0] = 0.0
    stack = [(True, 0)]
    while stack:
        is_row, k = stack.pop()
        if is_row:
            for j in row_basis[k]:
                if math.isnan(v[j]):
                    v[j] = cost[k, j] - u[k]
                    stack.append((False, j))
        else:
            for i in col_basis[k]:
                if math.isnan(u[i]):
                    u[i] = cost[i, k] - v[k]
                    stack.append((True, i))
    if np.isnan(u).any() or np.isnan(v).any():
        raise RuntimeError("basis lost spanning-tree structure")
    return u, v


def _basis_cycle(row_basis, col_basis, enter):
    """Unique cycle created by adding ``enter`` to the basis tree.

    Returned as an alternating list of cells starting at ``enter``;
    even positions gain flow, odd positions lose it.
    """
    ie, je = enter
    parent: dict[tuple[bool, int], tuple[bool, int] | None] = {(False, je): None}
    stack = [(False, je)]
    while stack:
        node = stack.pop()
        is_row, k = node
        neighbours = row_basis[k] if is_row else col_basis[k]
        for other in neighbours:
            nxt = (not is_row, other)
            if nxt not in parent:
                parent[nxt] = node
                stack.append(nxt)
    cells = [enter]
    node = (True, ie)
    while parent[node] is not None:
        prev = parent[node]
        if node[0]:
            cells.append((node[1], prev[1]))
        else:
            cells.append((prev[1], node[1]))
        node = prev
    return cells


def _transport_simplex(a, b, cost):
    m, n = cost.shape
    flow = np.zeros((m, n))
    basis: set[tuple[int, int]] = set()
    arem = a.astype(float).copy()
    brem = b.astype(float).copy()
    i = j = 0
    while True:
        t = min(arem[i], brem[j])
        flow[i, j] = t
        basis.add((i, j))
        arem[i] -= t
        brem[j] -= t
        if i == m - 1 and j == n - 1:
            break
        if j == n - 1:
            i += 1
        elif i == m - 1:
            j += 1
        elif arem[i] <= brem[j]:
            i += 1
        else:
            j += 1
    row_basis = [set() for _ in range(m)]
    col_basis = [set() for _ in range(n)]
    for bi, bj in basis:
        row_basis[bi].add(bj)
        col_basis[bj].add(bi)
    tol = 1e-11 * max(1.0, float(cost.max()))
    best = math.inf
    stall = 0
    bland = False
    max_iter = 50 * (m + n) ** 2 + 1000
    for _ in range(max_iter):
        u, v = _tree_duals(row_basis, col_basis, cost, m, n)
        reduced = cost - u[:, None] - v[None, :]
        enter = None
        if bland:
            # Bland-style rule: first improving cell in lexicographic order
            for bi in range(m):
                hits = np.nonzero(reduced[bi] < -tol)[0]
                for bj in hits:
                    if (bi, int(bj)) not in basis:
                        enter = (bi, int(bj))
                        break
                if enter:
                    break
        else:
            masked = reduced.copy()
            for bi, bj in basis:
                masked[bi, bj] = 0.0
            k = int(np.argmin(masked))
            cand = divmod(k, n)
            if masked[cand] < -tol:
                enter = cand
        if enter is None:
            return flow, basis
        cycle = _basis_cycle(row_basis, col_basis, enter)
        losers = cycle[1::2]
        theta = min(flow[c] for c in losers)
        leave = min(c for c in losers if flow[c] == theta)
        for idx, c in enumerate(cycle):
            flow[c] += theta if idx % 2 == 0 else -theta
        for c in losers:
            if flow[c] < 0.0:
                flow[c] = 0.0
        flow[leave] = 0.0
        basis.add(enter)
        row_basis[enter[0]].add(enter[1])
        col_basis[enter[1]].add(enter[0])
        basis.remove(leave)
        row_basis[leave[0]].discard(leave[1])
        col_basis[leave[1]].discard(leave[0])
        obj = float((flow * cost).sum())
        if obj < best - tol:
            best = obj
            stall = 0
        else:
            stall += 1
            if stall > 4 * (m + n):
                bland = True  # degenerate stretch, switch to the safe rule
    raise RuntimeError("transportation simplex did not terminate")


def discrete_ot(
    mu: MeasureRn, nu: MeasureRn, size_cap: int = DEFAULT_SIZE_CAP
) -> tuple[Coupling, float]:
    """Exact optimal coupling and squared-distance cost between atomic measures.

    The plan is a vertex of the transportation polytope, so it has at
    most ``len(mu) + len(nu) - 1`` entries.  Raises
    :class:`~w2geom.measures.SizeCapError` beyond the size cap.
    """
    if mu.dim != nu.dim:
        raise ValueError(f"dimension mismatch: {mu.dim} vs {nu.dim}")
    m, n = len(mu.points), len(nu.points)
    if m > size_cap or n > size_cap:
        raise SizeCapError(f"support sizes {m}x{n} exceed the cap {size_cap}")
    x = mu.points_array()
    y = nu.points_array()
    cost = ((x[:, None, :] - y[None, :, :]) ** 2).sum(axis=2)
    flow, basis = _transport_simplex(mu.weights_array(), nu.weights_array(), cost)
    entries = tuple(
        (i, j, float(flow[i, j])) for i, j in sorted(basis) if flow[i, j] > 1e-15
    )
    total = float(sum(cost[i, j] * f for i, j, f in entries))
    return Coupling(mu, nu, entries), total


@lru_cache(maxsize=None)
def _all_perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=int)


def brute_force_assignment(
    mu: MeasureRn, nu: MeasureRn, max_size: int = 8
) -> tuple[tuple[int, ...], float]:
    """Independent oracle: minimum over all matchings of equal-mass atoms.

    Only for equal-weight measures with the same (small) support size;
    enumerates every permutation, so keep ``max_size`` moderate.
    Returns (optimal permutation, optimal cost).
    """
    m, n = len(mu.points), len(nu.points)
    if m != n:
        raise ValueError("assignment oracle needs equal support sizes")
    if m > max_size:
        raise SizeCapError(f"assignment enumeration capped at {max_size}, got {m}")
    w = 1.0 / m
    if any(abs(wi - w) > 1e-9 for wi in mu.weights + nu.weights):
        raise ValueError("assignment oracle needs equal weights")
    x = mu.points_array()
    y = nu.points_array()
    cost = ((x[:, None, :] - y[None, :, :]) ** 2).sum(axis=2)
    perms = _all_perms(m)
    totals = cost[np.arange(m)[None, :], perms].sum(axis=1)
    k = int(np.argmin(totals))
    return tuple(int(c) for c in perms[k]), float(totals[k] * w)


@dataclass(frozen=True)
class CycleWitness:
    """Two support pairs violating cyclical monotonicity."""

    pair_a: tuple[tuple[float, ...], tuple[float, ...]]
    pair_b: tuple[tuple[float, ...], tuple[float, ...]]
    value: float


def cyclical_monotonicity_check(plan: Coupling, tol: float = 1e-9):
    """None when every pair of support pairs has nonnegative displacement
    inner product (within ``-tol``); otherwise the violating witness."""
    x = plan.source.points_array()
    y = plan.target.points_array()
    for (ia, ja, _), (ib, jb, _) in itertools.combinations(plan.entries, 2):
        val = float(np.dot(x[ib] - x[ia], y[jb] - y[ja]))
        if val < -tol:
            return CycleWitness(
                pair_a=(tuple(x[ia]), tuple(y[ja])),
                pair_b=(tuple(x[ib]), tuple(y[jb])),
                value=val,
            )
    return None


def is_translation_coupling(plan: Coupling, tol: float = 1e-9):
    """The common displacement vector if the plan translates every atom,
    else None."""
    x = plan.source.points_array()
    y = plan.target.points_array()
    i0, j0, _ = plan.entries[0]
    u = y[j0] - x[i0]
    for i, j, _ in plan.entries[1:]:
        if np.max(np.abs((y[j] - x[i]) - u)) > tol:
            return None
    return u


@dataclass(frozen=True)
class GeodesicWitness:
    """Times r < s at which extending the plan's geodesic would violate
    optimality, with the two support pairs producing the violation."""

    r: float
    s: float
    pair_a: tuple[tuple[float, ...], tuple[float, ...]]
    pair_b: tuple[tuple[float, ...], tuple[float, ...]]
    value: float


def geodesic_inequality_witness(plan: Coupling, tol: float = 1e-9):
    """None when the plan is a translation (so its geodesic extends to all
    times); otherwise explicit times r < s making the quadratic
    ``|u|^2 + (r+s) u.v + rs |v|^2`` negative.

    The witness is analytic: with r = -s the cross term drops and any
    ``s > |u|/|v|`` works, so ``s = |u|/|v| + 1`` is used.
    """
    x = plan.source.points_array()
    y = plan.target.points_array()
    for (ia, ja, _), (ib, jb, _) in itertools.combinations(plan.entries, 2):
        u = x[ib] - x[ia]
        v = (y[jb] - y[ja]) - u
        vn = float(np.linalg.norm(v))
        if vn > tol:
            s = float(np.linalg.norm(u)) / vn + 1.0
            r = -s
            value = float(np.dot(u, u) + (r + s) * np.dot(u, v) + r * s * vn * vn)
            return GeodesicWitness(
                r=r,
                s=s,
                pair_a=(tuple(x[ia]), tuple(y[ja])),
                pair_b=(tuple(x[ib]), tuple(y[jb])),
                value=value,
            )
    return None


def _center_and_var(mu: MeasureRn) -> tuple[np.ndarray, float]:
    x = mu.points_array()
    w = mu.weights_array()
    g = w @ x
    return g, float(w @ ((x - g) ** 2).sum(axis=1))


def independent_coupling_cost(mu: MeasureRn, nu: MeasureRn) -> float:
    """Cost of the product coupling: ``|g - h|^2 + sigma^2 + rho^2``.

    Always an upper bound on the optimal cost; equal to it exactly when
    the supports lie in orthogonal affine subspaces.
    """
    if mu.dim != nu.dim:
        raise ValueError(f"dimension mismatch: {mu.dim} vs {nu.dim}")
    g, var_mu = _center_and_var(mu)
    h, var_nu = _center_and_var(nu)
    return float(((g - h) ** 2).sum()) + var_mu + var_nu


def dilation_distance(mu: MeasureRn, center, ratio: float) -> float:
    """Distance from a measure to its dilate: ``|1 - ratio| * d(mu, delta_center)``.

    For ``ratio >= 0`` the dilation map is cyclically monotone and this
    equals the optimal cost; for negative ratios the deterministic
    dilation coupling is no longer optimal in general and the value is
    only an upper bound (take a symmetric measure and ratio -1: the
    dilate equals the measure but the formula gives twice the
    deviation).
    """
    c = np.asarray(center, dtype=float)
    x = mu.points_array()
    w = mu.weights_array()
    dev = math.sqrt(float(w @ ((x - c) ** 2).sum(axis=1)))
    return abs(1.0 - ratio) * dev
