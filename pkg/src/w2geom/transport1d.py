"""Exact Wasserstein-2 distance and displacement geodesics on the line.

The squared distance is the integral over (0, 1) of the squared
difference of the two inverse distribution functions; on the piecewise
representation of :mod:`w2geom.measures` that integral is a finite sum
of closed forms, so distances here are exact up to rounding.  Geodesics
interpolate the inverse distribution functions affinely on a shared
breakpoint refinement, and the maximal interval of times over which the
interpolation stays non-decreasing (hence remains a measure) is computed
from per-piece jump and slope constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import (
    CANON_TOL,
    Measure1D,
    QuantilePieces,
    _build,
    to_quantile,
)

__all__ = [
    "Interval",
    "Geodesic1D",
    "wasserstein2",
    "geodesic",
    "geodesic_eval",
    "extension_interval",
    "geodesic_to_json",
]


def _fmt_bound(x: float) -> str:
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return format(x, "g")


@dataclass(frozen=True)
class Interval:
    """Closed interval of admissible geodesic times; bounds may be infinite."""

    lo: float
    hi: float

    def contains(self, t: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= t <= self.hi + slack

    @property
    def is_complete(self) -> bool:
        return self.lo == -math.inf and self.hi == math.inf

    def __str__(self) -> str:
        left = "(-inf" if self.lo == -math.inf else f"[{_fmt_bound(self.lo)}"
        right = "inf)" if self.hi == math.inf else f"{_fmt_bound(self.hi)}]"
        return f"{left}, {right}"


@dataclass(frozen=True)
class Geodesic1D:
    """Constant-speed geodesic stored as endpoint quantiles on a shared grid.

    ``lo0/hi0`` and ``lo1/hi1`` are the per-piece start and end values of
    the two endpoint quantile functions on the common breakpoints, so
    evaluation at any admissible time is exact (no sampled frames).
    """

    breaks: tuple[float, ...]
    lo0: tuple[float, ...]
    hi0: tuple[float, ...]
    lo1: tuple[float, ...]
    hi1: tuple[float, ...]
    speed: float
    extension: Interval

    def endpoint_quantiles(self) -> tuple[QuantilePieces, QuantilePieces]:
        return (
            QuantilePieces(self.breaks, self.lo0, self.hi0),
            QuantilePieces(self.breaks, self.lo1, self.hi1),
        )


def _piece_value(q: QuantilePieces, i: int, m: float) -> float:
    b0, b1 = q.breaks[i], q.breaks[i + 1]
    l, h = q.lo[i], q.hi[i]
    if h == l or b1 <= b0:
        return l
    return l + (h - l) * (m - b0) / (b1 - b0)


def _align(q0: QuantilePieces, q1: QuantilePieces):
    """Common breakpoint refinement of two quantile functions.

    Returns numpy arrays (breaks, lo0, hi0, lo1, hi1).  Breakpoints of
    the two inputs closer than CANON_TOL are identified, so that equal
    jumps line up instead of producing hairline slivers.
    """
    k0, k1 = len(q0.lo), len(q1.lo)
    i = j = 0
    s0, s1 = q0.lo[0], q1.lo[0]
    cur = 0.0
    breaks = [0.0]
    lo0: list[float] = []
    hi0: list[float] = []
    lo1: list[float] = []
    hi1: list[float] = []
    while i < k0 and j < k1:
        e0, e1 = q0.breaks[i + 1], q1.breaks[j + 1]
        adv0 = e0 <= e1 + CANON_TOL
        adv1 = e1 <= e0 + CANON_TOL
        nxt = max(e0, e1) if (adv0 and adv1) else (e0 if adv0 else e1)
        end0 = q0.hi[i] if adv0 else _piece_value(q0, i, nxt)
        end1 = q1.hi[j] if adv1 else _piece_value(q1, j, nxt)
        if nxt - cur > CANON_TOL:
            breaks.append(nxt)
            lo0.append(s0)
            hi0.append(end0)
            lo1.append(s1)
            hi1.append(end1)
        # hairline slices (mass <= CANON_TOL) fold into the next piece
        i2, j2 = i + adv0, j + adv1
        s0 = q0.lo[i2] if adv0 and i2 < k0 else end0
        s1 = q1.lo[j2] if adv1 and j2 < k1 else end1
        i, j = i2, j2
        cur = nxt
    breaks[-1] = 1.0
    return (
        np.asarray(breaks),
        np.asarray(lo0),
        np.asarray(hi0),
        np.asarray(lo1),
        np.asarray(hi1),
    )


def _sq_integral(breaks, lo_d, hi_d) -> float:
    # integral of the piecewise-affine function with per-piece endpoint
    # values (lo_d, hi_d), squared: sum of w*(l^2 + l*h + h^2)/3
    w = np.diff(breaks)
    return float(np.sum(w * (lo_d * lo_d + lo_d * hi_d + hi_d * hi_d)) / 3.0)


def wasserstein2(mu0: Measure1D, mu1: Measure1D) -> float:
    """Quadratic Wasserstein distance between two measures on the line.

    Exact closed-form integral of the squared quantile difference;
    symmetric, nonnegative, and zero exactly on equal canonical forms.
    """
    if mu0 == mu1:
        return 0.0
    breaks, lo0, hi0, lo1, hi1 = _align(to_quantile(mu0), to_quantile(mu1))
    d2 = _sq_integral(breaks, lo0 - lo1, hi0 - hi1)
    return math.sqrt(max(d2, 0.0))


def _extension_from_aligned(lo0, hi0, lo1, hi1) -> Interval:
    # Per-piece slopes and inter-piece jumps of each endpoint quantile;
    # the time-t combination (1-t)*g0 + t*g1 must stay >= 0 for all of
    # them.  Each pair cuts out a half-line of admissible times.
    g0 = np.concatenate([hi0 - lo0, lo0[1:] - hi0[:-1]])
    g1 = np.concatenate([hi1 - lo1, lo1[1:] - hi1[:-1]])
    g0 = np.maximum(g0, 0.0)
    g1 = np.maximum(g1, 0.0)
    lo_bound, hi_bound = -math.inf, math.inf
    for p, q in zip(g0, g1):
        d = q - p
        if abs(d) <= CANON_TOL:
            continue  # equal jumps impose no constraint
        if d > 0.0:
            lo_bound = max(lo_bound, -p / d)
        else:
            hi_bound = min(hi_bound, p / -d)
    lo_bound = min(lo_bound, 0.0) + 0.0  # normalizes -0.0 and guards dust
    hi_bound = max(hi_bound, 1.0)
    return Interval(lo_bound, hi_bound)


def geodesic(mu0: Measure1D, mu1: Measure1D) -> Geodesic1D:
    """The unique constant-speed geodesic from ``mu0`` to ``mu1``.

    The endpoints' quantile functions are merged onto one breakpoint
    refinement; the speed equals their distance and the extension
    interval is the maximal set of times at which the affine
    interpolation of the quantiles is still non-decreasing.
    """
    breaks, lo0, hi0, lo1, hi1 = _align(to_quantile(mu0), to_quantile(mu1))
    d2 = _sq_integral(breaks, lo0 - lo1, hi0 - hi1)
    return Geodesic1D(
        breaks=tuple(breaks),
        lo0=tuple(lo0),
        hi0=tuple(hi0),
        lo1=tuple(lo1),
        hi1=tuple(hi1),
        speed=math.sqrt(max(d2, 0.0)),
        extension=_extension_from_aligned(lo0, hi0, lo1, hi1),
    )


def geodesic_eval(g: Geodesic1D, t: float) -> Measure1D:
    """Measure at time ``t`` on (the maximal extension of) the geodesic.

    Raises ValueError when ``t`` lies outside the extension interval:
    there the interpolated quantile is no longer non-decreasing and the
    geodesic does not extend.  Atoms that collide (closer than 1e-12)
    are merged, so boundary evaluations come out canonical.
    """
    if not g.extension.contains(t, slack=CANON_TOL):
        raise ValueError(
            f"time {t} outside the maximal extension interval {g.extension}"
        )
    lo_t = (1.0 - t) * np.asarray(g.lo0) + t * np.asarray(g.lo1)
    hi_t = (1.0 - t) * np.asarray(g.hi0) + t * np.asarray(g.hi1)
    breaks = g.breaks
    atoms = []
    pieces = []
    for k in range(len(lo_t)):
        m = breaks[k + 1] - breaks[k]
        if m <= 0.0:
            continue
        spread = hi_t[k] - lo_t[k]
        if abs(spread) <= CANON_TOL:
            atoms.append((0.5 * (lo_t[k] + hi_t[k]), m))
        else:
            pieces.append((lo_t[k], hi_t[k], m))
    return _build(atoms, pieces, validate=False)


def extension_interval(mu0: Measure1D, mu1: Measure1D) -> Interval:
    """Maximal interval of times over which the geodesic extends.

    Always a closed interval containing [0, 1]; infinite on both sides
    exactly when the interpolation is a translation (all jumps and
    slopes of the two quantiles agree).
    """
    _, lo0, hi0, lo1, hi1 = _align(to_quantile(mu0), to_quantile(mu1))
    return _extension_from_aligned(lo0, hi0, lo1, hi1)


def _bound_to_json(x: float):
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return x


def geodesic_to_json(g: Geodesic1D) -> dict:
    """JSON-serializable dict: breakpoints, both value rows per endpoint,
    speed, and extension bounds (infinities as strings)."""
    return {
        "breaks": list(g.breaks),
        "q0": {"lo": list(g.lo0), "hi": list(g.hi0)},
        "q1": {"lo": list(g.lo1), "hi": list(g.hi1)},
        "speed": g.speed,
        "extension": {
            "lo": _bound_to_json(g.extension.lo),
            "hi": _bound_to_json(g.extension.hi),
        },
    }
