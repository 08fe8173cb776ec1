"""Canonical one-dimensional probability measures with finite second moment.

A measure is a finite mixture of point masses ("atoms") and intervals
carrying uniform density ("uniform pieces").  Everything downstream
(distances, geodesics, isometries) works through the left-continuous
inverse distribution function, so this module also owns that
representation (:class:`QuantilePieces`) together with the conversions
in both directions, the elementary statistics (barycenter, deviation)
and affine pushforwards.

All values are immutable after construction and every operation is a
deterministic pure function.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "CANON_TOL",
    "CMP_TOL",
    "SizeCapError",
    "Measure1D",
    "QuantilePieces",
    "dirac",
    "from_atoms",
    "from_mixture",
    "uniform_measure",
    "quantile",
    "to_quantile",
    "measure_from_quantile",
    "barycenter",
    "deviation",
    "second_moment_about",
    "pushforward_affine",
    "measure_to_json",
    "measure_from_json",
]

# Positions and mass breakpoints closer than CANON_TOL are merged during
# canonicalization; total mass may deviate from 1 by at most CANON_TOL.
CANON_TOL = 1e-12
# Default tolerance for floating-point comparisons downstream.
CMP_TOL = 1e-9


class SizeCapError(ValueError):
    """An input exceeds a configured size cap."""


@dataclass(frozen=True)
class Measure1D:
    """Probability measure on the line in canonical form.

    atoms: ``((position, weight), ...)`` with strictly increasing
    positions and positive weights.
    uniform: ``((a, b, mass), ...)`` disjoint intervals with ``a < b``
    carrying constant density ``mass / (b - a)``, sorted by position and
    split so that no atom sits strictly inside an interval.

    Use the factories (:func:`from_atoms`, :func:`from_mixture`,
    :func:`dirac`, :func:`uniform_measure`) instead of the raw
    constructor; they validate and canonicalize.
    """

    atoms: tuple[tuple[float, float], ...] = ()
    uniform: tuple[tuple[float, float, float], ...] = ()

    @property
    def is_atomic(self) -> bool:
        return not self.uniform

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True)
class QuantilePieces:
    """Left-continuous non-decreasing piecewise-linear inverse CDF.

    Piece ``i`` covers the mass interval ``(breaks[i], breaks[i+1]]`` and
    interpolates linearly from ``lo[i]`` (right limit at the start) to
    ``hi[i]`` (attained value at the end).  Atoms are pieces with
    ``lo == hi``; uniform pieces ramp upward.
    """

    breaks: tuple[float, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __call__(self, m: float) -> float:
        if not 0.0 < m < 1.0:
            raise ValueError(f"mass coordinate {m} outside (0, 1)")
        i = bisect.bisect_left(self.breaks, m) - 1
        i = min(max(i, 0), len(self.lo) - 1)
        b0, b1 = self.breaks[i], self.breaks[i + 1]
        l, h = self.lo[i], self.hi[i]
        if h == l or b1 <= b0:
            return l
        return l + (h - l) * (m - b0) / (b1 - b0)


def _merge_atoms(pairs: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Sort atoms and merge positions closer than CANON_TOL (mass-weighted)."""
    out: list[tuple[float, float]] = []
    for x, w in sorted(pairs):
        if out and x - out[-1][0] <= CANON_TOL:
            px, pw = out[-1]
            tw = pw + w
            out[-1] = ((px * pw + x * w) / tw, tw)
        else:
            out.append((x, w))
    return out


def _canonical_pieces(
    pieces: list[tuple[float, float, float]], cuts: list[float]
) -> tuple[tuple[float, float, float], ...]:
    """Split overlapping uniform pieces into disjoint constant-density
    intervals, also cutting at the given atom positions, then merge back
    contiguous runs of equal density."""
    if not pieces:
        return ()
    pts = []
    for a, b, _ in pieces:
        pts += [a, b]
    lo = min(p[0] for p in pieces)
    hi = max(p[1] for p in pieces)
    pts += [x for x in cuts if lo < x < hi]
    pts.sort()
    reps = [pts[0]]
    for p in pts[1:]:
        if p - reps[-1] > CANON_TOL:
            reps.append(p)
    split: list[tuple[float, float, float]] = []
    for c0, c1 in zip(reps, reps[1:]):
        mid = 0.5 * (c0 + c1)
        dens = sum(
            m / (b - a) for a, b, m in pieces if a - CANON_TOL <= mid <= b + CANON_TOL
        )
        if dens > 0.0:
            split.append((c0, c1, dens * (c1 - c0)))
    merged = [split[0]]
    for a, b, m in split[1:]:
        pa, pb, pm = merged[-1]
        d_prev = pm / (pb - pa)
        d_cur = m / (b - a)
        if a - pb <= CANON_TOL and abs(d_prev - d_cur) <= CANON_TOL * max(1.0, d_prev, d_cur):
            merged[-1] = (pa, b, pm + m)
        else:
            merged.append((a, b, m))
    return tuple(merged)


def _build(
    atom_list: list[tuple[float, float]],
    piece_list: list[tuple[float, float, float]],
    validate: bool = True,
) -> Measure1D:
    atoms = [(float(x), float(w)) for x, w in atom_list]
    pieces = [(float(a), float(b), float(m)) for a, b, m in piece_list]
    if validate:
        if not atoms and not pieces:
            raise ValueError("empty measure: need at least one atom or uniform piece")
        for x, w in atoms:
            if not (math.isfinite(x) and math.isfinite(w)):
                raise ValueError(f"non-finite atom ({x}, {w})")
            if w <= 0.0:
                raise ValueError(f"non-positive weight {w} at position {x}")
        for a, b, m in pieces:
            if not all(map(math.isfinite, (a, b, m))):
                raise ValueError(f"non-finite uniform piece ({a}, {b}, {m})")
            if m <= 0.0:
                raise ValueError(f"non-positive mass {m} on [{a}, {b}]")
            if b < a:
                raise ValueError(f"inverted interval [{a}, {b}]")
        total = sum(w for _, w in atoms) + sum(m for *_, m in pieces)
        if abs(total - 1.0) > CANON_TOL:
            raise ValueError(f"total mass {total!r} outside tolerance of 1")
    kept = []
    for a, b, m in pieces:
        if b - a <= CANON_TOL:
            atoms.append((0.5 * (a + b), m))
        else:
            kept.append((a, b, m))
    atoms = _merge_atoms(atoms)
    canon_pieces = _canonical_pieces(kept, [x for x, _ in atoms])
    total = sum(w for _, w in atoms) + sum(m for *_, m in canon_pieces)
    if total <= 0.0:
        raise ValueError("zero total mass")
    return Measure1D(
        atoms=tuple((x, w / total) for x, w in atoms),
        uniform=tuple((a, b, m / total) for a, b, m in canon_pieces),
    )


def from_atoms(pairs) -> Measure1D:
    """Build a purely atomic measure from ``(position, weight)`` pairs.

    Weights must be positive and sum to 1 within 1e-12.  Duplicate
    positions are merged by weight addition and the result is sorted,
    giving one deterministic canonical form.
    """
    return _build(list(pairs), [], validate=True)


def from_mixture(atoms=(), uniform=()) -> Measure1D:
    """Build a measure from atoms and uniform pieces ``(a, b, mass)``."""
    return _build(list(atoms), list(uniform), validate=True)


def dirac(x: float) -> Measure1D:
    """Unit point mass at ``x``."""
    return _build([(x, 1.0)], [], validate=False)


def uniform_measure(a: float, b: float) -> Measure1D:
    """Uniform probability measure on the interval ``[a, b]``."""
    return _build([], [(a, b, 1.0)], validate=True)


@lru_cache(maxsize=8192)
def _quantile_of(mu: Measure1D) -> QuantilePieces:
    segs = []
    for x, w in mu.atoms:
        segs.append((x, x, w, x, x))
    for a, b, m in mu.uniform:
        segs.append((a, b, m, a, b))
    segs.sort(key=lambda s: (s[0], s[1]))
    breaks = [0.0]
    lo: list[float] = []
    hi: list[float] = []
    acc = 0.0
    for _, _, m, vlo, vhi in segs:
        acc += m
        breaks.append(acc)
        lo.append(vlo)
        hi.append(vhi)
    breaks[-1] = 1.0
    return QuantilePieces(tuple(breaks), tuple(lo), tuple(hi))


def to_quantile(mu: Measure1D) -> QuantilePieces:
    """Inverse distribution function of ``mu`` (left-continuous)."""
    return _quantile_of(mu)


def measure_from_quantile(q: QuantilePieces) -> Measure1D:
    """Rebuild the measure represented by a piecewise quantile function.

    Inverse of :func:`to_quantile` on canonical forms: constant pieces
    become atoms, ramps become uniform pieces.
    """
    atoms = []
    pieces = []
    for b0, b1, l, h in zip(q.breaks, q.breaks[1:], q.lo, q.hi):
        m = b1 - b0
        if m <= 0.0:
            continue
        if h - l <= CANON_TOL:
            atoms.append((0.5 * (l + h), m))
        else:
            pieces.append((l, h, m))
    return _build(atoms, pieces, validate=False)


def quantile(mu: Measure1D, m: float) -> float:
    """Value of the inverse distribution function at mass ``m`` in (0, 1).

    Left-continuous convention: at a breakpoint the value of the piece
    ending there is returned.
    """
    return to_quantile(mu)(m)


def barycenter(mu: Measure1D) -> float:
    """Center of mass (mean) of the measure."""
    s = sum(w * x for x, w in mu.atoms)
    s += sum(m * 0.5 * (a + b) for a, b, m in mu.uniform)
    return s


def second_moment_about(mu: Measure1D, c: float) -> float:
    """Integral of ``(x - c)^2`` against the measure, in closed form."""
    s = sum(w * (x - c) ** 2 for x, w in mu.atoms)
    for a, b, m in mu.uniform:
        s += m * ((b - c) ** 3 - (a - c) ** 3) / (3.0 * (b - a))
    return s


def deviation(mu: Measure1D) -> float:
    """Distance to the Dirac mass at the barycenter (the standard deviation)."""
    return math.sqrt(max(second_moment_about(mu, barycenter(mu)), 0.0))


def pushforward_affine(mu: Measure1D, a: float, b: float) -> Measure1D:
    """Pushforward of the measure under ``x -> a*x + b``.

    ``a < 0`` reverses the order (re-canonicalized); ``a = 0`` collapses
    everything to the Dirac mass at ``b``.
    """
    atoms = [(a * x + b, w) for x, w in mu.atoms]
    pieces = []
    for p, q, m in mu.uniform:
        lo_, hi_ = a * p + b, a * q + b
        if lo_ > hi_:
            lo_, hi_ = hi_, lo_
        pieces.append((lo_, hi_, m))
    return _build(atoms, pieces, validate=False)


def measure_to_json(mu: Measure1D) -> dict:
    """JSON-serializable dict: ``{"atoms": [{"x", "w"}...], "uniform": [{"a", "b", "mass"}...]}``."""
    return {
        "atoms": [{"x": x, "w": w} for x, w in mu.atoms],
        "uniform": [{"a": a, "b": b, "mass": m} for a, b, m in mu.uniform],
    }


def measure_from_json(obj: dict) -> Measure1D:
    """Parse the measure JSON format; either list may be empty but not both."""
    try:
        atoms = [(d["x"], d["w"]) for d in obj.get("atoms", [])]
        pieces = [(d["a"], d["b"], d["mass"]) for d in obj.get("uniform", [])]
    except (TypeError, AttributeError) as exc:
        raise ValueError(f"malformed measure JSON: {exc}") from exc
    if not atoms and not pieces:
        raise ValueError("measure JSON needs at least one atom or uniform piece")
    return from_mixture(atoms, pieces)
