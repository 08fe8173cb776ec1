"""Isometric embedding of the ordered cone of R^k into the line's
Wasserstein space.

A sorted k-tuple maps to the equal-weight atomic measure on the
rescaled coordinates sqrt(k) * x_i: each coordinate occupies one mass
slot of width 1/k, so the quantile-difference integral between two
embedded tuples reproduces the Euclidean distance exactly.  Without the
sqrt(k) factor the map contracts all distances by 1/sqrt(k); see
``unscaled_embedding_distance`` which documents that gap.  Because the
sorted cone contains arbitrarily large balls, the space contains flat
Euclidean triangles of every size.
"""

from __future__ import annotations

import math

import numpy as np

from .measures import Measure1D, from_atoms

__all__ = [
    "embed_sorted_tuple",
    "unscaled_embedding_distance",
    "flat_triangle",
]


def embed_sorted_tuple(x) -> Measure1D:
    """Equal-weight measure on sqrt(k) * x_i for a sorted tuple x.

    With this scaling the map is a genuine isometry from the sorted
    cone (with the Euclidean metric) into the Wasserstein space.
    Repeated coordinates simply merge into heavier atoms.
    """
    xs = [float(c) for c in x]
    if not xs:
        raise ValueError("empty tuple")
    for a, b in zip(xs, xs[1:]):
        if b < a:
            raise ValueError(f"tuple not sorted: {a} > {b}")
    k = len(xs)
    root_k = math.sqrt(k)
    return from_atoms((root_k * c, 1.0 / k) for c in xs)


def unscaled_embedding_distance(x, y) -> float:
    """Distance the unscaled map (atoms at x_i, not sqrt(k) x_i) would give.

    Equals ``|x - y| / sqrt(k)``: the plain coordinate embedding is an
    isometry only up to that constant, which is why
    :func:`embed_sorted_tuple` rescales.
    """
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.shape != ys.shape:
        raise ValueError("tuples must have equal length")
    return math.sqrt(float(((xs - ys) ** 2).sum()) / len(xs))


def flat_triangle(k: int, side: float) -> tuple[Measure1D, Measure1D, Measure1D]:
    """Three measures at pairwise distance ``side``, for any ``side >= 0``.

    An equilateral triangle is drawn in the plane spanned by the first
    two coordinates of R^k and translated deep into the sorted cone
    (consecutive coordinates of the anchor are 2*side apart, which
    dominates every vertex offset), then embedded.
    """
    if k < 2:
        raise ValueError(f"need k >= 2 coordinates, got {k}")
    if side < 0.0:
        raise ValueError(f"negative side {side}")
    anchor = 2.0 * side * np.arange(1, k + 1, dtype=float)
    a = anchor.copy()
    b = anchor.copy()
    b[0] += side
    c = anchor.copy()
    c[0] += 0.5 * side
    c[1] += math.sqrt(3.0) / 2.0 * side
    return (
        embed_sorted_tuple(a),
        embed_sorted_tuple(b),
        embed_sorted_tuple(c),
    )
