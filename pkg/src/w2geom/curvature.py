"""Comparison-triangle diagnostics.

For measures on the line every triangle matches its Euclidean comparison
triangle exactly (the defect below vanishes), because the squared
distance is a quadratic integral of quantile functions.  In the plane
that fails: measures with orthogonal supports admit several optimal
plans of equal cost, hence distinct geodesics between the same
endpoints, and the induced triangles have strictly positive defect.
"""

from __future__ import annotations

from dataclasses import dataclass

from .measures import Measure1D
from .transport1d import geodesic, geodesic_eval, wasserstein2
from .transport_rn import Coupling, MeasureRn, discrete_ot, measure_rn

__all__ = [
    "comparison_defect",
    "displacement_interpolation",
    "BranchingWitness",
    "branching_witness",
]


def displacement_interpolation(plan: Coupling, t: float) -> MeasureRn:
    """Measure at time ``t`` of the geodesic induced by a coupling:
    each entry's mass moves along the straight segment between its
    endpoints."""
    x = plan.source.points_array()
    y = plan.target.points_array()
    pts = [(1.0 - t) * x[i] + t * y[j] for i, j, _ in plan.entries]
    return measure_rn(pts, [m for _, _, m in plan.entries])


def comparison_defect(x, y, z, t: float, plan: Coupling | None = None) -> float:
    """Defect of the triangle (x, y, z) against its Euclidean comparison.

    Returns ``d^2(y, g(t)) - [(1-t) d^2(y,x) + t d^2(y,z) - t(1-t) d^2(x,z)]``
    where ``g`` is the geodesic from ``x`` to ``z``.  Zero for measures on
    the line.  In R^n the geodesic depends on the chosen optimal plan, so
    one can be supplied; its cost is used as the squared side length.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"interpolation time {t} outside [0, 1]")
    if isinstance(x, Measure1D):
        if plan is not None:
            raise ValueError("plans only apply to R^n measures")
        g = geodesic(x, z)
        gt = geodesic_eval(g, t)
        d_yx = wasserstein2(y, x)
        d_yz = wasserstein2(y, z)
        d_yg = wasserstein2(y, gt)
        return d_yg**2 - (
            (1.0 - t) * d_yx**2 + t * d_yz**2 - t * (1.0 - t) * g.speed**2
        )
    if plan is None:
        plan, side2 = discrete_ot(x, z)
    else:
        side2 = plan.cost()
    gt = displacement_interpolation(plan, t)
    d2_yx = discrete_ot(y, x)[1]
    d2_yz = discrete_ot(y, z)[1]
    d2_yg = discrete_ot(y, gt)[1]
    return d2_yg - ((1.0 - t) * d2_yx + t * d2_yz - t * (1.0 - t) * side2)


@dataclass(frozen=True)
class BranchingWitness:
    """Two distinct geodesics in the plane meeting at both endpoints."""

    x: MeasureRn
    z: MeasureRn
    plan_a: Coupling
    plan_b: Coupling
    cost_a: float
    cost_b: float
    midpoint_a: MeasureRn
    midpoint_b: MeasureRn
    midpoint_gap: float


def branching_witness() -> BranchingWitness:
    """Construct orthogonal-support endpoints with two optimal plans.

    The two balanced two-point measures live on the coordinate axes, so
    every coupling between them has the same cost; the straight and the
    crossed matchings are therefore both optimal, yet their midpoints
    differ by a fixed positive distance.  This certifies that the plane's
    Wasserstein space is not uniquely geodesic.
    """
    x = measure_rn([(-1.0, 0.0), (1.0, 0.0)])
    z = measure_rn([(0.0, -1.0), (0.0, 1.0)])
    plan_a = Coupling(x, z, ((0, 0, 0.5), (1, 1, 0.5)))
    plan_b = Coupling(x, z, ((0, 1, 0.5), (1, 0, 0.5)))
    mid_a = displacement_interpolation(plan_a, 0.5)
    mid_b = displacement_interpolation(plan_b, 0.5)
    gap = discrete_ot(mid_a, mid_b)[1] ** 0.5
    return BranchingWitness(
        x=x,
        z=z,
        plan_a=plan_a,
        plan_b=plan_b,
        cost_a=plan_a.cost(),
        cost_b=plan_b.cost(),
        midpoint_a=mid_a,
        midpoint_b=mid_b,
        midpoint_gap=gap,
    )
