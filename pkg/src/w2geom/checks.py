"""Seeded batch property checks over the whole toolkit.

Backs the ``check`` subcommand of the command line and is handy for
quick health runs from a REPL.  Every check is deterministic for a
fixed seed; all random instances come from one numpy Generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curvature import branching_witness, comparison_defect
from .isometry1d import (
    IsometryElement,
    apply_isometry,
    compose,
    delta2_params,
    exotic_flow,
    inverse,
    measure_from_params,
    weak_convergence_profile,
)
from .measures import Measure1D, barycenter, deviation, dirac, from_atoms, from_mixture
from .rank_embed import embed_sorted_tuple, flat_triangle
from .transport1d import extension_interval, wasserstein2
from .transport_rn import (
    MeasureRn,
    brute_force_assignment,
    cyclical_monotonicity_check,
    dilate,
    dilation_distance,
    discrete_ot,
    geodesic_inequality_witness,
    independent_coupling_cost,
    is_translation_coupling,
    measure_rn,
    translate,
)

__all__ = [
    "CheckResult",
    "random_atomic_measure",
    "random_mixed_measure",
    "random_rn_measure",
    "run_checks",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def random_atomic_measure(
    rng: np.random.Generator,
    max_atoms: int = 6,
    span: float = 2.0,
    min_gap: float = 1e-3,
    min_weight: float = 0.05,
) -> Measure1D:
    """Random atomic measure with separated positions and bounded-away weights."""
    n = int(rng.integers(1, max_atoms + 1))
    xs = np.sort(rng.uniform(-span, span, n))
    xs = xs + np.arange(n) * min_gap  # guarantees pairwise gaps
    w = rng.dirichlet(np.ones(n)) + min_weight
    w = w / w.sum()
    return from_atoms(zip(xs, w))


def random_mixed_measure(
    rng: np.random.Generator, max_atoms: int = 4, span: float = 2.0
) -> Measure1D:
    """Random measure mixing atoms with a couple of uniform pieces."""
    atoms = random_atomic_measure(rng, max_atoms, span).atoms
    n_pieces = int(rng.integers(1, 3))
    pieces = []
    for _ in range(n_pieces):
        a = float(rng.uniform(-span, span))
        b = a + float(rng.uniform(0.1, 1.0))
        pieces.append((a, b, 1.0))
    total = sum(w for _, w in atoms) + n_pieces
    return from_mixture(
        [(x, w / total) for x, w in atoms],
        [(a, b, m / total) for a, b, m in pieces],
    )


def random_rn_measure(
    rng: np.random.Generator, dim: int = 2, max_points: int = 6, span: float = 2.0
) -> MeasureRn:
    n = int(rng.integers(2, max_points + 1))
    pts = rng.uniform(-span, span, (n, dim))
    w = rng.dirichlet(np.ones(n)) + 0.05
    return measure_rn(pts, w / w.sum())


def _check_distance_oracle(rng, reps=40):
    from .transport_rn import measure_rn as mrn

    worst = 0.0
    for _ in range(reps):
        n = int(rng.integers(1, 9))
        xs = rng.uniform(-5, 5, n)
        ys = rng.uniform(-5, 5, n)
        mu = from_atoms((x, 1.0 / n) for x in xs)
        nu = from_atoms((y, 1.0 / n) for y in ys)
        d = wasserstein2(mu, nu)
        _, cost = brute_force_assignment(
            mrn([[x] for x in xs]), mrn([[y] for y in ys])
        )
        worst = max(worst, abs(d - math.sqrt(cost)))
    return worst <= 1e-9, f"max |closed form - assignment| = {worst:.3e}"


def _check_flat_triangles(rng, reps=120):
    worst = 0.0
    for _ in range(reps):
        x, y, z = (random_atomic_measure(rng) for _ in range(3))
        t = float(rng.uniform(0.05, 0.95))
        worst = max(worst, abs(comparison_defect(x, y, z, t)))
    return worst <= 1e-8, f"max |defect| = {worst:.3e}"


def _check_extension_examples(rng):
    i1 = extension_interval(dirac(0.0), dirac(1.0))
    i2 = extension_interval(dirac(0.0), from_atoms([(-1, 0.5), (1, 0.5)]))
    i3 = extension_interval(
        from_atoms([(-1, 0.5), (1, 0.5)]), from_atoms([(-2, 0.5), (2, 0.5)])
    )
    ok = (
        i1.is_complete
        and (i2.lo, i2.hi) == (0.0, math.inf)
        and (i3.lo, i3.hi) == (-1.0, math.inf)
    )
    return ok, f"intervals: {i1}, {i2}, {i3}"


def _check_flow_isometry(rng, reps=15):
    worst = 0.0
    for _ in range(reps):
        mu = random_atomic_measure(rng)
        nu = random_atomic_measure(rng)
        t = float(rng.uniform(-3, 3))
        gap = abs(wasserstein2(exotic_flow(mu, t), exotic_flow(nu, t)) - wasserstein2(mu, nu))
        worst = max(worst, gap)
    return worst <= 1e-7, f"max distance drift = {worst:.3e}"


def _check_flow_law(rng, reps=15):
    worst = 0.0
    for _ in range(reps):
        mu = random_atomic_measure(rng)
        s = float(rng.uniform(-3, 3))
        t = float(rng.uniform(-3, 3))
        worst = max(
            worst, wasserstein2(exotic_flow(exotic_flow(mu, t), s), exotic_flow(mu, s + t))
        )
    return worst <= 1e-7, f"max flow-law gap = {worst:.3e}"


def _check_flow_invariants(rng, reps=15):
    worst = 0.0
    for _ in range(reps):
        mu = random_atomic_measure(rng)
        t = float(rng.uniform(-3, 3))
        nu = exotic_flow(mu, t)
        worst = max(worst, abs(barycenter(nu) - barycenter(mu)))
        worst = max(worst, abs(deviation(nu) - deviation(mu)))
        if nu.n_atoms > mu.n_atoms:
            return False, f"atom count grew: {mu.n_atoms} -> {nu.n_atoms}"
    return worst <= 1e-9, f"max barycenter/deviation drift = {worst:.3e}"


def _check_flow_well_defined(rng, reps=15):
    worst = 0.0
    for _ in range(reps):
        mu = random_atomic_measure(rng, max_atoms=3)
        if mu.n_atoms < 3:
            continue
        t = float(rng.uniform(-3, 3))
        worst = max(
            worst,
            wasserstein2(
                exotic_flow(mu, t, segment="merge"), exotic_flow(mu, t, segment="slide")
            ),
        )
    return worst <= 1e-7, f"max segment-choice gap = {worst:.3e}"


def _check_group_axioms(rng, reps=40):
    grid = [-2.0, -0.5, 0.0, 0.25, 1.0]
    for e1 in (1, -1):
        for e2 in (1, -1):
            for v1 in grid:
                for t1 in grid:
                    g1 = IsometryElement(e1, v1, e2, t1)
                    gi = inverse(g1)
                    if compose(g1, gi) != IsometryElement() or compose(gi, g1) != IsometryElement():
                        return False, f"inverse fails for {g1}"
    worst = 0.0
    for _ in range(reps):
        mu = random_atomic_measure(rng, max_atoms=4)
        g1 = IsometryElement(
            int(rng.choice([1, -1])), float(rng.uniform(-1, 1)),
            int(rng.choice([1, -1])), float(rng.uniform(-1.5, 1.5)),
        )
        g2 = IsometryElement(
            int(rng.choice([1, -1])), float(rng.uniform(-1, 1)),
            int(rng.choice([1, -1])), float(rng.uniform(-1.5, 1.5)),
        )
        gap = wasserstein2(
            apply_isometry(compose(g1, g2), mu), apply_isometry(g1, apply_isometry(g2, mu))
        )
        worst = max(worst, gap)
    return worst <= 1e-7, f"max action-compatibility gap = {worst:.3e}"


def _check_weak_convergence(rng):
    mu = measure_from_params(delta2_params(from_atoms([(-1, 0.5), (1, 0.5)])))
    prof = weak_convergence_profile(mu, [0.0, 1.0, 10.0], 0.1)
    mass_ok = prof[-1].window_mass > 1.0 - 1e-8
    dist_ok = all(abs(p.center_distance - 1.0) <= 1e-9 for p in prof)
    return mass_ok and dist_ok, f"final window mass = {prof[-1].window_mass!r}"


def _check_rn_couplings(rng, reps=12):
    for _ in range(reps):
        mu = random_rn_measure(rng)
        nu = random_rn_measure(rng)
        plan, cost = discrete_ot(mu, nu)
        if cyclical_monotonicity_check(plan) is not None:
            return False, "optimal plan failed cyclical monotonicity"
        if plan.marginal_defect() > 1e-10:
            return False, f"marginal defect {plan.marginal_defect():.3e}"
        if len(plan.entries) > len(mu.points) + len(nu.points) - 1:
            return False, "plan is not a vertex"
    v = np.array([0.7, -0.3])
    mu = random_rn_measure(rng)
    plan, cost = discrete_ot(mu, translate(mu, v))
    u = is_translation_coupling(plan)
    if u is None or abs(cost - float(v @ v)) > 1e-9:
        return False, "translation coupling not recovered"
    if geodesic_inequality_witness(plan) is not None:
        return False, "translation plan produced a geodesic witness"
    two = measure_rn([(-1.0, 0.0), (1.0, 0.0)])
    wit = geodesic_inequality_witness(discrete_ot(two, dilate(two, (0, 0), 2.0))[0])
    if wit is None or wit.value >= 0:
        return False, "dilation plan has no finite witness"
    return True, "monotone vertices; translations and dilations classified"


def _check_orthogonal_and_dilation(rng):
    mu = measure_rn([(-1.0, 0.0), (1.0, 0.0)])
    nu = measure_rn([(0.0, -1.0), (0.0, 1.0)])
    _, cost = discrete_ot(mu, nu)
    gap = abs(cost - independent_coupling_cost(mu, nu))
    lam = dilation_distance(mu, (0.0, 0.0), 2.0)
    _, dcost = discrete_ot(mu, dilate(mu, (0.0, 0.0), 2.0))
    ok = gap <= 1e-9 and abs(lam - 1.0) <= 1e-12 and abs(math.sqrt(dcost) - lam) <= 1e-9
    return ok, f"orthogonal gap = {gap:.3e}, dilation distance = {lam!r}"


def _check_branching(rng):
    wit = branching_witness()
    defect = comparison_defect(wit.x, wit.midpoint_a, wit.z, 0.5, plan=wit.plan_b)
    ok = (
        abs(wit.cost_a - wit.cost_b) <= 1e-10
        and wit.midpoint_gap >= 0.1
        and defect > 1e-6
    )
    return ok, f"midpoint gap = {wit.midpoint_gap!r}, defect = {defect!r}"


def _check_embedding(rng, reps=40):
    worst = 0.0
    for _ in range(reps):
        k = int(rng.integers(1, 11))
        x = np.sort(rng.uniform(-5, 5, k))
        y = np.sort(rng.uniform(-5, 5, k))
        d = wasserstein2(embed_sorted_tuple(x), embed_sorted_tuple(y))
        worst = max(worst, abs(d - float(np.linalg.norm(x - y))))
    a, b, c = flat_triangle(3, 1e6)
    for p, q in ((a, b), (b, c), (a, c)):
        worst = max(worst, abs(wasserstein2(p, q) - 1e6) / 1e6)
    return worst <= 1e-9, f"max isometry error = {worst:.3e}"


_CHECKS = [
    ("distance-oracle", _check_distance_oracle),
    ("flat-triangles", _check_flat_triangles),
    ("extension-examples", _check_extension_examples),
    ("flow-isometry", _check_flow_isometry),
    ("flow-law", _check_flow_law),
    ("flow-invariants", _check_flow_invariants),
    ("flow-well-defined", _check_flow_well_defined),
    ("group-axioms", _check_group_axioms),
    ("weak-convergence", _check_weak_convergence),
    ("rn-couplings", _check_rn_couplings),
    ("orthogonal-dilation", _check_orthogonal_and_dilation),
    ("branching", _check_branching),
    ("embedding", _check_embedding),
]


def run_checks(seed: int) -> list[CheckResult]:
    """Run every batch check with one seeded generator; deterministic."""
    out = []
    for idx, (name, fn) in enumerate(_CHECKS):
        rng = np.random.default_rng([seed, idx])
        ok, detail = fn(rng)
        out.append(CheckResult(name, bool(ok), detail))
    return out
