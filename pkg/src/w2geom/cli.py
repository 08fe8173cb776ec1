"""Command-line front end.

Subcommands: dist, geodesic, extend, flow, isom, ot, curvature, embed,
check.  Measures travel as JSON files in the formats of
:mod:`w2geom.measures` and :mod:`w2geom.transport_rn`; batch outputs are
CSV with header rows.  Exit codes: 0 ok, 2 bad input, 3 property
violation, 4 size cap exceeded.  Output is deterministic for fixed
inputs and seeds (seeds are mandatory on the randomized subcommands).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .checks import run_checks
from .curvature import comparison_defect
from .isometry1d import (
    IsometryElement,
    apply_isometry,
    exotic_flow,
)
from .measures import (
    SizeCapError,
    measure_from_json,
    measure_to_json,
    to_quantile,
)
from .rank_embed import embed_sorted_tuple
from .transport1d import (
    extension_interval,
    geodesic,
    geodesic_eval,
    geodesic_to_json,
    wasserstein2,
)
from .transport_rn import discrete_ot, measure_rn_from_json

__all__ = ["run", "main"]

DEFECT_TIMES = (0.25, 0.37, 0.5, 0.9)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_measure(path: str):
    obj = _load_json(path)
    if isinstance(obj, dict) and "points" in obj:
        raise ValueError(
            f"{path} looks like an R^n measure; the 1D commands need the "
            '{"atoms": ..., "uniform": ...} format (use `ot` for R^n)'
        )
    return measure_from_json(obj)


def _dump_json(obj: dict, path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2)
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _quantile_rows(mu, t: float) -> list[str]:
    # two rows per piece: (start mass, start value), (end mass, end value)
    q = to_quantile(mu)
    rows = []
    for b0, b1, lo, hi in zip(q.breaks, q.breaks[1:], q.lo, q.hi):
        rows.append(f"{t!r},{b0!r},{lo!r}")
        rows.append(f"{t!r},{b1!r},{hi!r}")
    return rows


def _cmd_dist(args) -> int:
    d = wasserstein2(_load_measure(args.a), _load_measure(args.b))
    print(repr(d))
    return 0


def _cmd_geodesic(args) -> int:
    g = geodesic(_load_measure(args.a), _load_measure(args.b))
    if args.frames is None:
        _dump_json(geodesic_to_json(g), args.out)
        return 0
    if args.frames < 2:
        raise ValueError("--frames needs at least 2 frames")
    print("t,m,x")
    for k in range(args.frames):
        t = k / (args.frames - 1)
        for row in _quantile_rows(geodesic_eval(g, t), t):
            print(row)
    return 0


def _cmd_extend(args) -> int:
    print(str(extension_interval(_load_measure(args.a), _load_measure(args.b))))
    return 0


def _cmd_flow(args) -> int:
    mu = _load_measure(args.infile)
    if args.snapshots is not None:
        ts = [float(s) for s in args.snapshots.split(",") if s]
        if not ts:
            raise ValueError("--snapshots needs a comma-separated list of times")
        print("t,m,x")
        for t in ts:
            for row in _quantile_rows(exotic_flow(mu, t, quantize=args.quantize), t):
                print(row)
        return 0
    out = exotic_flow(mu, args.t, quantize=args.quantize)
    _dump_json(measure_to_json(out), args.out)
    return 0


def _cmd_isom(args) -> int:
    g = IsometryElement(args.eps, args.v, args.eta, args.t)
    out = apply_isometry(g, _load_measure(args.infile), quantize=args.quantize)
    _dump_json(measure_to_json(out), args.out)
    return 0


def _cmd_ot(args) -> int:
    mu = measure_rn_from_json(_load_json(args.a))
    nu = measure_rn_from_json(_load_json(args.b))
    plan, cost = discrete_ot(mu, nu)
    _dump_json(
        {
            "cost": cost,
            "entries": [{"i": i, "j": j, "mass": m} for i, j, m in plan.entries],
        },
        args.out,
    )
    return 0


def _cmd_curvature(args) -> int:
    from .checks import random_atomic_measure

    rng = np.random.default_rng(args.seed)
    print("triple,t,defect")
    for k in range(args.triples):
        x, y, z = (random_atomic_measure(rng) for _ in range(3))
        for t in DEFECT_TIMES:
            print(f"{k},{t!r},{comparison_defect(x, y, z, t)!r}")
    return 0


def _cmd_embed(args) -> int:
    xs = [float(s) for s in args.tuple.split(",") if s]
    if not xs:
        raise ValueError("--tuple needs a comma-separated list of coordinates")
    _dump_json(measure_to_json(embed_sorted_tuple(xs)), args.out)
    return 0


def _cmd_check(args) -> int:
    results = run_checks(args.seed)
    bad = 0
    for r in results:
        if r.ok:
            print(f"ok   {r.name}: {r.detail}")
        else:
            bad += 1
            print(f"FAIL {r.name}: {r.detail}")
    return 3 if bad else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="w2geom",
        description="Distances, geodesics and isometries of the line's "
        "quadratic Wasserstein space, plus exact discrete optimal transport in R^n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="Wasserstein-2 distance between two 1D measures")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("geodesic", help="geodesic between two 1D measures")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--frames", type=int, default=None,
                   help="emit CSV quantile frames at N evenly spaced times instead of JSON")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_geodesic)

    p = sub.add_parser("extend", help="maximal extension interval of the geodesic")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("flow", help="apply the isometric shape flow")
    p.add_argument("--t", type=float, default=0.0, help="flow time")
    p.add_argument("--in", dest="infile", required=True, help="input measure JSON")
    p.add_argument("--out", default=None, help="output measure JSON (default stdout)")
    p.add_argument("--snapshots", default=None,
                   help="comma-separated times; emits CSV quantile rows instead")
    p.add_argument("--quantize", type=int, default=None,
                   help="discretize non-atomic inputs to this many atoms first")
    p.set_defaults(func=_cmd_flow)

    p = sub.add_parser("isom", help="apply an isometry in normal form (eps, v, eta, t)")
    p.add_argument("--eps", type=int, choices=(1, -1), default=1)
    p.add_argument("--v", type=float, default=0.0)
    p.add_argument("--eta", type=int, choices=(1, -1), default=1)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--quantize", type=int, default=None)
    p.set_defaults(func=_cmd_isom)

    p = sub.add_parser("ot", help="exact optimal coupling between R^n measures")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_ot)

    p = sub.add_parser("curvature", help="CSV of comparison-triangle defects")
    p.add_argument("--triples", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_curvature)

    p = sub.add_parser("embed", help="embed a sorted tuple as an equal-weight measure")
    p.add_argument("--tuple", required=True, help="comma-separated sorted coordinates")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("check", help="run the seeded property suite")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_check)

    return parser


def run(argv=None) -> int:
    """Parse arguments and dispatch; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
