import math

import numpy as np
import pytest

from w2geom.measures import dirac, from_atoms, from_mixture, uniform_measure
from w2geom.transport1d import (
    Interval,
    extension_interval,
    geodesic,
    geodesic_eval,
    geodesic_to_json,
    wasserstein2,
)
from w2geom.transport_rn import brute_force_assignment, measure_rn

TWO_ATOM = from_atoms([(-1, 0.5), (1, 0.5)])
WIDE_TWO_ATOM = from_atoms([(-2, 0.5), (2, 0.5)])


def random_equal_weight(rng, n):
    return from_atoms((x, 1.0 / n) for x in rng.uniform(-5, 5, n))


class TestDistance:
    def test_dirac_pair(self):
        assert wasserstein2(dirac(0.0), dirac(3.0)) == 3.0

    def test_translation_of_two_atoms(self):
        a = from_atoms([(0, 0.5), (1, 0.5)])
        b = from_atoms([(2, 0.5), (3, 0.5)])
        assert wasserstein2(a, b) == pytest.approx(2.0, abs=1e-12)

    def test_matches_assignment_oracle(self, rng):
        # independent oracle: brute-force minimum over all matchings of
        # equal-mass atoms, enumerated as 1-point-per-row R^1 measures
        for _ in range(50):
            n = int(rng.integers(1, 9))
            xs = rng.uniform(-5, 5, n)
            ys = rng.uniform(-5, 5, n)
            d = wasserstein2(
                from_atoms((x, 1.0 / n) for x in xs),
                from_atoms((y, 1.0 / n) for y in ys),
            )
            _, cost = brute_force_assignment(
                measure_rn([[x] for x in xs]), measure_rn([[y] for y in ys])
            )
            assert d == pytest.approx(math.sqrt(cost), abs=1e-9)

    def test_symmetry_and_triangle_inequality(self, rng):
        for _ in range(30):
            ms = [random_equal_weight(rng, int(rng.integers(1, 7))) for _ in range(3)]
            dab = wasserstein2(ms[0], ms[1])
            dba = wasserstein2(ms[1], ms[0])
            assert dab == pytest.approx(dba, abs=1e-12)
            dbc = wasserstein2(ms[1], ms[2])
            dac = wasserstein2(ms[0], ms[2])
            assert dac <= dab + dbc + 1e-9

    def test_zero_iff_equal(self):
        mu = from_atoms([(0, 0.5), (1, 0.5)])
        assert wasserstein2(mu, from_atoms([(1, 0.5), (0, 0.5)])) == 0.0
        assert wasserstein2(mu, from_atoms([(0, 0.5), (1.0000001, 0.5)])) > 0.0

    def test_uniform_translation(self):
        assert wasserstein2(uniform_measure(0, 1), uniform_measure(2, 3)) == pytest.approx(
            2.0, abs=1e-12
        )

    def test_uniform_to_dirac(self):
        # oracle: integral of (x - 1/2)^2 over [0, 1] is 1/12
        d = wasserstein2(uniform_measure(0, 1), dirac(0.5))
        assert d == pytest.approx(math.sqrt(1.0 / 12.0), abs=1e-12)


class TestGeodesic:
    def test_dirac_line(self):
        g = geodesic(dirac(0.0), dirac(1.0))
        assert g.speed == pytest.approx(1.0)
        assert g.extension.is_complete
        assert geodesic_eval(g, 5.0) == dirac(5.0)

    def test_endpoint_identity(self):
        mu0 = from_atoms([(0, 0.25), (2, 0.75)])
        mu1 = from_mixture(atoms=[(1.0, 0.5)], uniform=[(3.0, 4.0, 0.5)])
        g = geodesic(mu0, mu1)
        assert geodesic_eval(g, 0.0) == mu0
        assert geodesic_eval(g, 1.0) == mu1

    def test_midpoint_from_dirac(self):
        g = geodesic(dirac(0.0), TWO_ATOM)
        # per-piece affine interpolation of the quantiles: jump of size 2
        # at mass 1/2 shrinks to size 1 around 0
        assert geodesic_eval(g, 0.5) == from_atoms([(-0.5, 0.5), (0.5, 0.5)])

    def test_interpolated_jump_vanishes(self):
        g = geodesic(TWO_ATOM, WIDE_TWO_ATOM)
        # jump (1-t)*2 + t*4 vanishes at t = -1
        assert geodesic_eval(g, -1.0) == dirac(0.0)

    def test_eval_outside_interval_raises(self):
        g = geodesic(TWO_ATOM, WIDE_TWO_ATOM)
        with pytest.raises(ValueError, match="outside"):
            geodesic_eval(g, -1.001)
        g2 = geodesic(dirac(0.0), TWO_ATOM)
        with pytest.raises(ValueError, match="outside"):
            geodesic_eval(g2, -0.25)

    def test_constant_speed(self, rng):
        for _ in range(20):
            mu0 = random_equal_weight(rng, int(rng.integers(1, 6)))
            mu1 = random_equal_weight(rng, int(rng.integers(1, 6)))
            g = geodesic(mu0, mu1)
            lo = max(g.extension.lo, -3.0)
            hi = min(g.extension.hi, 4.0)
            s, t = sorted(rng.uniform(lo, hi, 2))
            d = wasserstein2(geodesic_eval(g, s), geodesic_eval(g, t))
            assert d == pytest.approx((t - s) * g.speed, abs=1e-9)

    def test_speed_is_distance(self, rng):
        mu0 = random_equal_weight(rng, 4)
        mu1 = random_equal_weight(rng, 6)
        assert geodesic(mu0, mu1).speed == wasserstein2(mu0, mu1)


class TestExtensionInterval:
    def test_dirac_to_dirac_complete(self):
        assert extension_interval(dirac(0.0), dirac(1.0)) == Interval(-math.inf, math.inf)

    def test_dirac_to_measure_half_line(self):
        iv = extension_interval(dirac(0.0), TWO_ATOM)
        assert iv.lo == 0.0 and iv.hi == math.inf
        # the bound is exactly 0, not a small positive number
        assert math.copysign(1.0, iv.lo) == 1.0

    def test_two_atom_pair(self):
        # single jump constraint 2 + 2t >= 0
        assert extension_interval(TWO_ATOM, WIDE_TWO_ATOM) == Interval(-1.0, math.inf)

    def test_dirac_start_bound_is_exact_zero(self, rng):
        for _ in range(10):
            mu1 = random_equal_weight(rng, int(rng.integers(2, 6)))
            iv = extension_interval(dirac(float(rng.uniform(-2, 2))), mu1)
            assert iv.lo == 0.0
            assert iv.hi == math.inf

    def test_contains_unit_interval(self, rng):
        for _ in range(20):
            mu0 = random_equal_weight(rng, int(rng.integers(1, 6)))
            mu1 = random_equal_weight(rng, int(rng.integers(1, 6)))
            iv = extension_interval(mu0, mu1)
            assert iv.lo <= 0.0 and iv.hi >= 1.0

    def test_shrinking_jump_gives_finite_lower_bound(self, rng):
        # finite endpoint => some jump or slope hits zero exactly there
        for _ in range(20):
            mu0 = random_equal_weight(rng, int(rng.integers(2, 6)))
            mu1 = random_equal_weight(rng, int(rng.integers(2, 6)))
            g = geodesic(mu0, mu1)
            t0 = g.extension.lo
            if t0 == -math.inf:
                continue
            lo0, hi0 = np.asarray(g.lo0), np.asarray(g.hi0)
            lo1, hi1 = np.asarray(g.lo1), np.asarray(g.hi1)
            gaps0 = np.concatenate([hi0 - lo0, lo0[1:] - hi0[:-1]])
            gaps1 = np.concatenate([hi1 - lo1, lo1[1:] - hi1[:-1]])
            at_t0 = (1.0 - t0) * gaps0 + t0 * gaps1
            assert float(np.min(at_t0)) == pytest.approx(0.0, abs=1e-9)

    def test_uniform_slope_collapse(self):
        # slope (1-t)*1 + t*2 vanishes at t = -1, mass collapses to an atom
        g = geodesic(uniform_measure(0, 1), uniform_measure(0, 2))
        assert g.extension == Interval(-1.0, math.inf)
        assert geodesic_eval(g, -1.0) == dirac(0.0)

    def test_interval_formatting(self):
        assert str(Interval(-1.0, math.inf)) == "[-1, inf)"
        assert str(Interval(-math.inf, math.inf)) == "(-inf, inf)"
        assert str(Interval(0.0, 2.5)) == "[0, 2.5]"


class TestSerialization:
    def test_geodesic_json(self):
        g = geodesic(dirac(0.0), TWO_ATOM)
        obj = geodesic_to_json(g)
        assert obj["extension"] == {"lo": 0.0, "hi": "inf"}
        assert obj["speed"] == g.speed
        assert len(obj["q0"]["lo"]) == len(obj["breaks"]) - 1
        assert obj["q1"]["hi"][-1] == 1.0

    def test_complete_extension_serializes_as_strings(self):
        obj = geodesic_to_json(geodesic(dirac(0.0), dirac(1.0)))
        assert obj["extension"] == {"lo": "-inf", "hi": "inf"}
