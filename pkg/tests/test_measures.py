import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from w2geom.measures import (
    Measure1D,
    barycenter,
    deviation,
    dirac,
    from_atoms,
    from_mixture,
    measure_from_json,
    measure_from_quantile,
    measure_to_json,
    pushforward_affine,
    quantile,
    second_moment_about,
    to_quantile,
    uniform_measure,
)
from w2geom.transport1d import wasserstein2


@st.composite
def atomic_measures(draw):
    n = draw(st.integers(1, 6))
    xs = draw(
        st.lists(
            st.floats(-50, 50, allow_nan=False, allow_infinity=False),
            min_size=n,
            max_size=n,
        )
    )
    ws = draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    total = sum(ws)
    return from_atoms((x, w / total) for x, w in zip(xs, ws))


class TestFromAtoms:
    def test_merges_duplicates(self):
        mu = from_atoms([(0, 0.5), (0, 0.25), (1, 0.25)])
        assert mu.atoms == ((0.0, 0.75), (1.0, 0.25))

    def test_single_dirac(self):
        assert from_atoms([(3, 1.0)]) == dirac(3.0)

    def test_sorts(self):
        mu = from_atoms([(1, 0.5), (-1, 0.5)])
        assert mu.atoms == ((-1.0, 0.5), (1.0, 0.5))

    def test_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError, match="non-positive"):
            from_atoms([(0, 0.0), (1, 1.0)])
        with pytest.raises(ValueError, match="non-positive"):
            from_atoms([(0, -0.5), (1, 1.5)])

    def test_rejects_bad_mass_sum(self):
        with pytest.raises(ValueError, match="total mass"):
            from_atoms([(0, 0.5), (1, 0.6)])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            from_atoms([])

    @given(atomic_measures())
    @settings(max_examples=50)
    def test_canonicalization_idempotent(self, mu):
        assert from_atoms(mu.atoms) == mu


class TestQuantile:
    def test_dirac_constant(self):
        for m in (0.01, 0.5, 0.99):
            assert quantile(dirac(3.0), m) == 3.0

    def test_left_continuity_at_atom_boundary(self):
        mu = from_atoms([(0, 0.5), (1, 0.5)])
        assert quantile(mu, 0.5) == 0.0
        assert quantile(mu, 0.500001) == 1.0

    def test_uniform_identity(self):
        u = uniform_measure(0.0, 1.0)
        for m in (0.1, 0.25, 0.9):
            assert quantile(u, m) == pytest.approx(m, abs=1e-15)

    @pytest.mark.parametrize("m", [0.0, 1.0, -0.1, 1.5])
    def test_rejects_mass_outside_open_interval(self, m):
        with pytest.raises(ValueError):
            quantile(dirac(0.0), m)

    @given(atomic_measures())
    @settings(max_examples=50)
    def test_quantile_nondecreasing(self, mu):
        grid = np.linspace(0.01, 0.99, 37)
        vals = [quantile(mu, m) for m in grid]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))

    @given(atomic_measures())
    @settings(max_examples=50)
    def test_roundtrip_through_quantile(self, mu):
        assert measure_from_quantile(to_quantile(mu)) == mu

    def test_roundtrip_with_uniform_pieces(self):
        mu = from_mixture(
            atoms=[(0.5, 0.25), (3.0, 0.25)],
            uniform=[(0.0, 1.0, 0.25), (2.0, 2.5, 0.25)],
        )
        assert measure_from_quantile(to_quantile(mu)) == mu

    def test_atom_inside_uniform_piece_splits(self):
        # half uniform mass on [0, 2] with an atom at 1 in the middle
        mu = from_mixture(atoms=[(1.0, 0.5)], uniform=[(0.0, 2.0, 0.5)])
        q = to_quantile(mu)
        assert quantile(mu, 0.125) == pytest.approx(0.5)
        assert quantile(mu, 0.3) == pytest.approx(1.0)  # inside the atom slot
        assert quantile(mu, 0.875) == pytest.approx(1.5)
        assert measure_from_quantile(q) == mu


class TestMoments:
    def test_symmetric_two_point(self):
        mu = from_atoms([(-1, 0.5), (1, 0.5)])
        assert barycenter(mu) == 0.0
        assert deviation(mu) == 1.0

    def test_dirac(self):
        assert barycenter(dirac(7.0)) == 7.0
        assert deviation(dirac(7.0)) == 0.0

    def test_three_atom_variance(self):
        mu = from_atoms([(0, 1 / 3), (1, 1 / 3), (2, 1 / 3)])
        # oracle: direct finite sum about the mean 1
        expected = ((0 - 1) ** 2 + 0 + (2 - 1) ** 2) / 3
        assert barycenter(mu) == pytest.approx(1.0, abs=1e-15)
        assert deviation(mu) ** 2 == pytest.approx(expected, abs=1e-15)

    def test_uniform_variance(self):
        # var of U[a, b] is (b-a)^2/12
        u = uniform_measure(2.0, 5.0)
        assert barycenter(u) == pytest.approx(3.5)
        assert second_moment_about(u, 3.5) == pytest.approx(9.0 / 12.0, abs=1e-14)

    @given(atomic_measures())
    @settings(max_examples=50)
    def test_deviation_is_distance_to_barycenter_dirac(self, mu):
        d = wasserstein2(mu, dirac(barycenter(mu)))
        assert d == pytest.approx(deviation(mu), abs=1e-9)


class TestPushforward:
    def test_translation(self):
        mu = from_atoms([(0, 0.5), (1, 0.5)])
        assert pushforward_affine(mu, 1.0, 2.0).atoms == ((2.0, 0.5), (3.0, 0.5))

    def test_reflection_reorders(self):
        mu = from_atoms([(0, 0.5), (1, 0.5)])
        assert pushforward_affine(mu, -1.0, 0.0).atoms == ((-1.0, 0.5), (0.0, 0.5))

    def test_collapse_to_dirac(self):
        mu = from_mixture(atoms=[(1.0, 0.5)], uniform=[(2.0, 3.0, 0.5)])
        assert pushforward_affine(mu, 0.0, 4.0) == dirac(4.0)

    def test_unit_scale_preserves_distances(self, rng):
        mus = []
        for _ in range(6):
            n = int(rng.integers(1, 5))
            w = rng.dirichlet(np.ones(n))
            mus.append(from_atoms(zip(rng.uniform(-3, 3, n), w)))
        for a in (1.0, -1.0):
            moved = [pushforward_affine(m, a, 0.7) for m in mus]
            for i in range(len(mus)):
                for j in range(i + 1, len(mus)):
                    assert wasserstein2(moved[i], moved[j]) == pytest.approx(
                        wasserstein2(mus[i], mus[j]), abs=1e-9
                    )


class TestJson:
    def test_roundtrip(self):
        mu = from_mixture(atoms=[(1.0, 0.5)], uniform=[(2.0, 3.0, 0.5)])
        assert measure_from_json(json.loads(json.dumps(measure_to_json(mu)))) == mu

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            measure_from_json({"atoms": [], "uniform": []})

    def test_format_shape(self):
        obj = measure_to_json(from_atoms([(0, 0.5), (1, 0.5)]))
        assert obj["atoms"] == [{"x": 0.0, "w": 0.5}, {"x": 1.0, "w": 0.5}]
        assert obj["uniform"] == []


def test_overlapping_uniform_pieces_are_split():
    # two overlapping uniform pieces add their densities on the overlap
    mu = from_mixture(uniform=[(0.0, 2.0, 0.5), (1.0, 3.0, 0.5)])
    assert mu.uniform == (
        (0.0, 1.0, 0.25),
        (1.0, 2.0, 0.5),
        (2.0, 3.0, 0.25),
    )
    assert barycenter(mu) == pytest.approx(1.5, abs=1e-12)


def test_contiguous_equal_density_pieces_merge():
    mu = from_mixture(uniform=[(0.0, 1.0, 0.5), (1.0, 2.0, 0.5)])
    assert mu.uniform == ((0.0, 2.0, 1.0),)


def test_measure_is_hashable_value_type():
    mu = from_atoms([(0, 0.5), (1, 0.5)])
    nu = from_atoms([(1, 0.5), (0, 0.25), (0, 0.25)])
    assert mu == nu and hash(mu) == hash(nu)
    assert isinstance(mu, Measure1D)
    assert math.isfinite(hash(mu))
