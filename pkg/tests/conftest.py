import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def assert_atoms_close(mu, nu, pos_tol=1e-9, w_tol=1e-9):
    """Structural comparison of atomic measures, atoms matched by position."""
    assert not mu.uniform and not nu.uniform
    assert len(mu.atoms) == len(nu.atoms), f"{len(mu.atoms)} vs {len(nu.atoms)} atoms"
    for (x0, w0), (x1, w1) in zip(mu.atoms, nu.atoms):
        assert abs(x0 - x1) <= pos_tol, f"positions {x0} vs {x1}"
        assert abs(w0 - w1) <= w_tol, f"weights {w0} vs {w1}"


def cluster_positions(mu, tol):
    """Number of distinct atom positions at resolution ``tol``."""
    count = 0
    last = None
    for x, _ in mu.atoms:
        if last is None or x - last > tol:
            count += 1
        last = x
    return count
