import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from polyco.polyhedron import Coord, Polyhedron

settings.register_profile("polyco", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("polyco")


def random_polyhedron(rng, dim=None, rows=None, bounded=None):
    """Nonempty random polyhedron with at most 4 coordinates and 12 rows.

    A random interior point ``x0`` is drawn first and every row is placed so
    that ``x0`` satisfies it with a positive slack.
    """
    dim = int(rng.integers(2, 5)) if dim is None else dim
    if bounded is None:
        bounded = rng.random() < 0.5
    rows = int(rng.integers(1, 13)) if rows is None else rows
    if bounded:
        rows = max(1, min(rows, 12 - 2 * dim))
    nonneg = rng.random(dim) < 0.5
    x0 = rng.uniform(-1.0, 2.0, dim)
    x0[nonneg] = np.abs(x0[nonneg]) + 0.1
    M = rng.integers(-3, 4, size=(rows, dim)).astype(float)
    M[np.all(M == 0, axis=1), 0] = 1.0
    if bounded:
        box = np.vstack([np.eye(dim), -np.eye(dim)])
        M = np.vstack([M, box])
    slack = rng.uniform(0.1, 2.0, M.shape[0])
    m = M @ x0 - slack
    coords = [Coord(f"x{i}", "", bool(nn)) for i, nn in enumerate(nonneg)]
    return Polyhedron(coords, M, m), x0


def random_monotone_ldp(rng, n_F=2, n_R=2, rows=None):
    from polyco.ldp import Ldp

    rows = int(rng.integers(2, 6)) if rows is None else rows
    A_F = -rng.integers(0, 3, size=(rows, n_F)).astype(float)
    A_R = rng.integers(0, 4, size=(rows, n_R)).astype(float)
    A_R[np.all(A_R == 0, axis=1), int(rng.integers(n_R))] = 1.0
    b = rng.integers(0, 5, size=rows).astype(float)
    return Ldp([f"f{i}" for i in range(n_F)], [f"r{i}" for i in range(n_R)], A_F, A_R, b)


@pytest.fixture(scope="session")
def rover_reference():
    from polyco.bench import rover

    return rover.reference()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
