import numpy as np
import pytest
from scipy.optimize import nnls as scipy_nnls

from wcheb.nnls import nnls


def test_unconstrained_solution_recovered():
    A = np.array([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]])
    x0 = np.array([0.5, 1.5])
    x, r = nnls(A, A @ x0)
    assert np.allclose(x, x0, atol=1e-12)
    assert r < 1e-12


def test_negative_component_clamped():
    A = np.eye(3)
    x, r = nnls(A, np.array([1.0, -2.0, 3.0]))
    assert np.array_equal(x, [1.0, 0.0, 3.0])
    assert r == pytest.approx(2.0)


def test_zero_rhs():
    x, r = nnls(np.ones((4, 3)), np.zeros(4))
    assert np.all(x == 0) and r == 0


@pytest.mark.parametrize("shape", [(6, 3), (10, 10), (5, 12), (40, 7)])
def test_matches_scipy(rng, shape):
    # scipy is an independent oracle here, the library never calls it
    for _ in range(25):
        A = rng.normal(size=shape)
        b = rng.normal(size=shape[0])
        x, r = nnls(A, b)
        xs, rs = scipy_nnls(A, b)
        assert np.all(x >= 0)
        assert r == pytest.approx(rs, rel=1e-9, abs=1e-12)
        assert np.linalg.norm(A @ x - b) == pytest.approx(r, rel=1e-12, abs=1e-14)


def test_kkt_conditions(rng):
    A = rng.normal(size=(15, 8))
    b = rng.normal(size=15)
    x, _ = nnls(A, b)
    grad = A.T @ (b - A @ x)
    assert np.all(grad <= 1e-10)
    assert np.all(np.abs(grad[x > 0]) <= 1e-10)
