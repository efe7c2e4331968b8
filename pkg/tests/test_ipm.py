import numpy as np
import pytest
import scipy.sparse as sp
from scipy.optimize import linprog

from gandist._ipm import Objective, SolverError, maximize


def linear(c):
    return Objective(lambda w: float(c @ w), lambda w: c.copy(), lambda w: np.zeros_like(w))


def test_lp_against_highs():
    gen = np.random.default_rng(0)
    for _ in range(5):
        n, m = 4, 12
        G = gen.normal(size=(m, n))
        h = gen.uniform(1, 2, size=m)
        G = np.vstack([G, np.eye(n), -np.eye(n)])
        h = np.concatenate([h, np.full(2 * n, 3.0)])
        c = gen.normal(size=n)
        res = maximize(linear(c), sp.csr_matrix(G), h, np.zeros(n), radius=2 * 3 * np.sqrt(n))
        ref = linprog(-c, A_ub=G, b_ub=h, bounds=[(None, None)] * n, method="highs")
        assert abs(res.value + ref.fun) <= 1e-8
        assert res.gap <= 1e-8
        assert np.all(G @ res.w <= h)


def test_concave_quadratic_interior_optimum():
    # max -(w - 0.3)^2 with a box that does not bind
    obj = Objective(lambda w: float(-np.sum((w - 0.3) ** 2)), lambda w: -2 * (w - 0.3),
                    lambda w: np.full_like(w, -2.0))
    G = sp.vstack([sp.identity(3), -sp.identity(3)]).tocsr()
    res = maximize(obj, G, np.ones(6), np.zeros(3), radius=4)
    assert np.allclose(res.w, 0.3, atol=1e-8)


def test_infeasible_start_rejected():
    G = sp.csr_matrix(np.array([[1.0]]))
    with pytest.raises(SolverError):
        maximize(linear(np.ones(1)), G, np.array([0.0]), np.array([1.0]), radius=1)
