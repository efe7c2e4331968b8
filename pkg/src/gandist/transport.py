"""Exact Wasserstein-1 distance between discrete measures.

The transport LP is solved with HiGHS (dual simplex) through
``scipy.optimize.linprog``. The dual multipliers are turned into a
1-Lipschitz Kantorovich potential on the pooled support by a c-transform, and
both sides are checked against each other before anything is returned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .measures import DiscreteMeasure, NormSpec

MAX_CELLS = 10**7


class TransportError(RuntimeError):
    pass


@dataclass(frozen=True)
class TransportPlan:
    matrix: np.ndarray  # (m, k), source atoms x target atoms
    cost: float

    def to_dict(self) -> dict:
        return {"matrix": self.matrix.tolist(), "cost": self.cost}


@dataclass(frozen=True)
class KantorovichPotential:
    points: np.ndarray  # pooled atoms, P first then Q-only atoms
    values: np.ndarray
    dual_value: float

    def __call__(self, X, norm: NormSpec = NormSpec()) -> np.ndarray:
        """1-Lipschitz extension to arbitrary points (min-plus formula)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        D = norm.cdist(X, self.points)
        return np.min(self.values[None, :] + D, axis=1)


def pooled_support(P: DiscreteMeasure, Q: DiscreteMeasure):
    """Atoms of P followed by atoms of Q not already in P.

    Returns ``(points, p, q)`` with the weight of each pooled point under P and Q.
    """
    if P.dim != Q.dim:
        raise ValueError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    index = {tuple(x): i for i, x in enumerate(P.atoms)}
    extra = []
    q_idx = np.empty(len(Q), dtype=int)
    for j, y in enumerate(Q.atoms):
        key = tuple(y)
        if key not in index:
            index[key] = len(P) + len(extra)
            extra.append(y)
        q_idx[j] = index[key]
    points = np.vstack([P.atoms] + ([np.vstack(extra)] if extra else []))
    n = points.shape[0]
    p = np.zeros(n)
    p[: len(P)] = P.weights
    q = np.zeros(n)
    np.add.at(q, q_idx, Q.weights)
    return points, p, q


def _solve_lp(P, Q, norm):
    if P.dim != Q.dim:
        raise ValueError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    m, k = len(P), len(Q)
    if m * k > MAX_CELLS:
        raise ValueError(f"{m}x{k} transport problem exceeds {MAX_CELLS} cells")
    C = norm.cdist(P.atoms, Q.atoms)
    # row constraints: sum_j pi_ij = p_i ; column constraints: sum_i pi_ij = q_j
    rows = sp.kron(sp.identity(m), np.ones((1, k)))
    cols = sp.kron(np.ones((1, m)), sp.identity(k))
    A_eq = sp.vstack([rows, cols]).tocsr()
    b_eq = np.concatenate([P.weights, Q.weights])
    res = linprog(C.ravel(), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        raise TransportError(f"transport LP failed after {res.nit} iterations: {res.message}")
    return C, res


def w1_exact(P: DiscreteMeasure, Q: DiscreteMeasure, norm: NormSpec = NormSpec()):
    """Exact W1 and an optimal plan. Returns ``(value, TransportPlan)``."""
    C, res = _solve_lp(P, Q, norm)
    plan = np.maximum(res.x.reshape(len(P), len(Q)), 0.0)
    value = float(np.sum(plan * C))
    _check_plan(plan, P, Q)
    return value, TransportPlan(plan, value)


def _check_plan(plan, P, Q, tol=1e-9):
    if np.max(np.abs(plan.sum(1) - P.weights)) > tol or np.max(np.abs(plan.sum(0) - Q.weights)) > tol:
        raise TransportError("plan marginals violate tolerance")


def dual_potential(P: DiscreteMeasure, Q: DiscreteMeasure, norm: NormSpec = NormSpec()) -> KantorovichPotential:
    """Optimal 1-Lipschitz potential on the pooled support, anchored to 0 at the first atom.

    The LP multipliers (u, v) with u_i + v_j <= c_ij are c-transformed into
    W(z) = min_j (|z - y_j| - v_j), which is 1-Lipschitz and attains the primal value.
    """
    C, res = _solve_lp(P, Q, norm)
    primal = float(res.fun)
    m = len(P)
    v = np.asarray(res.eqlin.marginals)[m:]
    points, p, q = pooled_support(P, Q)
    vals = np.min(norm.cdist(points, Q.atoms) - v[None, :], axis=1)
    vals = vals - vals[0]
    dual = float(p @ vals - q @ vals)
    if abs(dual - primal) > 1e-8:
        raise TransportError(f"duality gap {abs(dual - primal):.3e} exceeds 1e-8")
    D = norm.cdist(points, points)
    if np.max(np.abs(vals[:, None] - vals[None, :]) - D) > 1e-9:
        raise TransportError("potential is not 1-Lipschitz on the pooled support")
    return KantorovichPotential(points, vals, dual)


def w1_1d(P: DiscreteMeasure, Q: DiscreteMeasure) -> float:
    """Closed form for d = 1: the integral of |F_P - F_Q|."""
    if P.dim != 1 or Q.dim != 1:
        raise ValueError("w1_1d needs one-dimensional measures")
    x = np.concatenate([P.atoms[:, 0], Q.atoms[:, 0]])
    w = np.concatenate([P.weights, -Q.weights])
    order = np.argsort(x, kind="mergesort")
    x, w = x[order], w[order]
    diff = np.cumsum(w)[:-1]
    return float(np.sum(np.abs(diff) * np.diff(x)))


def w1_to_uniform_1d(P: DiscreteMeasure) -> float:
    """W1 between a 1-D discrete measure and Lebesgue measure on (0, 1), exactly."""
    if P.dim != 1:
        raise ValueError("need a one-dimensional measure")
    x = P.atoms[:, 0]
    F = np.cumsum(P.weights)
    # On [a, b) the empirical CDF is the constant c; integrate |c - t| dt exactly.
    a = np.concatenate([[0.0], x])
    b = np.concatenate([x, [1.0]])
    c = np.concatenate([[0.0], F])
    c[-1] = 1.0
    return float(np.sum(_abs_linear_integral(a, b, c)))


def _abs_linear_integral(a, b, c):
    # integral over [a, b] of |c - t| dt
    def prim(t):
        s = t - c
        return 0.5 * s * np.abs(s)

    return prim(b) - prim(a)


def save_plan(plan: TransportPlan, path) -> None:
    with open(path, "w") as fh:
        json.dump(plan.to_dict(), fh)
