"""Primal-dual interior-point method for separable concave maximization.

Solves  max f(w)  s.t.  G w <= h  where f is a sum of smooth concave
one-dimensional terms (so its Hessian is diagonal). Every program in
:mod:`gandist.vanilla` has this form. Iterates stay strictly feasible, and
the returned gap is a Lagrangian bound: for any feasible w',
f(w') <= f(w) + eta + |r_dual| * radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp


class SolverError(RuntimeError):
    pass


@dataclass
class Objective:
    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    hess_diag: Callable[[np.ndarray], np.ndarray]  # entries <= 0


@dataclass
class IPMResult:
    w: np.ndarray
    value: float
    gap: float
    eta: float
    dual_residual: float
    min_slack: float
    iterations: int


def maximize(obj: Objective, G: sp.csr_matrix, h: np.ndarray, w0: np.ndarray, radius: float,
             tol: float = 1e-11, max_iter: int = 200, mu: float = 10.0) -> IPMResult:
    """Maximize ``obj`` over {G w <= h} starting from a strictly feasible ``w0``."""
    G = sp.csr_matrix(G)
    Gt = G.T.tocsr()
    m = G.shape[0]
    w = np.asarray(w0, dtype=float).copy()
    s = h - G @ w
    if m and np.min(s) <= 0:
        raise SolverError("starting point is not strictly feasible")
    if m == 0:
        return _unconstrained(obj, w, tol, max_iter)
    lam = 1.0 / s

    def residuals(w, lam, s, t):
        r_dual = -obj.grad(w) + Gt @ lam
        r_cent = lam * s - 1.0 / t
        return r_dual, r_cent

    it = 0
    for it in range(1, max_iter + 1):
        eta = float(s @ lam)
        t = mu * m / eta
        g = obj.grad(w)
        r_dual, r_cent = residuals(w, lam, s, t)
        if np.linalg.norm(r_dual) <= tol and eta <= tol:
            break
        D = lam / s
        H = (Gt @ sp.diags(D) @ G).toarray()
        H[np.diag_indices_from(H)] -= obj.hess_diag(w)
        rhs = g - Gt @ (1.0 / (t * s))
        dw = _solve(H, rhs)
        Gdw = G @ dw
        dlam = (1.0 / (t * s) - lam) + D * Gdw

        neg = dlam < 0
        step = min(1.0, 0.99 * np.min(-lam[neg] / dlam[neg])) if neg.any() else 1.0
        neg = Gdw > 0
        if neg.any():
            step = min(step, 0.99 * np.min(s[neg] / Gdw[neg]))
        r0 = np.sqrt(np.linalg.norm(r_dual) ** 2 + np.linalg.norm(r_cent) ** 2)
        for _ in range(60):
            w1 = w + step * dw
            lam1 = lam + step * dlam
            s1 = h - G @ w1
            if np.min(s1) > 0:
                rd, rc = residuals(w1, lam1, s1, t)
                if np.sqrt(np.linalg.norm(rd) ** 2 + np.linalg.norm(rc) ** 2) <= (1 - 0.01 * step) * r0:
                    break
            step *= 0.5
        else:
            # no progress possible at this precision; keep the current iterate
            break
        w, lam, s = w1, lam1, s1

    eta = float(s @ lam)
    r_dual = float(np.linalg.norm(-obj.grad(w) + Gt @ lam))
    return IPMResult(w=w, value=float(obj.value(w)), gap=eta + r_dual * radius, eta=eta,
                     dual_residual=r_dual, min_slack=float(np.min(s)), iterations=it)


def _unconstrained(obj, w, tol, max_iter):
    it = 0
    for it in range(1, max_iter + 1):
        g = obj.grad(w)
        if np.linalg.norm(g) <= tol:
            break
        w = w + g / -obj.hess_diag(w)
    return IPMResult(w=w, value=float(obj.value(w)), gap=0.0, eta=0.0,
                     dual_residual=float(np.linalg.norm(obj.grad(w))), min_slack=np.inf, iterations=it)


def _solve(H, rhs):
    try:
        c = la.cho_factor(H, check_finite=False)
        return la.cho_solve(c, rhs, check_finite=False)
    except la.LinAlgError:
        return la.lstsq(H, rhs, check_finite=False)[0]
