"""Vanilla GAN distance between discrete measures, and related programs.

A discriminator only matters through its values on the pooled support of the
two measures, and any value vector satisfying the pairwise Lipschitz (or
Hölder) and box constraints extends to the whole cube with the same constant
(``mcshane_extend``). Each distance is therefore a finite concave program in
one variable per support point, solved by the interior-point routine in
:mod:`gandist._ipm`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.optimize import bisect
from scipy.sparse.csgraph import connected_components
from scipy.special import expit

from . import _ipm
from .measures import DiscreteMeasure, NormSpec, empirical, pushforward
from .transport import pooled_support

MAX_POOLED = 2000
MERGE_TOL = 1e-12
GAP_LIMIT = 1e-6
LOG2 = math.log(2.0)


@dataclass(frozen=True)
class FunctionClassSpec:
    """Lip(L, B) or the Hölder ball H^alpha(Gamma), optionally with a pointwise floor."""

    kind: str = "lipschitz"
    L: float = 1.0
    B: float = math.inf
    alpha: float = 1.0
    gamma: float = 1.0
    floor: float | None = None

    def __post_init__(self):
        if self.kind not in ("lipschitz", "hoelder"):
            raise ValueError(f"unknown class kind {self.kind!r}")
        if self.kind == "lipschitz" and not (self.L > 0 and self.B > 0):
            raise ValueError("Lipschitz class needs L > 0 and B > 0")
        if self.kind == "hoelder" and not (0 < self.alpha <= 1 and self.gamma > 0):
            raise ValueError("Hölder class needs alpha in (0, 1] and Gamma > 0")

    @classmethod
    def lip(cls, L, B=math.inf, floor=None):
        return cls("lipschitz", L=float(L), B=float(B), floor=floor)

    @classmethod
    def hoelder(cls, alpha, gamma, floor=None):
        return cls("hoelder", alpha=float(alpha), gamma=float(gamma), floor=floor)

    @classmethod
    def parse(cls, text: str) -> "FunctionClassSpec":
        """Parse ``lip:L,B`` or ``hoelder:alpha,Gamma`` (B may be ``inf``)."""
        kind, _, args = text.partition(":")
        vals = [float(a) for a in args.split(",")] if args else []
        if kind in ("lip", "lipschitz"):
            return cls.lip(*vals)
        if kind in ("hoelder", "holder", "hölder"):
            return cls.hoelder(*vals)
        raise ValueError(f"cannot parse class {text!r}")

    @property
    def bound(self) -> float:
        """Sup-norm bound of the class."""
        return self.B if self.kind == "lipschitz" else self.gamma

    @property
    def lipschitz_constant(self) -> float:
        return self.L if self.kind == "lipschitz" else self.gamma

    def modulus(self, D: np.ndarray) -> np.ndarray:
        if self.kind == "lipschitz":
            return self.L * D
        return self.gamma * D**self.alpha

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "lipschitz":
            d.update(L=self.L, B=self.B)
        else:
            d.update(alpha=self.alpha, gamma=self.gamma)
        if self.floor is not None:
            d["floor"] = self.floor
        return d


@dataclass(frozen=True)
class DiscriminatorValues:
    points: np.ndarray
    values: np.ndarray
    cls: FunctionClassSpec
    norm: NormSpec

    def violation(self) -> float:
        """Largest constraint violation (<= 0 means feasible)."""
        D = self.norm.cdist(self.points, self.points)
        v = self.values
        worst = np.max(np.abs(v[:, None] - v[None, :]) - self.cls.modulus(D))
        worst = max(worst, np.max(np.abs(v)) - self.cls.bound)
        if self.cls.floor is not None:
            worst = max(worst, self.cls.floor - np.min(v))
        return float(worst)

    def extend(self) -> Callable[[np.ndarray], np.ndarray]:
        return mcshane_extend(self)

    def to_dict(self) -> dict:
        return {
            "points": self.points.tolist(),
            "values": self.values.tolist(),
            "class": self.cls.to_dict(),
            "p": str(self.norm),
        }


@dataclass(frozen=True)
class VanillaValue:
    value: float
    witness: DiscriminatorValues
    solver_gap: float
    iterations: int = 0


def logistic_loss(w):
    """psi(w) = -log((1 + e^{-w}) / 2), evaluated stably."""
    return LOG2 - np.logaddexp(0.0, -np.asarray(w, dtype=float))


def mcshane_extend(witness: DiscriminatorValues) -> Callable[[np.ndarray], np.ndarray]:
    """Extend support values to the whole space without increasing the constant.

    Uses min_u (w_u + modulus(|x - u|)) and then clips into [floor, bound];
    clipping is 1-Lipschitz so the constraint class is preserved.
    """
    pts, vals, cls, norm = witness.points, witness.values, witness.cls, witness.norm
    lo = -cls.bound if cls.floor is None else max(-cls.bound, cls.floor)

    def W(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != pts.shape[1] and pts.shape[1] == 1:
            X = X.reshape(-1, 1)
        out = np.empty(X.shape[0])
        for start in range(0, X.shape[0], 4096):
            D = norm.cdist(X[start:start + 4096], pts)
            out[start:start + 4096] = np.min(vals[None, :] + cls.modulus(D), axis=1)
        return np.clip(out, lo, cls.bound)

    return W


# ---------------------------------------------------------------- constraints

def _pairs(points: np.ndarray, D: np.ndarray, cls: FunctionClassSpec) -> tuple[np.ndarray, np.ndarray]:
    n = points.shape[0]
    if n < 2:
        return np.empty(0, int), np.empty(0, int)
    if cls.kind == "lipschitz" and points.shape[1] == 1:
        order = np.argsort(points[:, 0])
        return order[:-1], order[1:]
    iu, ju = np.triu_indices(n, 1)
    if cls.kind == "lipschitz" and n <= 300:
        # drop (u, v) when some w lies on a geodesic: the constraint is implied
        keep = np.ones(iu.shape[0], bool)
        for k, (u, v) in enumerate(zip(iu, ju)):
            via = D[u] + D[:, v]
            via[[u, v]] = np.inf
            if np.min(via) <= D[u, v] * (1 + 1e-13):
                keep[k] = False
        iu, ju = iu[keep], ju[keep]
    return iu, ju


def _constraints(points, cls: FunctionClassSpec, norm: NormSpec):
    n = points.shape[0]
    D = norm.cdist(points, points)
    iu, ju = _pairs(points, D, cls)
    c = cls.modulus(D[iu, ju])
    k = iu.shape[0]
    r = np.arange(k)
    rows = [np.concatenate([r, r, k + r, k + r])]
    cols = [np.concatenate([iu, ju, iu, ju])]
    vals = [np.concatenate([np.ones(k), -np.ones(k), -np.ones(k), np.ones(k)])]
    h = [c, c]
    off = 2 * k
    bound = cls.bound
    if math.isfinite(bound):
        idx = np.arange(n)
        rows += [off + idx, off + n + idx]
        cols += [idx, idx]
        vals += [np.ones(n), -np.ones(n)]
        h += [np.full(n, bound), np.full(n, bound)]
        off += 2 * n
    if cls.floor is not None:
        idx = np.arange(n)
        rows.append(off + idx)
        cols.append(idx)
        vals.append(-np.ones(n))
        h.append(np.full(n, -cls.floor))
        off += n
    G = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(off, n))
    return G, np.concatenate(h), D


def _start(cls: FunctionClassSpec) -> float:
    lo = cls.floor if cls.floor is not None else -cls.bound
    hi = cls.bound
    if lo >= hi:
        raise ValueError(f"infeasible class: floor {lo} >= bound {hi}")
    if lo < 0 < hi:
        return 0.0
    if math.isinf(hi):
        return lo + 1.0
    return 0.5 * (lo + hi)


def _merge_close(points, p, q, norm: NormSpec):
    """Collapse points within MERGE_TOL of each other; rounding twins leave no interior otherwise."""
    D = norm.cdist(points, points)
    close = sp.csr_matrix(D <= MERGE_TOL)
    k, labels = connected_components(close, directed=False)
    if k == points.shape[0]:
        return np.arange(k), points, p, q
    first = np.full(k, -1)
    for i in range(points.shape[0] - 1, -1, -1):
        first[labels[i]] = i
    return labels, points[first], np.bincount(labels, p, k), np.bincount(labels, q, k)


def _solve(P, Q, cls, norm, make_objective, shift_invariant=False) -> VanillaValue:
    norm = NormSpec.parse(norm)
    full, p, q = pooled_support(P, Q)
    if full.shape[0] > MAX_POOLED:
        raise ValueError(f"pooled support of {full.shape[0]} points exceeds {MAX_POOLED}")
    labels, points, p, q = _merge_close(full, p, q, norm)
    n = points.shape[0]
    G, h, D = _constraints(points, cls, norm)
    obj = make_objective(p, q)
    w0 = np.full(n, _start(cls))
    diam = float(D.max()) if n > 1 else 0.0
    mod = float(cls.modulus(np.array(diam))) if n > 1 else 0.0

    anchored = shift_invariant and not math.isfinite(cls.bound) and cls.floor is None
    if anchored:
        # the linear objective ignores constant shifts; pin the first point to 0
        Gr = G[:, 1:]
        sub = _ipm.Objective(
            value=lambda x: obj.value(np.concatenate([[0.0], x])),
            grad=lambda x: obj.grad(np.concatenate([[0.0], x]))[1:],
            hess_diag=lambda x: obj.hess_diag(np.concatenate([[0.0], x]))[1:],
        )
        if n == 1:
            w = np.zeros(1)
            res = _ipm.IPMResult(w, obj.value(w), 0.0, 0.0, 0.0, np.inf, 0)
        else:
            res = _ipm.maximize(sub, Gr, h, w0[1:], radius=2 * mod * math.sqrt(n))
            res.w = np.concatenate([[0.0], res.w])
    else:
        radius = 2 * math.sqrt(n) * (cls.bound if math.isfinite(cls.bound) else mod + 50.0)
        res = _ipm.maximize(obj, G, h, w0, radius=radius)
        if not math.isfinite(cls.bound):
            # the radius above assumed the optimum is within 50 + modulus of 0
            res.gap += 0.0 if np.max(np.abs(res.w)) < mod + 25.0 else math.inf
    if math.isfinite(res.gap) and res.gap > GAP_LIMIT:
        raise _ipm.SolverError(f"no convergence after {res.iterations} iterations (gap {res.gap:.3e})")
    wit = DiscriminatorValues(full, res.w[labels], cls, norm)
    if wit.violation() > 1e-9:
        raise _ipm.SolverError(f"solution violates constraints by {wit.violation():.3e}")
    return VanillaValue(value=float(res.value), witness=wit, solver_gap=float(res.gap), iterations=res.iterations)


def _vanilla_objective(p, q):
    def value(w):
        return float(p @ logistic_loss(w) + q @ logistic_loss(-w))

    def grad(w):
        return p * expit(-w) - q * expit(w)

    def hess(w):
        return -(p + q) * expit(w) * expit(-w)

    return _ipm.Objective(value, grad, hess)


def _linear_objective(p, q, kappa=0.0):
    c = p - q

    def value(w):
        return float(c @ w - kappa * (p @ (w * w)))

    def grad(w):
        return c - 2.0 * kappa * p * w

    def hess(w):
        return -2.0 * kappa * p

    return _ipm.Objective(value, grad, hess)


# ----------------------------------------------------------------- distances

def vanilla_distance(P: DiscreteMeasure, Q: DiscreteMeasure, cls: FunctionClassSpec,
                     norm: NormSpec = NormSpec()) -> VanillaValue:
    """sup over the class of E_P[psi(W(X))] + E_Q[psi(-W(Y))]."""
    return _solve(P, Q, cls, norm, _vanilla_objective)


def ipm_distance(P: DiscreteMeasure, Q: DiscreteMeasure, cls: FunctionClassSpec,
                 norm: NormSpec = NormSpec()) -> VanillaValue:
    """Wasserstein-type objective: sup over the class of E_P[W] - E_Q[W]."""
    return _solve(P, Q, cls, norm, _linear_objective, shift_invariant=True)


def penalty_weight_upper(B: float) -> float:
    eb = math.exp(B)
    return eb / (2.0 * eb - 1.0) ** 2


def penalty_programs(P, Q, L: float, B: float, norm: NormSpec = NormSpec()) -> tuple[VanillaValue, VanillaValue]:
    """Both penalized-Wasserstein programs bracketing V over Lip(L, B)."""
    if not L > 2:
        raise ValueError("penalty bounds need L > 2")
    if not B > 0:
        raise ValueError("penalty bounds need B > 0")
    B_low = math.log((1.0 + math.exp(B)) / 2.0)
    lower_cls = FunctionClassSpec.lip(1.0, B_low, floor=-math.log(2.0 - 2.0 / L))
    upper_cls = FunctionClassSpec.lip(L, B, floor=-LOG2)
    lo = _solve(P, Q, lower_cls, norm, lambda p, q: _linear_objective(p, q, L * (L - 1) / 2.0))
    up = _solve(P, Q, upper_cls, norm, lambda p, q: _linear_objective(p, q, penalty_weight_upper(B)))
    return lo, up


def penalty_bounds(P, Q, L: float, B: float, norm: NormSpec = NormSpec()) -> tuple[float, float]:
    lo, up = penalty_programs(P, Q, L, B, norm)
    return lo.value, up.value


def sandwich_constants(L: float, d: int, norm: NormSpec = NormSpec()) -> tuple[float, float]:
    """Constants (c1, c2) of the lower bound min(c1 W1, c2 W1^2) <= V."""
    if not L > 2:
        raise ValueError("sandwich constants need L > 2")
    ip = NormSpec.parse(norm).inv_p
    c1 = 0.5 * math.log(2.0 - 2.0 / L) / d**ip
    c2 = 1.0 / (2.0 * d ** (2 * ip) * L * (L - 1.0))
    return c1, c2


# ------------------------------------------------------------ affine example

def affine_objective(a, b, gamma, eps):
    """Objective of the affine discriminator x -> a x + b on the two-atom pair."""
    return 0.5 * (-np.logaddexp(0, -a * gamma - b) - np.logaddexp(0, -a * (gamma + eps) - b)
                  - np.logaddexp(0, b) - np.logaddexp(0, a * eps + b)) + math.log(4.0)


def affine_grad_b(a, b, gamma, eps):
    return 0.5 * (expit(-a * gamma - b) + expit(-a * (gamma + eps) - b) - expit(b) - expit(a * eps + b))


def _affine_root_fn(gamma, eps):
    def r(a):
        return (eps - gamma) * math.exp(a * (eps + gamma) / 2) - (eps + gamma) * math.exp(-a * (eps - gamma) / 2) - 2 * gamma
    return r


def affine_example(gamma: float, eps: float, L: float) -> tuple[float, float, float]:
    """Optimal slope/intercept and value for affine discriminators with |a| <= L."""
    if not (gamma > 0 and eps > 0 and gamma + eps < 1):
        raise ValueError("need gamma, eps > 0 and gamma + eps < 1")
    if not L > 0:
        raise ValueError("need L > 0")
    if gamma >= eps:
        a = float(L)
    else:
        r = _affine_root_fn(gamma, eps)
        # r(0) = -4 gamma < 0 and r is increasing; the root is capped at L
        a = float(L) if r(L) <= 0 else bisect(r, 0.0, L, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    b = -a * (eps + gamma) / 2.0
    return a, b, float(affine_objective(a, b, gamma, eps))


# ------------------------------------------------------------------------ ERM

@dataclass
class ParameterBox:
    """A generator family indexed by a tensor grid over a small parameter box."""

    make: Callable[..., Callable]
    bounds: Sequence[tuple[float, float]]
    steps: Sequence[int]

    def __post_init__(self):
        if len(self.bounds) > 8:
            raise ValueError("at most 8 parameters")

    @property
    def resolution(self) -> list[float]:
        return [(hi - lo) / max(k - 1, 1) for (lo, hi), k in zip(self.bounds, self.steps)]

    def candidates(self) -> list[tuple]:
        axes = [np.linspace(lo, hi, k) for (lo, hi), k in zip(self.bounds, self.steps)]
        return [tuple(float(v) for v in c) for c in itertools.product(*axes)]


def _family(family) -> tuple[list, Callable]:
    if isinstance(family, ParameterBox):
        return family.candidates(), lambda c: family.make(*c)
    cands = list(family)
    return cands, lambda c: c


def erm_generator(samples, family, latent: DiscreteMeasure, cls: FunctionClassSpec,
                  norm: NormSpec = NormSpec(), distance=vanilla_distance):
    """Minimize G -> V(P_n, G#latent) by exhaustive search over the family.

    Returns ``(best_candidate, history)`` with ``history`` a list of
    ``(candidate, objective)``; ties go to the first candidate enumerated.
    """
    cands, realize = _family(family)
    if not cands:
        raise ValueError("empty generator family")
    Pn = samples if isinstance(samples, DiscreteMeasure) else empirical(samples)
    history = []
    best, best_val = None, math.inf
    for c in cands:
        val = distance(Pn, pushforward(realize(c), latent, dim=Pn.dim), cls, norm).value
        history.append((c, val))
        if val < best_val:
            best, best_val = c, val
    return best, history
