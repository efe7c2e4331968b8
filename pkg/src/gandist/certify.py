"""Empirical certificates for networks and function oracles.

Grid and random-pair certificates are lower bounds on the true supremum and
carry their resolution. ``lipschitz_exact_1d`` is exact: it enumerates every
breakpoint of a one-dimensional ReLU network.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .measures import HI, LO, NormSpec, rng
from .relunet import ReluNetwork

MAX_GRID = 10**7
MAX_BREAKPOINTS = 10**6


@dataclass(frozen=True)
class Certificate:
    quantity: str  # sup_error | hoelder_const | lipschitz_const
    value: float
    method: str  # grid | random_pairs | breakpoint_exact
    resolution: float
    alpha: float | None = None
    where: tuple | None = None

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("quantity", "value", "method", "resolution", "alpha", "where")}


def _oracle(f) -> Callable[[np.ndarray], np.ndarray]:
    def F(X):
        return np.asarray(f(X), dtype=float).reshape(-1)
    return F


def grid_points(d: int, step: float) -> np.ndarray:
    """Interior grid with spacing step/2: the half-step offset points plus interior nodes.

    Halving ``step`` gives a superset, so certificates are monotone under refinement.
    """
    k = round(1.0 / step)
    if k < 1 or abs(k * step - 1.0) > 1e-9:
        raise ValueError("1/step must be an integer")
    n_axis = 2 * k - 1
    if n_axis**d > MAX_GRID:
        raise ValueError(f"grid of {n_axis}^{d} points exceeds {MAX_GRID}")
    ax = np.arange(1, 2 * k) / (2.0 * k)
    mesh = np.meshgrid(*([ax] * d), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def sup_error(f, g, d: int, step: float) -> Certificate:
    """max |f - g| over the interior grid of spacing step/2."""
    if d <= 2 and step > 0.01 + 1e-15:
        raise ValueError("step must be <= 0.01 for d <= 2")
    X = grid_points(d, step)
    F, G = _oracle(f), _oracle(g)
    best, where = 0.0, None
    for s in range(0, X.shape[0], 200_000):
        diff = np.abs(F(X[s:s + 200_000]) - G(X[s:s + 200_000]))
        i = int(np.argmax(diff))
        if diff[i] > best:
            best, where = float(diff[i]), tuple(X[s + i])
    return Certificate("sup_error", best, "grid", step, where=where)


def _sample_pairs(gen, d: int, pairs: int):
    half = pairs // 2
    X1 = gen.uniform(LO, HI, size=(half, d))
    Y1 = gen.uniform(LO, HI, size=(half, d))
    # local pairs at scales 1e-4 .. 1e-1 probe small-distance behaviour
    X2 = gen.uniform(LO, HI, size=(pairs - half, d))
    scale = 10.0 ** gen.uniform(-4, -1, size=(pairs - half, 1))
    Y2 = np.clip(X2 + scale * gen.standard_normal((pairs - half, d)), LO, HI)
    return np.vstack([X1, X2]), np.vstack([Y1, Y2])


def hoelder_constant(f, d: int, alpha: float, pairs: int = 10**4, seed=0,
                     norm: NormSpec = NormSpec(), grid_step: float | None = None) -> Certificate:
    """max(sup |f|, max |f(x) - f(y)| / |x - y|^alpha) over sampled and adjacent-grid pairs."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if pairs < 10**4:
        raise ValueError("need at least 1e4 pairs")
    norm = NormSpec.parse(norm)
    F = _oracle(f)
    gen = rng(seed)
    X, Y = _sample_pairs(gen, d, pairs)
    fx, fy = F(X), F(Y)
    dist = norm.norm(X - Y, axis=1)
    ok = dist > 0
    ratio = np.zeros_like(dist)
    ratio[ok] = np.abs(fx[ok] - fy[ok]) / dist[ok] ** alpha
    best = float(ratio.max())
    sup = float(max(np.abs(fx).max(), np.abs(fy).max()))

    if grid_step is None:
        grid_step = 1e-3 if d == 1 else (0.01 if d == 2 else 0.1)
    k = round(1.0 / grid_step)
    ax = (np.arange(k) + 0.5) / k
    G = np.stack([g.ravel() for g in np.meshgrid(*([ax] * d), indexing="ij")], axis=1)
    vals = F(G).reshape((k,) * d)
    sup = max(sup, float(np.abs(vals).max()))
    h = grid_step**alpha
    for axis in range(d):
        best = max(best, float(np.abs(np.diff(vals, axis=axis)).max(initial=0.0)) / h)
    return Certificate("hoelder_const", max(sup, best), "random_pairs", pairs, alpha=alpha)


# ------------------------------------------------------- exact 1-D slopes

def _preacts(net: ReluNetwork, x: np.ndarray, upto: int) -> np.ndarray:
    H = x[None, :]
    for k in range(upto + 1):
        A, b = net.layers[k]
        Z = A @ H + b[:, None]
        if k == upto:
            return Z
        H = np.maximum(Z, 0.0)
    raise AssertionError


def _slopes(net: ReluNetwork, x: np.ndarray) -> np.ndarray:
    # forward-mode derivative at points strictly inside linear pieces
    H = x[None, :]
    D = np.ones_like(H)
    last = net.depth - 1
    for k, (A, b) in enumerate(net.layers):
        Z = A @ H + b[:, None]
        dZ = A @ D
        if k == last:
            return dZ
        mask = Z > 0
        H = np.where(mask, Z, 0.0)
        D = np.where(mask, dZ, 0.0)
    raise AssertionError


def breakpoints_1d(net: ReluNetwork) -> np.ndarray:
    """All kinks of a scalar-input network, found layer by layer."""
    if net.input_dim != 1:
        raise ValueError("need a network with one input")
    T = np.empty(0)
    for k in range(net.depth - 1):
        if T.size:
            probe = np.concatenate([[T[0] - 1.0], T, [T[-1] + 1.0]])
        else:
            probe = np.array([0.0, 1.0])
        Z = _preacts(net, probe, k)  # (neurons, points)
        roots = []
        # interior pieces: pre-activations are affine between consecutive probes
        za, zb = Z[:, :-1], Z[:, 1:]
        a, b = probe[:-1], probe[1:]
        cross = (za * zb < 0) | ((za == 0) & (zb != 0))
        i, j = np.nonzero(cross)
        if i.size:
            t = za[i, j] / (za[i, j] - zb[i, j])
            roots.append(a[j] + t * (b[j] - a[j]))
        # the two unbounded ends, extrapolated linearly
        for lo_idx, hi_idx, left in ((0, 1, True), (-2, -1, False)):
            z0, z1 = Z[:, lo_idx], Z[:, hi_idx]
            x0, x1 = probe[lo_idx], probe[hi_idx]
            slope = (z1 - z0) / (x1 - x0)
            nz = slope != 0
            r = x0 - z0[nz] / slope[nz]
            if T.size:
                r = r[r < T[0]] if left else r[r > T[-1]]
            elif not left:
                r = np.empty(0)  # a single affine piece: the left pass already found all roots
            roots.append(r)
        if roots:
            T = _merge_close(np.unique(np.concatenate([T] + roots)))
        if T.size > MAX_BREAKPOINTS:
            raise ValueError(f"more than {MAX_BREAKPOINTS} breakpoints")
    return T


def _merge_close(T: np.ndarray, rel: float = 1e-12) -> np.ndarray:
    # the same kink reached through different neurons can differ by rounding;
    # pieces that short are artifacts, not linear regions
    if T.size < 2:
        return T
    keep = np.concatenate([[True], np.diff(T) > rel * np.maximum(1.0, np.abs(T[1:]))])
    return T[keep]


def lipschitz_exact_1d(net: ReluNetwork, domain: tuple[float, float] | None = None) -> Certificate:
    """Exact maximal |slope| of a 1-D network, on the real line or on ``domain``."""
    T = breakpoints_1d(net)
    if domain is not None:
        lo, hi = domain
        T = np.concatenate([[lo], T[(T > lo) & (T < hi)], [hi]])
        mids = 0.5 * (T[:-1] + T[1:])
    else:
        if T.size == 0:
            mids = np.array([0.0])
        else:
            mids = np.concatenate([[T[0] - 1.0], 0.5 * (T[:-1] + T[1:]), [T[-1] + 1.0]])
    S = np.abs(_slopes(net, mids))
    i = np.unravel_index(int(np.argmax(S)), S.shape)
    return Certificate("lipschitz_const", float(S[i]), "breakpoint_exact", float(T.size), where=(float(mids[i[1]]),))
