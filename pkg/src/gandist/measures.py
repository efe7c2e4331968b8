"""Discrete probability measures on the open unit cube.

Atoms are stored as an ``(m, d)`` float array and weights as an ``(m,)`` array.
Everything is immutable after construction; sampling takes an explicit seed and
uses numpy's PCG64 bit generator, so draws are reproducible across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

# Closed box used in place of the open cube (0, 1)^d.
LO = 1e-9
HI = 1.0 - 1e-9

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class NormSpec:
    """An l_p norm on R^d with p in {1, 2, inf}."""

    p: float = 2.0

    def __post_init__(self):
        if self.p not in (1.0, 2.0, np.inf):
            raise ValueError(f"p must be 1, 2 or inf, got {self.p}")

    @classmethod
    def parse(cls, s) -> "NormSpec":
        if isinstance(s, NormSpec):
            return s
        if isinstance(s, str) and s.lower() in ("inf", "infinity", "max"):
            return cls(np.inf)
        return cls(float(s))

    @property
    def inv_p(self) -> float:
        # 1/p with the convention 1/inf = 0
        return 0.0 if np.isinf(self.p) else 1.0 / self.p

    def norm(self, v: np.ndarray, axis=-1) -> np.ndarray:
        return np.linalg.norm(v, ord=self.p, axis=axis)

    def cdist(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Pairwise distance matrix between rows of X and rows of Y."""
        X = np.atleast_2d(X)
        Y = np.atleast_2d(Y)
        diff = np.abs(X[:, None, :] - Y[None, :, :])
        if self.p == 1.0:
            return diff.sum(-1)
        if self.p == 2.0:
            return np.sqrt((diff**2).sum(-1))
        return diff.max(-1)

    def __str__(self):
        return "inf" if np.isinf(self.p) else str(int(self.p))


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finitely supported probability measure on the unit cube.

    Use :func:`new_discrete` or :func:`empirical` rather than calling the
    constructor directly; those normalize weights and merge duplicate atoms.
    """

    atoms: np.ndarray
    weights: np.ndarray

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    def __len__(self) -> int:
        return self.atoms.shape[0]

    def mean(self) -> np.ndarray:
        return self.weights @ self.atoms

    def expect(self, fn: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(self.weights @ np.asarray(fn(self.atoms), dtype=float))

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "atoms": self.atoms.tolist(),
            "weights": self.weights.tolist(),
        }

    def __repr__(self):
        return f"DiscreteMeasure(dim={self.dim}, atoms={len(self)})"


def _as_points(atoms, dim: int | None = None) -> np.ndarray:
    if isinstance(atoms, np.ndarray):
        X = atoms.astype(float)
        if X.ndim == 1:
            X = X[:, None] if dim in (None, 1) else X.reshape(-1, dim)
        return X
    rows = []
    for a in atoms:
        rows.append(np.atleast_1d(np.asarray(a, dtype=float)))
    if not rows:
        raise ValueError("empty atom list")
    dims = {r.shape[0] for r in rows}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch among atoms: {sorted(dims)}")
    return np.vstack(rows)


def _merge(X: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, inv = np.unique(X, axis=0, return_inverse=True)
    merged = np.zeros(uniq.shape[0])
    np.add.at(merged, inv.ravel(), w)
    return uniq, merged


def new_discrete(atoms, weights, clamp: bool = False) -> DiscreteMeasure:
    """Build a normalized, deduplicated measure.

    Atoms must lie in the safe box ``[1e-9, 1 - 1e-9]^d`` unless ``clamp`` is
    set, in which case they are projected into it.
    """
    X = _as_points(atoms)
    if X.shape[0] == 0:
        raise ValueError("empty atom list")
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != X.shape[0]:
        raise ValueError(f"{X.shape[0]} atoms but {w.shape[0]} weights")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    if not np.all(np.isfinite(X)):
        raise ValueError("atoms must be finite")
    if clamp:
        X = np.clip(X, LO, HI)
    elif np.any(X < LO) or np.any(X > HI):
        raise ValueError("atoms must lie in [1e-9, 1-1e-9]^d (pass clamp=True to project)")
    keep = w > 0
    if not keep.any():
        raise ValueError("all weights are zero")
    X, w = _merge(X[keep], w[keep])
    w = w / w.sum()
    return DiscreteMeasure(X, w)


def empirical(samples, clamp: bool = False) -> DiscreteMeasure:
    """Empirical measure: weight 1/n per sample, duplicates merged."""
    X = _as_points(samples)
    n = X.shape[0]
    if n == 0:
        raise ValueError("empty sample list")
    return new_discrete(X, np.full(n, 1.0 / n), clamp=clamp)


def dirac(x, clamp: bool = False) -> DiscreteMeasure:
    return new_discrete([np.atleast_1d(x)], [1.0], clamp=clamp)


def rng(seed) -> np.random.Generator:
    """PCG64 generator; ``seed`` may be an int or a sequence of ints."""
    return np.random.Generator(np.random.PCG64(seed))


def sample(measure: DiscreteMeasure, seed, n: int) -> np.ndarray:
    """Draw ``n`` i.i.d. atoms by inverse CDF on the weights. Returns (n, d)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u = rng(seed).random(n)
    cdf = np.cumsum(measure.weights)
    idx = np.searchsorted(cdf, u * cdf[-1], side="right")
    idx = np.minimum(idx, len(measure) - 1)
    return measure.atoms[idx]


def pushforward(generator, latent: DiscreteMeasure, dim: int | None = None) -> DiscreteMeasure:
    """Image measure of ``latent`` under ``generator``.

    ``generator`` is anything callable on an ``(m, d*)`` array (a ReluNetwork
    works). Outputs are clamped into the safe box; ``dim`` optionally pins the
    expected output dimension.
    """
    Y = np.asarray(generator(latent.atoms), dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    if Y.shape[0] != len(latent):
        raise ValueError("generator must map each latent atom to one point")
    if dim is not None and Y.shape[1] != dim:
        raise ValueError(f"generator output dimension {Y.shape[1]} != {dim}")
    return new_discrete(Y, latent.weights, clamp=True)


def uniform_grid(d: int, k: int) -> DiscreteMeasure:
    """Uniform measure on the midpoint tensor grid with k points per axis."""
    ax = (np.arange(k) + 0.5) / k
    mesh = np.meshgrid(*([ax] * d), indexing="ij")
    X = np.stack([g.ravel() for g in mesh], axis=1)
    return new_discrete(X, np.full(X.shape[0], 1.0 / X.shape[0]))


def latent_measure(d: int, mode: str = "grid", k: int = 16, seed=0, n: int | None = None) -> DiscreteMeasure:
    """Discretized latent distribution U: deterministic grid or i.i.d. uniform draws."""
    if mode == "grid":
        return uniform_grid(d, k)
    if mode == "iid":
        n = n if n is not None else k**d
        return empirical(rng(seed).random((n, d)), clamp=True)
    raise ValueError(f"unknown latent mode {mode!r}")


def example_pair(gamma: float, eps: float) -> tuple[DiscreteMeasure, DiscreteMeasure]:
    """The two-atom pair P = (d_g + d_{g+e})/2, Q = (d_0 + d_e)/2, clamped into the cube."""
    if gamma <= 0 or eps <= 0 or gamma + eps >= 1:
        raise ValueError("need gamma, eps > 0 and gamma + eps < 1")
    P = new_discrete([[gamma], [gamma + eps]], [0.5, 0.5], clamp=True)
    Q = new_discrete([[0.0], [eps]], [0.5, 0.5], clamp=True)
    return P, Q


def random_measure(gen: np.random.Generator, d: int, max_atoms: int = 5, min_atoms: int = 1) -> DiscreteMeasure:
    k = int(gen.integers(min_atoms, max_atoms + 1))
    X = gen.uniform(0.02, 0.98, size=(k, d))
    w = gen.uniform(0.1, 1.0, size=k)
    return new_discrete(X, w)


def load_measure(path, renormalize: bool = False) -> DiscreteMeasure:
    with open(path) as fh:
        data = json.load(fh)
    return measure_from_dict(data, renormalize=renormalize)


def measure_from_dict(data: dict, renormalize: bool = False) -> DiscreteMeasure:
    dim = int(data["dim"])
    X = np.asarray(data["atoms"], dtype=float).reshape(-1, dim)
    w = np.asarray(data["weights"], dtype=float)
    if not renormalize and abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(f"weights sum to {w.sum()!r}; pass renormalize to accept")
    return new_discrete(X, w)


def save_measure(measure: DiscreteMeasure, path) -> None:
    with open(path, "w") as fh:
        json.dump(measure.to_dict(), fh)
