"""Explicit ReLU networks and a constructive Hölder-ball approximation.

A network is a list of affine layers (A_k, b_k); ReLU is applied after every
layer except the last. Weights are kept as scipy CSR matrices since the
assembled approximants are large and very sparse.

The approximation pipeline follows the partition-of-unity recipe: trapezoid
(hat) factors on an N-grid, products of factors through sawtooth-based
multiplication networks, local averages of the target as coefficients, and a
final linear layer summing everything.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .measures import HI, LO

# state entries processed per evaluation chunk (features x batch)
CHUNK_ENTRIES = 2 * 10**7


def _csr(A) -> sp.csr_matrix:
    if sp.issparse(A):
        M = sp.csr_matrix(A, dtype=float)
    else:
        M = sp.csr_matrix(np.atleast_2d(np.asarray(A, dtype=float)))
    M.eliminate_zeros()
    M.sort_indices()
    return M


class ReluNetwork:
    """Feedforward ReLU network x_k = relu(A_k x_{k-1} + b_k), last layer affine."""

    def __init__(self, layers, input_dim: int | None = None):
        if not layers:
            raise ValueError("a network needs at least one layer")
        self.layers = [(_csr(A), np.asarray(b, dtype=float).ravel()) for A, b in layers]
        self.input_dim = self.layers[0][0].shape[1] if input_dim is None else int(input_dim)
        prev = self.input_dim
        for k, (A, b) in enumerate(self.layers):
            if A.shape[1] != prev:
                raise ValueError(f"layer {k}: expects {A.shape[1]} inputs, previous width is {prev}")
            if b.shape[0] != A.shape[0]:
                raise ValueError(f"layer {k}: {A.shape[0]} rows but {b.shape[0]} biases")
            prev = A.shape[0]

    @property
    def output_dim(self) -> int:
        return self.layers[-1][0].shape[0]

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def max_width(self) -> int:
        return max(A.shape[0] for A, _ in self.layers)

    def __repr__(self):
        K, n, w = stats(self)
        return f"ReluNetwork(in={self.input_dim}, out={self.output_dim}, layers={K}, neurons={n}, weights={w})"

    def _inputs(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 0:
            X = X.reshape(1, 1)
        elif X.ndim == 1:
            X = X[:, None] if self.input_dim == 1 else X[None, :]
        if X.shape[1] != self.input_dim:
            raise ValueError(f"network takes {self.input_dim} inputs, got {X.shape[1]}")
        return X

    def forward(self, X) -> np.ndarray:
        """Outputs as an (n, output_dim) array."""
        X = self._inputs(X)
        n = X.shape[0]
        out = np.empty((n, self.output_dim))
        step = max(1, CHUNK_ENTRIES // max(self.max_width, 1))
        for s in range(0, n, step):
            out[s:s + step] = _forward_chunk(self.layers, X[s:s + step].T).T
        return out

    def __call__(self, X) -> np.ndarray:
        """Evaluate; a single-output network returns shape (n,)."""
        Y = self.forward(X)
        return Y[:, 0] if self.output_dim == 1 else Y

    def to_dict(self, sparse: bool | None = None) -> dict:
        """JSON form. Large networks use a (rows, cols, vals) triplet per matrix."""
        if sparse is None:
            sparse = sum(A.shape[0] * A.shape[1] for A, _ in self.layers) > 10**6
        layers = []
        for A, b in self.layers:
            if sparse:
                C = A.tocoo()
                layers.append({"shape": list(A.shape),
                               "A_sparse": [C.row.tolist(), C.col.tolist(), C.data.tolist()],
                               "b": b.tolist()})
            else:
                layers.append({"A": A.toarray().tolist(), "b": b.tolist()})
        return {"input_dim": self.input_dim, "layers": layers}

    @classmethod
    def from_dict(cls, data: dict) -> "ReluNetwork":
        layers = []
        for lay in data["layers"]:
            if "A_sparse" in lay:
                r, c, v = lay["A_sparse"]
                A = sp.csr_matrix((v, (r, c)), shape=tuple(lay["shape"]))
            else:
                A = np.asarray(lay["A"], dtype=float)
                if A.ndim == 1:
                    A = A[None, :]
            layers.append((A, lay["b"]))
        return cls(layers, input_dim=data.get("input_dim"))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path) -> "ReluNetwork":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _forward_chunk(layers, H: np.ndarray) -> np.ndarray:
    # H is (features, batch). Once activations become sparse (the assembled
    # approximants are zero away from each local support) switch to sparse
    # states; the structural zeros are exact, so this does not change values.
    last = len(layers) - 1
    sparse_state = False
    for k, (A, b) in enumerate(layers):
        if not sparse_state:
            Z = A @ H
            Z += b[:, None]
            if k == last:
                return Z
            H = np.maximum(Z, 0.0)
            if k < last - 1 and H.size > 10**5 and np.count_nonzero(H) < 0.05 * H.size:
                H = sp.csr_matrix(H)
                sparse_state = True
        else:
            if k == last:
                Z = np.asarray((A @ H).todense())
                Z += b[:, None]
                return Z
            H = _sparse_relu_layer(A, b, H)
    return H


def _sparse_relu_layer(A, b, H):
    pos = np.flatnonzero(b > 0)
    Z = sp.csr_matrix(A @ H)
    if pos.size:
        # rows with a positive bias are nonzero everywhere before the ReLU
        Z = Z.tolil()
        dense_rows = np.asarray(Z[pos].todense()) + b[pos, None]
        Z[pos] = np.maximum(dense_rows, 0.0)
        Z = Z.tocsr()
        mask = np.ones(b.shape[0], bool)
        mask[pos] = False
    else:
        mask = np.ones(b.shape[0], bool)
    rows = np.repeat(np.arange(Z.shape[0]), np.diff(Z.indptr))
    keep = mask[rows]
    Z.data[keep] += b[rows[keep]]
    np.maximum(Z.data, 0.0, out=Z.data)
    Z.eliminate_zeros()
    return Z


# ------------------------------------------------------------------ algebra

def stats(net: ReluNetwork) -> tuple[int, int, int]:
    """(layers, hidden neurons, nonzero weights and biases)."""
    K = net.depth
    neurons = sum(A.shape[0] for A, _ in net.layers[:-1])
    nnz = sum(A.nnz + int(np.count_nonzero(b)) for A, b in net.layers)
    return K, neurons, nnz


def affine_network(A, b=None) -> ReluNetwork:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.zeros(A.shape[0]) if b is None else b
    return ReluNetwork([(A, b)])


def identity_network(k: int = 1) -> ReluNetwork:
    """x = relu(x) - relu(-x), one hidden layer of 2k neurons."""
    I = sp.identity(k, format="csr")
    return ReluNetwork([(sp.vstack([I, -I]), np.zeros(2 * k)), (sp.hstack([I, -I]), np.zeros(k))])


def pad(net: ReluNetwork, depth: int) -> ReluNetwork:
    """Same function with exactly ``depth`` layers, using identity-passing layers."""
    if depth < net.depth:
        raise ValueError(f"cannot pad a depth-{net.depth} network down to {depth}")
    if depth == net.depth:
        return net
    k = net.output_dim
    A, b = net.layers[-1]
    I = sp.identity(k, format="csr")
    layers = list(net.layers[:-1]) + [(sp.vstack([A, -A]), np.concatenate([b, -b]))]
    I2 = sp.identity(2 * k, format="csr")
    # the 2k nonnegative neurons pass through relu unchanged
    layers += [(I2, np.zeros(2 * k))] * (depth - net.depth - 1)
    layers.append((sp.hstack([I, -I]), np.zeros(k)))
    return ReluNetwork(layers, net.input_dim)


def stack(nets: Sequence[ReluNetwork]) -> ReluNetwork:
    """Parallel networks on a shared input; outputs are concatenated."""
    nets = list(nets)
    if not nets:
        raise ValueError("nothing to stack")
    d = nets[0].input_dim
    if any(n.input_dim != d for n in nets):
        raise ValueError("stacked networks must share the input dimension")
    depth = max(n.depth for n in nets)
    nets = [pad(n, depth) for n in nets]
    layers = []
    for k in range(depth):
        As = [n.layers[k][0] for n in nets]
        A = sp.vstack(As) if k == 0 else sp.block_diag(As)
        layers.append((A, np.concatenate([n.layers[k][1] for n in nets])))
    return ReluNetwork(layers, d)


def add(nets: Sequence[ReluNetwork], scalars: Sequence[float], const: float = 0.0) -> ReluNetwork:
    """Network computing sum_i scalars[i] * nets[i](x) + const (single outputs summed per coordinate)."""
    nets = list(nets)
    if len(nets) != len(scalars):
        raise ValueError("one scalar per network")
    k = nets[0].output_dim
    if any(n.output_dim != k for n in nets):
        raise ValueError("summed networks must share the output dimension")
    S = stack(nets)
    A, b = S.layers[-1]
    I = sp.identity(k, format="csr")
    C = sp.hstack([float(c) * I for c in scalars]).tocsr()
    return ReluNetwork(list(S.layers[:-1]) + [(C @ A, C @ b + const)], S.input_dim)


def compose(f: ReluNetwork, g: ReluNetwork) -> ReluNetwork:
    """x -> f(g(x)); g's output layer is merged into f's input layer."""
    if f.input_dim != g.output_dim:
        raise ValueError(f"cannot feed {g.output_dim} outputs into {f.input_dim} inputs")
    Ag, bg = g.layers[-1]
    Af, bf = f.layers[0]
    merged = (Af @ Ag, Af @ bg + bf)
    return ReluNetwork(list(g.layers[:-1]) + [merged] + list(f.layers[1:]), g.input_dim)


def select(d: int, idx: Sequence[int]) -> ReluNetwork:
    """Affine network returning the coordinates ``idx`` of a d-vector."""
    A = np.zeros((len(idx), d))
    A[np.arange(len(idx)), list(idx)] = 1.0
    return affine_network(A)


# ----------------------------------------------------- elementary networks

def hat_network() -> ReluNetwork:
    """Trapezoid psi(x) = relu(x+2) - relu(x+1) - relu(x-1) + relu(x-2)."""
    return ReluNetwork([
        (np.ones((4, 1)), np.array([2.0, 1.0, -1.0, -2.0])),
        (np.array([[1.0, -1.0, -1.0, 1.0]]), np.zeros(1)),
    ])


def hat(x):
    """The trapezoid evaluated directly: 1 on |x|<1, 2-|x| on 1<=|x|<=2, else 0."""
    r = np.abs(np.asarray(x, dtype=float))
    return np.clip(2.0 - r, 0.0, 1.0)


def square_levels(delta: float) -> int:
    """Number of sawtooth levels m with 2^(-2m-2) <= delta."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return max(1, math.ceil((math.log2(1.0 / delta) - 2.0) / 2.0 - 1e-12))


def square_network(delta: float) -> ReluNetwork:
    """Piecewise-linear interpolant of x^2 on [0, 1] at 2^m + 1 dyadic nodes.

    f_m(x) = x - sum_{s<=m} g_s(x) / 4^s with g_s the s-fold sawtooth
    g(y) = 2 relu(y) - 4 relu(y - 1/2) + 2 relu(y - 1). The error is
    2^(-2m-2) and one-sided: x^2 <= f_m(x).
    """
    m = square_levels(delta)
    saw = np.array([2.0, -4.0, 2.0, 0.0])  # g from the three sawtooth neurons
    shift = np.array([0.0, -0.5, -1.0, 0.0])
    layers = [(np.ones((4, 1)), shift.copy())]
    # neurons per level: relu(g), relu(g - 1/2), relu(g - 1), acc >= 0
    for s in range(1, m):
        A = np.zeros((4, 4))
        A[:3, :] = saw
        A[3, :] = -saw / 4.0**s
        A[3, 3] = 1.0
        layers.append((A, shift.copy()))
    out = (-saw / 4.0**m).copy()
    out[3] = 1.0
    layers.append((out[None, :], np.zeros(1)))
    return ReluNetwork(layers)


def multiply_network(delta: float, M: float = 1.0) -> ReluNetwork:
    """Two-input network with |out - x y| <= delta on [0, M]^2 (polarization)."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if M < 1:
        raise ValueError("M must be >= 1")
    # xy = 2M^2 u^2 - M^2 a^2 / 2 - M^2 b^2 / 2 with u = (x+y)/2M, a = x/M, b = y/M;
    # each square errs in [0, d1], so the total error lies in [-M^2 d1, 2 M^2 d1]
    d1 = delta / (2.0 * M * M)
    S = square_network(d1)
    maps = [affine_network([[0.5 / M, 0.5 / M]]), affine_network([[1.0 / M, 0.0]]), affine_network([[0.0, 1.0 / M]])]
    return add([compose(S, a) for a in maps], [2.0 * M * M, -0.5 * M * M, -0.5 * M * M])


# ------------------------------------------------------ partition of unity

@dataclass(frozen=True)
class PartitionScheme:
    N: int
    d: int

    def __post_init__(self):
        if self.N < 1 or self.d < 1:
            raise ValueError("need N >= 1 and d >= 1")

    def indices(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.N + 1), repeat=self.d))

    def check(self, m) -> tuple[int, ...]:
        m = tuple(int(v) for v in np.atleast_1d(m))
        if len(m) != self.d or any(v < 0 or v > self.N for v in m):
            raise ValueError(f"index {m} outside {{0..{self.N}}}^{self.d}")
        return m

    def phi(self, m, X) -> np.ndarray:
        """phi_m(x) = prod_l psi(3N x_l - 3 m_l), evaluated directly."""
        m = self.check(m)
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.d:
            X = X.reshape(-1, self.d)
        out = np.ones(X.shape[0])
        for l in range(self.d):
            out = out * hat(3.0 * self.N * X[:, l] - 3.0 * m[l])
        return out

    def in_support(self, m, X) -> np.ndarray:
        m = self.check(m)
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.all(np.abs(3.0 * self.N * X - 3.0 * np.asarray(m)) < 2.0, axis=1)


def _factor_layers(N: int, m: Sequence[int], d: int):
    """Layers producing, per coordinate, psi_l (as s - relu(s - 1)) and the gate s_l.

    z = 3N x_l - 3 m_l, r = relu(z) + relu(-z), s = relu(2 - r). Then
    psi = min(1, s) = s - relu(s - 1), and s == 0 exactly off the support.
    Output (affine): [psi_1..psi_d, s_1..s_d].
    """
    A1 = np.zeros((2 * d, d))
    b1 = np.zeros(2 * d)
    for l in range(d):
        A1[2 * l, l], b1[2 * l] = 3.0 * N, -3.0 * m[l]
        A1[2 * l + 1, l], b1[2 * l + 1] = -3.0 * N, 3.0 * m[l]
    A2 = np.zeros((d, 2 * d))
    for l in range(d):
        A2[l, 2 * l] = A2[l, 2 * l + 1] = -1.0
    b2 = np.full(d, 2.0)
    A3 = np.zeros((2 * d, d))
    b3 = np.zeros(2 * d)
    for l in range(d):
        A3[2 * l, l] = 1.0
        A3[2 * l + 1, l], b3[2 * l + 1] = 1.0, -1.0
    A4 = np.zeros((2 * d, 2 * d))
    for l in range(d):
        A4[l, 2 * l], A4[l, 2 * l + 1] = 1.0, -1.0
        A4[d + l, 2 * l] = 1.0  # relu(s) = s
    return [(A1, b1), (A2, b2), (A3, b3), (A4, np.zeros(2 * d))]


def _clamp_unit() -> ReluNetwork:
    # min(max(p, 0), 1) = relu(p) - relu(p - 1)
    return ReluNetwork([(np.array([[1.0], [1.0]]), np.array([0.0, -1.0])), (np.array([[1.0, -1.0]]), np.zeros(1))])


def _gate(d: int) -> ReluNetwork:
    """Inputs (p, s_1..s_d), all >= 0. Output relu(min(p, s_1, ..., s_d)).

    min(a, b) = a - relu(a - b); with unit weights this is exactly 0 when b == 0.
    """
    width = d + 1
    layers = []
    # layer 1: [relu(p), relu(p - s_1), relu(s_2..s_d)]
    A = np.zeros((width, width))
    A[0, 0] = 1.0
    A[1, 0], A[1, 1] = 1.0, -1.0
    for j in range(2, width):
        A[j, j] = 1.0
    layers.append((A, np.zeros(width)))
    # the running min sits in neurons (0, 1) as n0 - n1; remaining gates follow
    for j in range(2, width):
        rem = width - j - 1
        A = np.zeros((2 + rem, 2 + (width - j)))
        A[0, 0], A[0, 1] = 1.0, -1.0
        A[1, 0], A[1, 1], A[1, 2] = 1.0, -1.0, -1.0
        for r in range(rem):
            A[2 + r, 3 + r] = 1.0
        layers.append((A, np.zeros(2 + rem)))
    A = np.array([[1.0, -1.0]])
    layers.append((A, np.zeros(1)))  # relu(min)
    layers.append((np.ones((1, 1)), np.zeros(1)))
    return ReluNetwork(layers)


def phi_template(scheme: PartitionScheme, delta: float) -> ReluNetwork:
    """phi_network for m = 0; other indices differ only in the first-layer bias."""
    return phi_network((0,) * scheme.d, scheme, delta)


def phi_network(m, scheme: PartitionScheme, delta: float) -> ReluNetwork:
    """Network approximating phi_m within (d-1) * delta, exactly 0 off its support."""
    m = scheme.check(m)
    d, N = scheme.d, scheme.N
    F = ReluNetwork(_factor_layers(N, m, d))
    if d == 1:
        return compose(affine_network([[1.0, 0.0]]), F)
    mult = multiply_network(delta, 1.0)
    clamp = _clamp_unit()
    # state vector: [p, psi_{k+1}..psi_d, s_1..s_d]
    net = F
    for k in range(1, d):
        width = (d - k + 1) + d
        prod = compose(clamp, compose(mult, select(width, [0, 1])))
        rest = [select(width, [j]) for j in range(2, width)]
        net = compose(stack([prod] + rest), net)
    return compose(_gate(d), net)


def phi_error_constant(d: int) -> int:
    """c in |Psi - phi_m| <= c * delta."""
    return max(d - 1, 0)


# ---------------------------------------------------------- coefficients

def _clamped(f: Callable, d: int) -> Callable:
    def ft(Y):
        return np.asarray(f(np.clip(Y, LO, HI)), dtype=float).reshape(-1)
    return ft


def bump_nodes(N: int, d: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Offsets and normalized weights of the bump quadrature around a grid node."""
    r = 3.0 / (4.0 * N)
    t = (np.arange(2 * q) + 0.5) / q - 1.0  # midpoints of 2q cells on [-1, 1]
    w1 = (1.0 - t**2) ** 2
    offs = np.stack([g.ravel() for g in np.meshgrid(*([t * r] * d), indexing="ij")], axis=1)
    w = np.ones(offs.shape[0])
    for g in np.meshgrid(*([w1] * d), indexing="ij"):
        w = w * g.ravel()
    return offs, w / w.sum()


def _coeffs_q(ft, scheme: PartitionScheme, q: int) -> np.ndarray:
    offs, w = bump_nodes(scheme.N, scheme.d, q)
    centers = np.asarray(scheme.indices(), dtype=float) / scheme.N
    out = np.empty(centers.shape[0])
    step = max(1, 2 * 10**6 // offs.shape[0])
    for s in range(0, centers.shape[0], step):
        C = centers[s:s + step]
        Y = (C[:, None, :] + offs[None, :, :]).reshape(-1, scheme.d)
        out[s:s + step] = ft(Y).reshape(C.shape[0], -1) @ w
    return out


def coefficients(f: Callable, scheme: PartitionScheme, L: float = 1.0, q0: int = 2,
                 q_max: int | None = None) -> dict[tuple[int, ...], float]:
    """Bump-weighted local averages of f(clip(x)) around each grid node m/N.

    The tensor midpoint rule is refined (q -> 2q) until successive values move
    by at most 1e-4 * L / N.
    """
    ft = _clamped(f, scheme.d)
    if q_max is None:
        q_max = 64 if scheme.d == 1 else 16
    tol = 1e-4 * L / scheme.N
    q = q0
    c = _coeffs_q(ft, scheme, q)
    while q < q_max:
        c2 = _coeffs_q(ft, scheme, 2 * q)
        q *= 2
        done = np.max(np.abs(c2 - c)) <= tol
        c = c2
        if done:
            break
    return dict(zip(scheme.indices(), c.tolist()))


# -------------------------------------------------------------- assembly

@dataclass
class ApproxBudget:
    eps: float
    alpha: float
    delta_mult: float
    N: int
    N_formula: int = 0
    doublings: int = 0
    sup_error: float = math.nan
    d: int = 1


def formula_N(eps: float, alpha: float) -> int:
    """Grid resolution ceil(eps^(-1/(1-alpha))) with the constant 2CB set to 1."""
    x = eps ** (-1.0 / (1.0 - alpha))
    return max(1, math.ceil(x * (1 - 1e-12)))


def combine_phis(scheme: PartitionScheme, template: ReluNetwork, coeffs: Sequence[float]) -> ReluNetwork:
    """sum_m c_m Psi_m, all Psi_m sharing ``template``'s weights (shifted first-layer bias)."""
    idx = np.asarray(scheme.indices(), dtype=float)
    M = idx.shape[0]
    c = np.asarray(coeffs, dtype=float)
    layers = []
    A1, b1 = template.layers[0]
    # first-layer bias of phi_m: rows (2l, 2l+1) carry -3 m_l and +3 m_l
    shift = np.zeros((M, A1.shape[0]))
    for l in range(scheme.d):
        shift[:, 2 * l] = -3.0 * idx[:, l]
        shift[:, 2 * l + 1] = 3.0 * idx[:, l]
    layers.append((sp.kron(np.ones((M, 1)), A1, format="csr"), (b1[None, :] + shift).ravel()))
    for A, b in template.layers[1:-1]:
        layers.append((sp.kron(sp.identity(M, format="csr"), A, format="csr"), np.tile(b, M)))
    A, b = template.layers[-1]
    layers.append((sp.kron(c[None, :], A, format="csr"), np.array([float(c @ np.full(M, b[0]))])))
    return ReluNetwork(layers, scheme.d)


def assemble(f: Callable, L: float, B: float, alpha: float, eps: float, d: int = 1,
             max_doublings: int = 4, check_step: float | None = None):
    """Build a ReLU network within eps of f (certified on a grid).

    Starts from the formula resolution N and doubles N (halving the
    multiplication accuracy) until the measured grid sup error is <= eps.
    Returns ``(net, budget)``.
    """
    from .certify import sup_error

    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    N0 = formula_N(eps, alpha)
    N = N0
    delta = eps / (3**d * (B + 1.0) * (d - 1)) if d > 1 else 0.5
    delta = min(delta, 0.5)
    if check_step is None:
        check_step = 1e-4 if d == 1 else 0.01
    for k in range(max_doublings + 1):
        scheme = PartitionScheme(N, d)
        coeffs = coefficients(f, scheme, L=max(L, 1e-12))
        net = combine_phis(scheme, phi_template(scheme, delta), [coeffs[m] for m in scheme.indices()])
        cert = sup_error(lambda X: np.asarray(f(X), dtype=float).reshape(-1), net, d, check_step)
        if cert.value <= eps:
            return net, ApproxBudget(eps, alpha, delta, N, N0, k, cert.value, d)
        N *= 2
        delta /= 2
    raise RuntimeError(f"grid sup error {cert.value:.4g} still above {eps} after {max_doublings} doublings")


def budget_shape(eps: float, alpha: float, d: int) -> float:
    """eps^(-d/(1-alpha)) * log2(eps^(-1/(1-alpha)))^2."""
    x = eps ** (-1.0 / (1.0 - alpha))
    return x**d * math.log2(x) ** 2


def load_network(path) -> ReluNetwork:
    return ReluNetwork.load(path)
