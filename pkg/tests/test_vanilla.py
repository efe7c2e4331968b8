import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from gandist.measures import NormSpec, dirac, empirical, example_pair, new_discrete, random_measure, rng
from gandist.transport import pooled_support, w1_exact
from gandist.vanilla import (FunctionClassSpec, ParameterBox, affine_example, affine_grad_b,
                             affine_objective, erm_generator, ipm_distance, logistic_loss, mcshane_extend,
                             penalty_bounds, penalty_programs, penalty_weight_upper, sandwich_constants,
                             vanilla_distance)

from oracles import ipm_lp, psi, vanilla_cvx, vanilla_dp_1d


def test_logistic_loss_values():
    assert logistic_loss(0.0) == 0.0
    assert np.isclose(logistic_loss(50.0), math.log(2), atol=1e-15)
    assert np.isfinite(logistic_loss(-800.0))
    # psi(-f(x)) = -x for f(x) = log(2 e^x - 1): the map used by the penalty bounds
    x = np.linspace(-0.6, 0.6, 7)
    assert np.allclose(logistic_loss(-np.log(2 * np.exp(x) - 1)), -x)


def test_class_parse():
    c = FunctionClassSpec.parse("lip:5,3")
    assert (c.kind, c.L, c.B) == ("lipschitz", 5.0, 3.0)
    h = FunctionClassSpec.parse("hoelder:0.5,1.3")
    assert (h.kind, h.alpha, h.gamma, h.bound) == ("hoelder", 0.5, 1.3, 1.3)
    assert FunctionClassSpec.parse("lip:1,inf").B == math.inf
    with pytest.raises(ValueError):
        FunctionClassSpec.parse("rbf:1")


def test_identical_measures_give_zero():
    gen = rng(3)
    for d in (1, 2):
        P = random_measure(gen, d)
        v = vanilla_distance(P, P, FunctionClassSpec.lip(5, 3))
        assert abs(v.value) <= 1e-9


def test_matches_dp_oracle_1d():
    gen = rng(21)
    for _ in range(8):
        P, Q = random_measure(gen, 1), random_measure(gen, 1)
        pts, p, q = pooled_support(P, Q)
        for L, B in [(5, 3), (1.5, 0.7), (20, 3)]:
            v = vanilla_distance(P, Q, FunctionClassSpec.lip(L, B))
            ref = vanilla_dp_1d(pts[:, 0], p, q, L, B)
            assert ref - 1e-9 <= v.value + v.solver_gap
            assert v.value - ref <= 2e-3


def test_matches_conic_oracle_2d():
    pytest.importorskip("cvxpy")
    gen = rng(22)
    norm = NormSpec(2)
    for _ in range(5):
        P, Q = random_measure(gen, 2), random_measure(gen, 2)
        pts, p, q = pooled_support(P, Q)
        D = norm.cdist(pts, pts)
        v = vanilla_distance(P, Q, FunctionClassSpec.lip(5, 3), norm)
        assert abs(v.value - vanilla_cvx(p, q, 5 * D, 3.0)) <= 1e-6


def test_hoelder_class_matches_oracles():
    pytest.importorskip("cvxpy")
    gen = rng(23)
    norm = NormSpec(1)
    for _ in range(5):
        P, Q = random_measure(gen, 2, 3), random_measure(gen, 2, 3)
        pts, p, q = pooled_support(P, Q)
        D = norm.cdist(pts, pts)
        cls = FunctionClassSpec.hoelder(0.5, 1.3)
        v = vanilla_distance(P, Q, cls, norm)
        assert abs(v.value - vanilla_cvx(p, q, 1.3 * D**0.5, 1.3)) <= 1e-6
        w = ipm_distance(P, Q, cls, norm)
        assert abs(w.value - ipm_lp(pts, p, q, lambda a, b: 1.3 * D[a, b] ** 0.5, 1.3)) <= 1e-8
        assert w.witness.violation() <= 1e-9


def test_ipm_distance_is_w1():
    gen = rng(24)
    for d, p in [(1, "2"), (2, "2"), (2, "1"), (3, "inf")]:
        norm = NormSpec.parse(p)
        P, Q = random_measure(gen, d), random_measure(gen, d)
        w = ipm_distance(P, Q, FunctionClassSpec.lip(1.0), norm)
        assert abs(w.value - w1_exact(P, Q, norm)[0]) <= 1e-8


def test_witness_feasible_and_extension():
    gen = rng(25)
    P, Q = random_measure(gen, 2), random_measure(gen, 2)
    cls = FunctionClassSpec.lip(4, 1.0)
    v = vanilla_distance(P, Q, cls)
    assert v.witness.violation() <= 1e-9
    W = mcshane_extend(v.witness)
    assert np.allclose(W(v.witness.points), v.witness.values, atol=1e-12)
    X = gen.uniform(0, 1, (400, 2))
    Y = gen.uniform(0, 1, (400, 2))
    lip = np.abs(W(X) - W(Y)) / np.linalg.norm(X - Y, axis=1)
    assert lip.max() <= 4 + 1e-9 and np.abs(W(X)).max() <= 1.0 + 1e-12
    # the extension realizes the optimal value
    val = P.expect(lambda Z: psi(W(Z))) + Q.expect(lambda Z: psi(-W(Z)))
    assert abs(val - v.value) <= 1e-9


def test_penalty_programs_match_dp_oracle():
    gen = rng(26)
    L, B = 10.0, 3.0
    for _ in range(4):
        P, Q = random_measure(gen, 1), random_measure(gen, 1)
        pts, p, q = pooled_support(P, Q)
        lo, up = penalty_programs(P, Q, L, B)
        Bl = math.log((1 + math.exp(B)) / 2)
        ref_lo = vanilla_dp_1d(pts[:, 0], p, q, 1.0, Bl, h=1e-4, kappa=L * (L - 1) / 2,
                               floor=-math.log(2 - 2 / L), linear=True)
        ref_up = vanilla_dp_1d(pts[:, 0], p, q, L, B, h=1e-4, kappa=penalty_weight_upper(B),
                               floor=-math.log(2), linear=True)
        assert ref_lo - 1e-9 <= lo.value <= ref_lo + 1e-3
        assert ref_up - 1e-9 <= up.value <= ref_up + 1e-3


def test_penalty_weight_decreases_in_B():
    ws = [penalty_weight_upper(B) for B in (2.0, 3.0, 4.0)]
    assert ws[0] > ws[1] > ws[2]


def test_sandwich_constants_formula():
    c1, c2 = sandwich_constants(5.0, 1, NormSpec(2))
    assert np.isclose(c1, 0.5 * math.log(1.6))
    assert np.isclose(c2, 1 / 40)
    c1, c2 = sandwich_constants(5.0, 4, NormSpec(2))
    assert np.isclose(c1, 0.5 * math.log(1.6) / 2) and np.isclose(c2, 1 / 160)
    assert sandwich_constants(5.0, 4, NormSpec.parse("inf")) == sandwich_constants(5.0, 1)
    with pytest.raises(ValueError):
        sandwich_constants(2.0, 1)


# ------------------------------------------------------------ affine example

def test_affine_regime_switch():
    for g in (0.25, 0.3, 0.5):
        a, b, v = affine_example(g, 0.25, 20.0)
        assert a == 20.0
        assert math.log(2) * g <= v <= 20 * g
    a, b, v = affine_example(0.1, 0.25, 20.0)
    assert 0 < a < 20


def test_affine_optimum_by_search():
    # maximize over b for each a on a grid; the global max sits at (a*, b*)
    for g in (0.05, 0.1, 0.2, 0.3):
        a_star, b_star, v = affine_example(g, 0.25, 20.0)

        def best_b(a):
            r = minimize_scalar(lambda b: -affine_objective(a, b, g, 0.25), bounds=(-30, 30), method="bounded",
                                options={"xatol": 1e-10})
            return -r.fun, r.x

        vb, bb = best_b(a_star)
        assert abs(vb - v) <= 1e-9 and abs(bb - b_star) <= 1e-4
        grid = np.linspace(0, 20, 401)
        assert max(best_b(a)[0] for a in grid) <= v + 1e-9


def test_affine_stationarity_and_fd():
    for g in (0.05, 0.1, 0.2, 0.3, 0.5):
        a, b, _ = affine_example(g, 0.25, 20.0)
        h = 1e-6
        fd = (affine_objective(a, b + h, g, 0.25) - affine_objective(a, b - h, g, 0.25)) / (2 * h)
        assert abs(affine_grad_b(a, b, g, 0.25)) <= 1e-8
        assert abs(fd) <= 1e-8


def test_affine_matches_closed_form_expression():
    # value at b* equals -log(1+e^{-a(eps+gamma)/2}) - log(1+e^{a(eps-gamma)/2}) + log 4
    g, e = 0.1, 0.25
    a, b, v = affine_example(g, e, 20.0)
    ref = -math.log1p(math.exp(-a * (e + g) / 2)) - math.log1p(math.exp(a * (e - g) / 2)) + math.log(4)
    assert abs(v - ref) <= 1e-12


def test_affine_value_quadratic_for_small_gamma():
    # V / gamma^2 tends to 16 as gamma -> 0
    g = 1e-3
    _, _, v = affine_example(g, 0.25, 20.0)
    assert abs(v / g**2 - 16) < 0.2


# ---------------------------------------------------------------------- ERM

def test_erm_recovers_planted_member():
    from gandist.measures import latent_measure, pushforward, sample
    U = latent_measure(1, "grid", k=8)
    truth = pushforward(lambda z: 0.1 + 0.6 * z, U)
    Pn = empirical(sample(truth, 3, 5000))
    box = ParameterBox(lambda a, b: (lambda z: a + b * z), [(0.0, 0.2), (0.4, 0.8)], [3, 3])
    best, hist = erm_generator(Pn, box, U, FunctionClassSpec.lip(5, 2))
    assert np.allclose(best, (0.1, 0.6))
    assert len(hist) == 9
    assert min(v for _, v in hist) == dict(hist)[best]


def test_erm_with_explicit_family():
    U = dirac([0.5])
    fam = [lambda z: 0.2 + 0 * z, lambda z: 0.4 + 0 * z]
    best, hist = erm_generator(np.array([[0.41], [0.39]]), fam, U, FunctionClassSpec.lip(3, 1))
    assert best is fam[1]


# ----------------------------------------------------------------- properties

measure_1d = st.lists(st.tuples(st.floats(0.02, 0.98), st.floats(0.1, 1.0)), min_size=1, max_size=4).map(
    lambda xs: new_discrete([[a] for a, _ in xs], [w for _, w in xs]))


@settings(max_examples=40, deadline=None)
@given(measure_1d, measure_1d)
def test_symmetric_nonnegative_and_bounded(P, Q):
    cls = FunctionClassSpec.lip(5, 3)
    v = vanilla_distance(P, Q, cls).value
    assert abs(v - vanilla_distance(Q, P, cls).value) <= 1e-8
    assert v >= -1e-10
    assert v <= 5 * w1_exact(P, Q)[0] + 1e-8


@settings(max_examples=25, deadline=None)
@given(measure_1d, measure_1d)
def test_monotone_in_class(P, Q):
    vals = [vanilla_distance(P, Q, FunctionClassSpec.lip(L, B)).value for L, B in [(3, 1), (5, 1), (5, 3)]]
    assert vals[0] <= vals[1] + 1e-9 <= vals[2] + 2e-9


def test_rounding_twins_are_merged():
    # 0.15 + 0.7 * 0.25 and 0.2 + 0.5 * 0.25 differ only in the last bit
    P = new_discrete([[0.15 + 0.7 * 0.25], [0.6]], [0.5, 0.5])
    Q = new_discrete([[0.2 + 0.5 * 0.25], [0.1]], [0.5, 0.5])
    assert P.atoms[0, 0] != Q.atoms[0, 0]
    res = vanilla_distance(P, Q, FunctionClassSpec.lip(5, 2))
    pytest.importorskip("cvxpy")
    pts = np.array([0.1, 0.325, 0.6])
    want = vanilla_cvx([0.0, 0.5, 0.5], [0.5, 0.5, 0.0], 5.0 * np.abs(pts[:, None] - pts[None, :]), 2.0)
    assert res.solver_gap <= 1e-9 and abs(res.value - want) <= 1e-6
    assert len(res.witness.values) == 4 and res.witness.violation() <= 1e-9
