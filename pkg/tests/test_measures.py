import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gandist.measures import (HI, LO, NormSpec, dirac, empirical, example_pair, latent_measure,
                              load_measure, new_discrete, pushforward, random_measure, rng, sample,
                              save_measure, uniform_grid)


def test_weights_normalized_and_duplicates_merged():
    P = new_discrete([[0.2], [0.5], [0.2]], [1.0, 2.0, 1.0])
    assert len(P) == 2
    assert np.isclose(P.weights.sum(), 1.0)
    assert np.allclose(P.weights[P.atoms[:, 0] == 0.2], 0.5)


def test_zero_weights_dropped():
    P = new_discrete([[0.1], [0.9]], [1.0, 0.0])
    assert len(P) == 1 and P.atoms[0, 0] == 0.1


@pytest.mark.parametrize("atoms, weights", [
    ([], []),
    ([[0.1], [0.2]], [1.0, -0.5]),
    ([[0.1], [0.2, 0.3]], [1.0, 1.0]),
    ([[0.1]], [0.0]),
])
def test_invalid_measures_rejected(atoms, weights):
    with pytest.raises(ValueError):
        new_discrete(atoms, weights)


def test_outside_cube_needs_clamp():
    with pytest.raises(ValueError):
        new_discrete([[0.0]], [1.0])
    P = new_discrete([[0.0], [1.0]], [1, 1], clamp=True)
    assert P.atoms.min() == LO and P.atoms.max() == HI


def test_empirical_counts():
    P = empirical(np.array([0.1, 0.1, 0.3, 0.7]))
    assert np.allclose(sorted(P.weights), [0.25, 0.25, 0.5])


def test_sampling_reproducible():
    P = new_discrete([[0.1], [0.5], [0.9]], [0.2, 0.3, 0.5])
    a = sample(P, 7, 1000)
    b = sample(P, 7, 1000)
    assert np.array_equal(a, b)
    freq = np.mean(a[:, 0] == 0.9)
    assert abs(freq - 0.5) < 0.06


def test_pushforward_merges_and_clamps():
    U = uniform_grid(1, 4)
    P = pushforward(lambda Z: np.where(Z < 0.5, 0.0, 0.7), U)
    assert len(P) == 2
    assert np.allclose(P.weights, [0.5, 0.5])
    assert P.atoms.min() == LO


def test_latent_modes():
    assert len(latent_measure(2, "grid", k=3)) == 9
    U = latent_measure(1, "iid", k=5, seed=3, n=50)
    assert U.dim == 1 and len(U) <= 50
    with pytest.raises(ValueError):
        latent_measure(1, "sobol")


def test_example_pair():
    P, Q = example_pair(0.1, 0.25)
    assert np.allclose(P.atoms[:, 0], [0.1, 0.35])
    assert np.allclose(Q.atoms[:, 0], [LO, 0.25])


def test_norms():
    x, y = np.array([[0.0, 0.0]]), np.array([[0.3, 0.4]])
    assert np.isclose(NormSpec(1).cdist(x, y)[0, 0], 0.7)
    assert np.isclose(NormSpec(2).cdist(x, y)[0, 0], 0.5)
    assert np.isclose(NormSpec.parse("inf").cdist(x, y)[0, 0], 0.4)
    assert NormSpec.parse("inf").inv_p == 0.0
    with pytest.raises(ValueError):
        NormSpec(3)


def test_json_roundtrip(tmp_path):
    P = random_measure(rng(1), 2)
    path = tmp_path / "m.json"
    save_measure(P, path)
    Q = load_measure(path)
    assert np.allclose(P.atoms, Q.atoms) and np.allclose(P.weights, Q.weights)


def test_json_weight_sum_checked(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"dim": 1, "atoms": [[0.2], [0.4]], "weights": [0.5, 0.6]}))
    with pytest.raises(ValueError):
        load_measure(path)
    assert np.isclose(load_measure(path, renormalize=True).weights.sum(), 1.0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(0.01, 0.99), st.floats(0.01, 5.0)), min_size=1, max_size=8),
       st.randoms(use_true_random=False))
def test_construction_is_order_invariant(pairs, rnd):
    atoms = [[a] for a, _ in pairs]
    weights = [w for _, w in pairs]
    P = new_discrete(atoms, weights)
    idx = list(range(len(pairs)))
    rnd.shuffle(idx)
    Q = new_discrete([atoms[i] for i in idx], [weights[i] for i in idx])
    assert np.array_equal(P.atoms, Q.atoms)
    assert np.allclose(P.weights, Q.weights, atol=1e-15)
    assert abs(P.weights.sum() - 1) < 1e-12
    assert np.all(P.weights > 0)


def test_dirac():
    D = dirac([0.3, 0.4])
    assert D.dim == 2 and len(D) == 1 and D.weights[0] == 1.0
