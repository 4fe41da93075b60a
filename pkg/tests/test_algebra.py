import numpy as np
import pytest

from quiverdef.algebra import (
    NotFiniteDimensional,
    build_algebra,
    oracle_certified_dimension,
    tensor_algebras,
)
from quiverdef.corpus import corpus_get
from quiverdef.presentation import make_presentation


def test_trivial_algebra():
    alg = build_algebra(make_presentation("k", ["0"], [], []), 2)
    assert alg.dim == 1
    assert alg.basis_paths == [(0, ())]


@pytest.mark.parametrize(
    "family,params",
    [
        ("D3R", (1, 2, 2, 2)),
        ("D3R", (1, 1, 2, 2)),
        ("D3Q", (1, 2, 2)),
        ("D3L", (2, 2)),
        ("D3A2", (2, 2)),
        ("D3B2", (1, 2, 2)),
        ("D3D2", (1, 1, 2, 2)),
    ],
)
@pytest.mark.parametrize("p", [2, 3])
def test_dimension_matches_saturation_oracle(family, params, p):
    entry = corpus_get(family, *params)
    alg = entry.algebra(p)
    window = max(len(arrows) for _, arrows in alg.basis_paths) + 1
    oracle = oracle_certified_dimension(entry.presentation, p, window, budget=6000)
    assert oracle is not None, "oracle should be feasible on the small members"
    assert oracle == alg.dim


def test_d3r_idempotents_and_dim():
    alg = corpus_get("D3R", 1, 2, 2, 2).algebra(2)
    assert alg.dim == 15
    assert len(alg.idempotent_index) == 3


def test_associativity_exhaustive_small():
    alg = corpus_get("D3R", 1, 2, 2, 2).algebra(2)
    units = np.eye(alg.dim, dtype=np.int64)
    for i in range(alg.dim):
        for j in range(alg.dim):
            xy = alg.multiply(units[i], units[j])
            for k in range(0, alg.dim, 3):
                left = alg.multiply(xy, units[k])
                right = alg.multiply(units[i], alg.multiply(units[j], units[k]))
                assert np.array_equal(left, right)


def test_idempotent_relations():
    alg = corpus_get("D3Q", 1, 2, 2).algebra(2)
    units = np.eye(alg.dim, dtype=np.int64)
    one = np.zeros(alg.dim, dtype=np.int64)
    for v, idx in alg.idempotent_index.items():
        one[idx] = 1
    for i, ei in alg.idempotent_index.items():
        for j, ej in alg.idempotent_index.items():
            prod = alg.multiply(units[ei], units[ej])
            want = units[ei] if i == j else np.zeros(alg.dim, dtype=np.int64)
            assert np.array_equal(prod, want)
    x = np.arange(alg.dim) % 2
    assert np.array_equal(alg.multiply(one, x), x % 2)
    assert np.array_equal(alg.multiply(x, one), x % 2)


def test_radical_nilpotent_and_dim():
    alg = corpus_get("D3R", 1, 2, 2, 2).algebra(2)
    rad = alg.radical_indices()
    assert alg.dim == alg.n_vertices + len(rad)
    # the sum of all arrow actions is nilpotent (radical nilpotency)
    total = np.zeros((alg.dim, alg.dim), dtype=np.int64)
    for a in range(len(alg.arrows)):
        total = (total + alg.left_mult[a].a) % 2
    acc = total
    steps = 1
    while acc.any() and steps <= alg.dim:
        acc = (total @ acc) % 2
        steps += 1
    assert not acc.any()
    assert steps == 4  # Loewy length of this family member


def test_rebuild_with_larger_cap_is_stable():
    entry = corpus_get("D3B2", 2, 2, 2)
    a1 = build_algebra(entry.presentation, 2)
    a2 = build_algebra(entry.presentation, 2, max_len=40)
    assert a1.basis_paths == a2.basis_paths


def test_opposite_preserves_dimension():
    for family, params in (("D3R", (1, 2, 2, 2)), ("D3L", (2, 2)), ("D3A2", (2, 2))):
        alg = corpus_get(family, *params).algebra(2)
        opp = alg.opposite()
        assert opp.dim == alg.dim
        assert opp.opposite() is alg
        # block dimensions swap: e_i A e_j matches e_j A^op e_i
        def blocks(a):
            out = {}
            for j in range(a.dim):
                key = (int(a.basis_source[j]), int(a.basis_target[j]))
                out[key] = out.get(key, 0) + 1
            return out

        ba, bo = blocks(alg), blocks(opp)
        assert ba == {(t, s): n for (s, t), n in bo.items()}


def test_tensor_with_trivial_algebra():
    k = build_algebra(make_presentation("k", ["0"], [], []), 2)
    alg = corpus_get("D3R", 1, 2, 2, 2).algebra(2)
    t = tensor_algebras(k, alg)
    assert t.dim == alg.dim
    assert len(t.idempotent_index) == alg.n_vertices


def test_enveloping_dimension_and_associativity():
    alg = corpus_get("D3R", 1, 2, 2, 2).algebra(2)
    env = tensor_algebras(alg, alg.opposite())
    assert env.dim == alg.dim**2
    assert len(env.idempotent_index) == alg.n_vertices**2
    rng = np.random.default_rng(17)
    units = np.eye(env.dim, dtype=np.int64)
    for _ in range(100):
        i, j, k = rng.integers(0, env.dim, size=3)
        left = env.multiply(env.multiply(units[i], units[j]), units[k])
        right = env.multiply(units[i], env.multiply(units[j], units[k]))
        assert np.array_equal(left, right)


def test_infinite_dimensional_detected():
    pres = make_presentation("free-loop", ["0"], [("a", "0", "0")], [])
    with pytest.raises(NotFiniteDimensional):
        build_algebra(pres, 2, max_len=12)
