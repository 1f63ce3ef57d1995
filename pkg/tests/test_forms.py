from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from e7quadrics.forms import (
    build_f,
    build_h,
    coeff_c,
    eval_f,
    eval_h,
    g0_factorization,
    orbit_class,
    quartic_Q,
    similarity,
)
from e7quadrics.linalg import det
from e7quadrics.rep56 import ExactMatrix, evaluate_word, random_word, root_unipotent, torus_weight
from e7quadrics.rings import GF, QQ
from e7quadrics.root_system import build_e8

from helpers import dense_f_pullback_mod

rs = build_e8()
f = build_f()
h = build_h()
W = rs.weights
weights = st.sampled_from(W)


def test_h_is_unimodular_and_alternating():
    H = h.matrix()
    assert np.array_equal(H, -H.T)
    assert det(H.astype(object), QQ) == 1
    for i in range(56):
        row = [j for j in range(56) if H[i, j]]
        assert row == [rs.bar_index(i)]
        assert abs(H[i, row[0]]) == 1


def test_f_support_and_values():
    assert len(f) == 19768
    assert set(np.unique(f.values)) <= {-2, -1, 1, 2}
    two_delta = tuple(2 * x for x in rs.highest_root)
    for key in list(f.coeffs)[::97]:
        s = tuple(sum(W[i].root[k] for i in key) for k in range(8))
        assert s == two_delta


@given(weights, weights, weights, weights)
def test_coeff_c_matches_table(a, b, c, d):
    assert coeff_c(a, b, c, d) == f(a.index, b.index, c.index, d.index)


def test_coeff_c_on_support_sample():
    for key in list(f.coeffs)[::211]:
        assert coeff_c(*(W[i] for i in key)) == f.coeffs[key]


def test_f_slot_symmetries():
    F = f.dense()
    keep = [p for p in itertools.permutations(range(4)) if np.array_equal(F, F.transpose(p))]
    assert sorted(keep) == [(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]


def test_factorization_reproduces_f():
    g0 = g0_factorization()
    assert len(g0.left) == len(g0.right) == 134

    def dense(entries):
        m = np.zeros((56, 56), dtype=np.int64)
        for i, j, v in entries:
            m[i, j] += v
        return m

    F = np.zeros((56,) * 4, dtype=np.int64)
    for a, b in zip(g0.left, g0.right):
        F += np.einsum("ij,kl->ijkl", dense(a), dense(b))
    assert np.array_equal(F, f.dense())


def test_evaluation_basics():
    e = np.eye(56, dtype=np.int64)
    k = next(iter(f.coeffs))
    assert eval_f(*(e[i] for i in k)) == f.coeffs[k]
    assert eval_h(e[0], e[0]) == 0
    assert all(quartic_Q(e[i]) == 0 for i in range(56))
    assert quartic_Q(e[0] + e[55]) != 0


@settings(max_examples=5)
@given(st.integers(0, 2**32))
def test_similarity_matches_dense_oracle(seed):
    p = 5
    m = evaluate_word(random_word(seed, 6, GF(p), torus=True), GF(p))
    s = similarity(m)
    assert s.similar
    pulled = dense_f_pullback_mod(f.dense(), m.data, p)
    assert np.array_equal(pulled, (int(s.eps_f) * f.dense().astype(np.int64)) % p)
    H = h.matrix().astype(np.int64)
    mm = m.data.astype(np.int64)
    assert np.array_equal((mm.T @ H @ mm) % p, (int(s.eps_h) * H) % p)


def test_root_elements_preserve_both_forms():
    for g in rs.e7_roots[::25]:
        for xi in (1, -1, 2):
            s = similarity(root_unipotent(g, xi, QQ))
            assert (s.eps_h, s.eps_f) == (1, 1)


def test_torus_multipliers():
    # measured: the h-multiplier is eta^-1, consistent with det = eta^-28
    s = similarity(torus_weight(2, QQ))
    assert s.eps_f == s.eps_h**2
    assert s.eps_h**28 == torus_weight(2, QQ).det()


def test_non_similarity_is_reported():
    s = similarity(ExactMatrix.diagonal(QQ, [2] + [1] * 55))
    assert not s.similar and s.witness


def test_orbit_classes_of_basic_vectors():
    e = np.eye(56, dtype=np.int64)
    assert orbit_class(np.zeros(56, dtype=np.int64), GF(5)) == "zero"
    for i in range(56):
        assert orbit_class(e[i], QQ) == "singular"
    assert orbit_class(e[0] + e[55], GF(7)) == "dark"


@pytest.mark.parametrize("p", [2, 3])
def test_orbit_class_rejects_small_characteristic(p):
    with pytest.raises(ValueError):
        orbit_class(np.eye(56, dtype=np.int64)[0], GF(p))


@given(st.lists(st.integers(0, 4), min_size=56, max_size=56))
def test_random_vector_with_nonzero_quartic_is_dark(v):
    if quartic_Q(v, GF(5)) != 0:
        assert orbit_class(v, GF(5)) == "dark"
