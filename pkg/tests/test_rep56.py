from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from e7quadrics.chevalley import build_structure_table
from e7quadrics.rep56 import (
    ExactMatrix,
    Lcg,
    RootUnipotent,
    TorusWeight,
    WeylElem,
    evaluate_word,
    matrix_from_json,
    matrix_to_json,
    random_word,
    root_unipotent,
    torus_exponents,
    torus_weight,
    unipotent_entries,
    weyl_element,
)
from e7quadrics.rings import GF, QQ, ZZ
from e7quadrics.root_system import add, build_e8, neg, pair

rs = build_e8()
t = build_structure_table()
e7 = st.sampled_from(rs.e7_roots)


def _nilpotent(gamma):
    m = np.zeros((56, 56), dtype=np.int64)
    for i, j, v in unipotent_entries(gamma):
        m[i, j] = v
    return m


def test_unipotent_support_is_twelve_entries():
    for g in rs.e7_roots:
        assert len(unipotent_entries(g)) == 12


def test_nilpotents_satisfy_commutator_relations():
    mats = {g: _nilpotent(g) for g in rs.e7_roots}
    for a in rs.e7_roots:
        for b in rs.e7_roots[::3]:
            c = add(a, b)
            comm = mats[a] @ mats[b] - mats[b] @ mats[a]
            if c in rs.e7_set:
                assert np.array_equal(comm, t.N(a, b) * mats[c])
            elif any(c):
                assert not comm.any()
            else:
                assert np.array_equal(comm, np.diag([pair(w, a) for w in rs.weight_roots]))


@given(e7, st.integers(-5, 5), st.integers(-5, 5))
def test_one_parameter_subgroup(g, a, b):
    assert root_unipotent(g, a) @ root_unipotent(g, b) == root_unipotent(g, a + b)


@given(e7, st.integers(-3, 3))
def test_unipotent_is_exponential_of_nilpotent(g, xi):
    n = _nilpotent(g)
    assert not (n @ n).any()
    assert np.array_equal(root_unipotent(g, xi).data.astype(np.int64), np.eye(56, dtype=np.int64) + xi * n)


def test_torus_weight():
    assert sorted(torus_exponents()) == [-2] + [-1] * 27 + [0] * 27 + [1]
    m = torus_weight(2, QQ)
    assert m.is_diagonal()
    assert m.det() == Fraction(1, 2**28)
    assert torus_weight(3, GF(7)).det() == pow(3, -28, 7)
    with pytest.raises(ValueError):
        torus_weight(0, QQ)


@given(e7, st.sampled_from([1, -1]))
def test_weyl_element_is_signed_permutation_of_order_four(alpha, eps):
    w = weyl_element(alpha, eps)
    assert w.is_monomial()
    w2 = w @ w
    assert w2.is_diagonal()
    assert (w2 @ w2).is_identity()


def test_word_matches_explicit_product():
    word = random_word(11, 8, QQ, torus=True, weyl=True)
    prod = ExactMatrix.identity(QQ)
    for tok in word:
        if isinstance(tok, RootUnipotent):
            m = root_unipotent(tok.gamma, tok.xi, QQ)
        elif isinstance(tok, TorusWeight):
            m = torus_weight(tok.eta, QQ)
        else:
            assert isinstance(tok, WeylElem)
            m = weyl_element(tok.alpha, tok.eps, QQ)
        prod = prod @ m
    assert evaluate_word(word, QQ) == prod


def test_random_word_is_reproducible():
    assert random_word(5, 30, GF(5), torus=True) == random_word(5, 30, GF(5), torus=True)
    assert random_word(5, 30, GF(5)) != random_word(6, 30, GF(5))


def test_lcg_known_outputs():
    g = Lcg(0)
    # state_1 = C, state_2 = A*C + C (mod 2^64)
    a, c = Lcg.A, Lcg.C
    assert g.next_u32() == c >> 32
    assert g.next_u32() == ((a * c + c) % 2**64) >> 32
    assert all(0 <= Lcg(9).below(7) < 7 for _ in range(10))


@given(st.sampled_from([QQ, GF(5), ZZ]), st.integers(0, 2**32))
def test_json_roundtrip(ring, seed):
    m = evaluate_word(random_word(seed, 5, ring, torus=ring is not ZZ), ring)
    doc = json.loads(json.dumps(matrix_to_json(m)))
    assert matrix_from_json(doc) == m


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        {"ring": "fp", "rows": 1, "cols": 1, "entries": [[0]]},
        {"ring": "fp", "p": 5, "rows": 1, "cols": 1, "entries": [[7]]},
        {"ring": "rat", "rows": 2, "cols": 1, "entries": [["1/2"]]},
        {"ring": "rat", "rows": 1, "cols": 1, "entries": [["1/0"]]},
        {"ring": "int", "rows": 1, "cols": 2, "entries": [[1]]},
        {"ring": "complex", "rows": 0, "cols": 0, "entries": []},
        [1, 2],
    ],
)
def test_matrix_json_rejects(doc):
    with pytest.raises(ValueError):
        matrix_from_json(doc)


def test_words_are_invertible_over_f5():
    m = evaluate_word(random_word(3, 40, GF(5), torus=True, weyl=True), GF(5))
    assert m.det() != 0
    assert (m @ m.inverse()).is_identity()
