from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from e7quadrics.quadrics import (
    MONOMIALS,
    NMONO,
    QuadraticForm,
    build_basis,
    g_form,
    pullback,
    pullback_many,
    square_equation,
    verify_invariance,
)
from e7quadrics.rep56 import evaluate_word, random_word, root_unipotent
from e7quadrics.rings import GF, QQ, ZZ, ArrayArith
from e7quadrics.root_system import add, build_e8, neg

rs = build_e8()
basis = build_basis()
e7 = st.sampled_from(rs.e7_roots)


def test_generator_count_and_names():
    names = basis.names()
    assert len(names) == 133
    assert sum(n.startswith("f[") for n in names) == 126
    assert names[-7:] == [f"g[{k}]" for k in range(1, 8)]
    assert NMONO == 1596


@pytest.mark.parametrize("ring", [QQ, GF(2), GF(3), GF(5), GF(7), GF(11), GF(13)])
def test_generators_independent(ring):
    assert basis.rank(ring) == 133


@given(e7)
def test_square_equation_does_not_depend_on_pair(alpha):
    sq = rs.maximal_square(alpha)
    ref = square_equation(*sq.pairs[0])
    for a, b in sq.pairs:
        for q in (square_equation(a, b), square_equation(b, a)):
            assert q == ref or q == ref.scale(-1)


def test_square_equation_rejects_non_orthogonal():
    with pytest.raises(ValueError):
        square_equation(1, 2)


@given(e7, e7)
def test_g_is_additive(a, b):
    c = add(a, b)
    if c in rs.e7_set:
        assert g_form(c) == g_form(a) + g_form(b)
    assert g_form(neg(a)) == g_form(a).scale(-1)


def test_every_g_in_span():
    for a in rs.e7_roots:
        assert basis.contains(g_form(a), QQ)
        assert basis.contains(g_form(a), GF(2))


def test_generators_vanish_on_weight_vectors():
    e = np.eye(56, dtype=np.int64)
    for q in basis.forms:
        assert all(q.evaluate(e[i]) == 0 for i in range(0, 56, 5))


@given(st.integers(0, 2**32))
def test_pullback_agrees_with_polar_matrix(seed):
    p = 7
    m = evaluate_word(random_word(seed, 5, GF(p), torus=True), GF(p)).data.astype(np.int64)
    many = pullback_many(basis.forms[:10], m, ArrayArith(GF(p)))
    half = pow(2, -1, p)
    for q, row in zip(basis.forms[:10], many):
        A = q.polar_matrix().astype(np.int64)  # symmetric, x^T A x = 2 q(x)
        B = (m.T @ A @ m) % p
        single = pullback(q, m, GF(p)).row()
        assert {k: int(v) for k, v in enumerate(row) if v} == {k: int(v) for k, v in single.items() if v}
        for k, (i, j) in enumerate(MONOMIALS):
            expect = B[i, j] * half % p if i == j else B[i, j]
            assert row[k] == expect


def test_reduce_recovers_coordinates():
    q = basis.forms[3].scale(2) + basis.forms[130].scale(-5)
    red = basis.reduce(q, QQ)
    assert red.remainder.is_zero()
    assert red.coordinates[3] == 2 and red.coordinates[130] == -5
    assert sum(1 for c in red.coordinates if c) == 2


def test_reduce_leaves_remainder_for_outsider():
    red = basis.reduce(QuadraticForm({(0, 0): 1}), QQ)
    assert not red.remainder.is_zero()


def test_json_format():
    doc = basis.forms[0].to_json()
    assert doc["name"].startswith("f[")
    assert all(set(m) == {"i", "j", "c"} and 1 <= m["i"] <= m["j"] <= 56 for m in doc["monomials"])
    assert QuadraticForm({(0, 1): QQ("1/2")}).to_json()["monomials"][0]["c"] == "1/2"


@pytest.mark.parametrize("gamma_index", [0, 40, 125])
def test_invariance_for_sample_roots(gamma_index):
    g = rs.e7_roots[gamma_index]
    rep = verify_invariance(g, 2, ZZ, basis)
    assert rep.span_ok
    failing_cases = {f["case"] for f in rep.identity_failures}
    # the literal "unchanged" claim for gamma = -alpha is the only one that can fail
    assert failing_cases <= {"g:-1"}
    assert rep.identities_checked.get("g:-1:via-negation", 0) > 0


@given(e7, st.integers(-3, 3))
def test_root_element_keeps_generators_in_span(g, xi):
    m = root_unipotent(g, xi, QQ)
    q = basis.forms[(abs(hash(g)) + xi) % 133]
    assert basis.contains(pullback(q, m), QQ)
