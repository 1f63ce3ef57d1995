"""Acceptance criteria 1-10, one test each.

All comparisons are exact (integers, rationals or residues); the only
tolerances are the wall-clock budgets pinned in ``BUDGET``.
"""

from __future__ import annotations

import json
from fractions import Fraction
import time

import numpy as np

from e7quadrics.chevalley import StructureTable
from e7quadrics.cli import main
from e7quadrics.forms import orbit_class, similarity
from e7quadrics.quadrics import QuadricBasis, build_basis, verify_invariance
from e7quadrics.rep56 import ExactMatrix, Lcg, evaluate_word, matrix_to_json, random_word, torus_weight
from e7quadrics.rings import GF, QQ, ZZ
from e7quadrics.root_system import RootSystem
from e7quadrics.stabilizer import lie_dim_fh, lie_dim_GI, membership_forms, membership_GI
from e7quadrics.suites import DUMP_TARGETS, Config, canonical_json, dump, orbit_representatives, run_suite

BUDGET = {1: 1.0, 2: 10.0, 3: 5.0, 4: 120.0, 5: 60.0, 6: 600.0, 7: 60.0, 8: 120.0, 9: 60.0, 10: 1.0}
XI = (1, -1, 2, 3)
SEED = 20240601


def _word(seed: int, length: int, ring, torus: bool) -> ExactMatrix:
    return evaluate_word(random_word(seed, length, ring, torus=torus), ring)


def _seeds(salt: int, n: int) -> list[int]:
    g = Lcg(SEED + salt)
    return [g.next_u32() for _ in range(n)]


def test_criterion_01_cardinalities():
    t0 = time.perf_counter()
    rs = RootSystem()
    squares = [rs.maximal_square(a) for a in rs.e7_roots]
    tetrads = rs.tetrads()
    elapsed = time.perf_counter() - t0
    assert len(rs.roots) == 240
    assert len(rs.e7_roots) == 126
    assert len(rs.weights) == 56
    assert len(squares) == 126 and all(len(s.members) == 12 for s in squares)
    assert len(tetrads) == 630
    assert 24 * len(tetrads) == 15120
    assert elapsed < BUDGET[1], elapsed


def test_criterion_02_structure_constants():
    t0 = time.perf_counter()
    table = StructureTable(RootSystem())
    violations = table.violations()
    elapsed = time.perf_counter() - t0
    assert violations == []
    assert len(table.sign) == 240 * 56
    assert elapsed < BUDGET[2], elapsed


def test_criterion_03_generator_independence():
    t0 = time.perf_counter()
    basis = QuadricBasis()
    ranks = {r: basis.rank(r) for r in (QQ, GF(2), GF(3), GF(5), GF(7), GF(11), GF(13))}
    elapsed = time.perf_counter() - t0
    assert len(basis) == 133
    assert set(ranks.values()) == {133}, ranks
    assert elapsed < BUDGET[3], elapsed


def test_criterion_04_invariance_and_identities():
    basis = build_basis()
    basis.echelon(QQ)
    rs = RootSystem()
    t0 = time.perf_counter()
    reports = [verify_invariance(g, xi, ZZ, basis) for g in rs.e7_roots for xi in XI]
    elapsed = time.perf_counter() - t0
    span_failures = [f for r in reports for f in r.span_failures]
    identity_failures: dict[str, int] = {}
    for r in reports:
        for f in r.identity_failures:
            identity_failures[f["case"]] = identity_failures.get(f["case"], 0) + 1
    checked = {}
    for r in reports:
        for k, v in r.identities_checked.items():
            checked[k] = checked.get(k, 0) + v
    assert len(reports) == 504
    assert span_failures == []
    # every (alpha, gamma) case of both families must be exercised
    for fam in ("square", "g"):
        for case in ("-1", "-1/2", "0", "1/2", "1"):
            assert checked.get(f"{fam}:{case}", 0) > 0, (fam, case)
    assert identity_failures == {}, f"closed forms disagree with pullbacks: {identity_failures}"
    assert elapsed < BUDGET[4], elapsed


def test_criterion_05_form_invariance_and_scaling():
    t0 = time.perf_counter()
    bad_words = []
    for ring in (QQ, GF(5)):
        for k, s in enumerate(_seeds(5, 20)):
            sim = similarity(_word(s, 20, ring, torus=False))
            if not (sim.similar and ring(sim.eps_h) == 1 and ring(sim.eps_f) == 1):
                bad_words.append((repr(ring), k, sim.eps_h, sim.eps_f))
    dets, multipliers = {}, {}
    for eta in (2, 3):
        m = torus_weight(eta, QQ)
        dets[eta] = m.det()
        sim = similarity(m)
        multipliers[eta] = (sim.eps_h, sim.eps_f)
    elapsed = time.perf_counter() - t0
    assert bad_words == []
    assert dets == {2: Fraction(1, 2**28), 3: Fraction(1, 3**28)}
    assert multipliers == {2: (2, 4), 3: (3, 9)}, f"measured (eps_h, eps_f): {multipliers}"
    assert elapsed < BUDGET[5], elapsed


def test_criterion_06_lie_dimensions():
    t0 = time.perf_counter()
    dims = {}
    for ring in (QQ, GF(2), GF(3), GF(5), GF(7)):
        dims[repr(ring)] = (
            lie_dim_GI(ring).kernel_dim,
            lie_dim_fh(ring, extended=False).kernel_dim,
            lie_dim_fh(ring, extended=True).kernel_dim,
        )
    elapsed = time.perf_counter() - t0
    assert set(dims.values()) == {(134, 133, 134)}, dims
    assert elapsed < BUDGET[6], elapsed


def test_criterion_07_highest_weight_orbit_vanishing():
    basis = build_basis()
    F = GF(5)
    pick = Lcg(SEED + 7)
    t0 = time.perf_counter()
    failures = []
    for k, s in enumerate(_seeds(7, 100)):
        m = _word(s, 20, F, torus=True).data
        for _ in range(10):
            lam = pick.below(56)
            v = [int(x) for x in m[:, lam]]
            failures += [(k, lam, q.name) for q in basis.forms if q.evaluate(v, F) != 0]
    elapsed = time.perf_counter() - t0
    assert failures == []
    assert elapsed < BUDGET[7], elapsed


def _random_invertible(F, seed: int) -> ExactMatrix:
    g = Lcg(seed)
    while True:
        m = ExactMatrix(F, np.array([[g.below(F.p) for _ in range(56)] for _ in range(56)], dtype=np.int64))
        if m.det() != 0:
            return m


def test_criterion_08_membership_cross_check():
    t0 = time.perf_counter()
    disagreements, not_accepted, not_rejected = [], [], []

    def both(label, m):
        gi, fo = membership_GI(m), membership_forms(m)
        if gi.member != fo.member:
            disagreements.append(label)
        return gi, fo

    for ring in (GF(7), QQ):
        for k, s in enumerate(_seeds(8, 50)):
            gi, fo = both((repr(ring), "word", k), _word(s, 20, ring, torus=True))
            if not (gi.member and fo.member):
                not_accepted.append((repr(ring), k))
    for ring in (QQ, GF(7)):
        gi, fo = both((repr(ring), "diag"), ExactMatrix.diagonal(ring, [2] + [1] * 55))
        if gi.member or fo.member or gi.witness is None or fo.witness is None:
            not_rejected.append((repr(ring), "diag"))
    for k, s in enumerate(_seeds(80, 50)):
        gi, fo = both(("fp7", "random", k), _random_invertible(GF(7), s))
        if gi.member or fo.member or gi.witness is None:
            not_rejected.append(("fp7", "random", k))
    elapsed = time.perf_counter() - t0
    assert disagreements == []
    assert not_accepted == []
    assert not_rejected == []
    assert elapsed < BUDGET[8], elapsed


def test_criterion_09_orbit_classes():
    reps = orbit_representatives()
    t0 = time.perf_counter()
    eye = np.eye(56, dtype=np.int64)
    wrong = []
    for p in (5, 7):
        F = GF(p)
        wrong += [(p, "basis", i) for i in range(56) if orbit_class(eye[i], F) != "singular"]
        wrong += [(p, "rep", c) for c, v in reps if orbit_class(v, F) != c]
        for k, s in enumerate(_seeds(9 + p, 50)):
            m = _word(s, 20, F, torus=True).data.astype(np.int64)
            for c, v in reps:
                got = orbit_class((m @ np.array(v)) % p, F)
                if got != c:
                    wrong.append((p, k, c, got))
    elapsed = time.perf_counter() - t0
    assert {c for c, _ in reps} == {"singular", "brilliant", "luminous", "dark"}
    assert wrong == []
    assert elapsed < BUDGET[9], elapsed


def test_criterion_10_determinism(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(matrix_to_json(ExactMatrix.diagonal(GF(7), [2] + [1] * 55))))

    def one_run() -> list[str]:
        out = [canonical_json(dump(t)) for t in DUMP_TARGETS]
        for method in ("ideal", "forms"):
            main(["membership", "--matrix", str(path), "--method", method])
            out.append(capsys.readouterr().out)
        return out

    one_run()  # populate lazily built tables
    t0 = time.perf_counter()
    first, second = one_run(), one_run()
    elapsed = time.perf_counter() - t0
    assert first == second
    cfg = Config(primes=(5,), seed=3, length=4)
    assert canonical_json(run_suite("orbit-vanish", cfg)) == canonical_json(run_suite("orbit-vanish", cfg))
    assert elapsed < BUDGET[10], elapsed
