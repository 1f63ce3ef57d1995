"""Verification suites and table dumps behind the command line.

Every suite returns a plain JSON-ready dictionary listing individual
checks with a ``pass``/``fail`` status.  Reports contain no timings or
other run-dependent data, so equal configurations give identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from . import __version__
from .chevalley import build_structure_table
from .forms import build_f, build_h, orbit_class, similarity
from .quadrics import build_basis, verify_invariance
from .rep56 import DIM, ExactMatrix, Lcg, evaluate_word, random_word, torus_weight
from .rings import GF, QQ, ZZ, PrimeField, Ring, is_prime
from .root_system import build_e8
from .stabilizer import (
    cross_check,
    diagonal_relation,
    diagonal_vector,
    lie_dim_fh,
    lie_dim_GI,
    membership_forms,
    membership_GI,
    root_element_vector,
    unknown,
)

__all__ = ["Config", "SUITES", "DUMP_TARGETS", "dump", "run_suite", "build_id", "canonical_json"]

DUMP_TARGETS = ("roots", "weights", "constants", "quadrics", "form-f", "form-h")
INVARIANCE_XI = (1, -1, 2, 3)


@dataclass(frozen=True)
class Config:
    """Settings shared by all suites.  ``primes=None`` means the suite default."""

    primes: tuple[int, ...] | None = None
    seed: int = 0
    length: int = 20
    verbose: bool = False

    def __post_init__(self) -> None:
        if self.primes is not None:
            for p in self.primes:
                if not is_prime(p):
                    raise ValueError(f"{p} is not a prime")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.length < 1:
            raise ValueError("word length must be positive")

    def primes_or(self, default: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(self.primes) if self.primes is not None else default


def _plain(o: Any) -> Any:
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True, default=_plain) + "\n"


# ---------------------------------------------------------------------------
# dumps


def _records(target: str) -> list:
    rs = build_e8()
    if target == "roots":
        return [{"ordinal": k + 1, "coeffs": list(r)} for k, r in enumerate(rs.roots)]
    if target == "weights":
        return [{"ordinal": w.ordinal, "label": w.label, "coeffs": list(w.root)} for w in rs.weights]
    if target == "constants":
        idx = rs.root_index
        t = build_structure_table()
        return sorted([idx[a] + 1, idx[b] + 1, s] for (a, b), s in t.sign.items())
    if target == "quadrics":
        return [q.to_json() for q in build_basis().forms]
    if target == "form-f":
        return [{"quad": [i + 1 for i in k], "c": int(c)} for k, c in sorted(build_f().coeffs.items())]
    if target == "form-h":
        h = build_h().matrix()
        return [{"pair": [int(i) + 1, int(j) + 1], "c": int(h[i, j])} for i, j in zip(*np.nonzero(h))]
    raise ValueError(f"unknown dump target {target!r}")


@lru_cache(maxsize=1)
def build_id() -> str:
    """Version plus a digest of every dumped table."""
    digest = hashlib.sha256()
    for t in DUMP_TARGETS:
        digest.update(canonical_json(_records(t)).encode())
    return f"e7quadrics-{__version__}+{digest.hexdigest()[:16]}"


def dump(target: str) -> dict:
    recs = _records(target)
    return {"build": build_id(), "target": target, "count": len(recs), "records": recs}


# ---------------------------------------------------------------------------
# suites


def _check(name: str, ok: bool, **detail: Any) -> dict:
    return {"name": name, "status": "pass" if ok else "fail", "detail": detail}


def _ring_name(ring: Ring) -> str:
    return f"fp{ring.p}" if isinstance(ring, PrimeField) else ring.tag


def _seeds(seed: int, salt: int, n: int) -> list[int]:
    rng = Lcg(seed ^ (salt * 0x9E3779B97F4A7C15 & Lcg.MASK))
    return [rng.next_u32() << 32 | rng.next_u32() for _ in range(n)]


@lru_cache(maxsize=2)
def _invariance_reports() -> tuple:
    basis = build_basis()
    rs = build_e8()
    return tuple(verify_invariance(g, xi, ZZ, basis) for g in rs.e7_roots for xi in INVARIANCE_XI)


def suite_invariance(cfg: Config) -> tuple[list, list[str]]:
    reps = _invariance_reports()
    checks = []
    for xi in INVARIANCE_XI:
        fails = [f for r in reps if r.xi == xi for f in r.span_failures]
        n = sum(r.generators_checked for r in reps if r.xi == xi)
        checks.append(_check(f"span xi={xi}", not fails, pullbacks=n, failures=fails[:10], failure_count=len(fails)))
    return checks, ["int"]


def suite_identities(cfg: Config) -> tuple[list, list[str]]:
    reps = _invariance_reports()
    counts: dict[str, int] = {}
    fails: dict[str, list] = {}
    for r in reps:
        for k, v in r.identities_checked.items():
            counts[k] = counts.get(k, 0) + v
        for f in r.identity_failures:
            fails.setdefault(f["case"], []).append(f)
    checks = []
    for key in sorted(counts):
        bad = fails.get(key, [])
        checks.append(_check(f"identity {key}", not bad, checked=counts[key], failure_count=len(bad), failures=bad[:5]))
    return checks, ["int"]


EXPECTED_DIMS = {"G_I": 134, "G_fh": 133, "G_fh_extended": 134}


def suite_lie_dims(cfg: Config) -> tuple[list, list[str]]:
    rings: list[Ring] = [QQ] + [GF(p) for p in cfg.primes_or((2, 3, 5, 7))]
    rs = build_e8()
    checks = []
    for ring in rings:
        name = _ring_name(ring)
        reports = {
            "G_I": lie_dim_GI(ring),
            "G_fh": lie_dim_fh(ring, extended=False),
            "G_fh_extended": lie_dim_fh(ring, extended=True),
        }
        for key, r in reports.items():
            checks.append(_check(f"{key} over {name}", r.kernel_dim == EXPECTED_DIMS[key], expected=EXPECTED_DIMS[key], **r.to_json()))
        gi, fh, fhx = reports["G_I"], reports["G_fh"], reports["G_fh_extended"]
        roots_ok = all(gi.in_kernel(root_element_vector(g)) and fhx.in_kernel(root_element_vector(g)) for g in rs.e7_roots)
        checks.append(_check(f"root elements in kernels over {name}", roots_ok))
        diag_ok = all(gi.in_kernel(diagonal_vector(i)) and fhx.in_kernel(diagonal_vector(i, True)) for i in range(8))
        checks.append(_check(f"diagonal part in kernels over {name}", diag_ok))
        far = all(gi.vanishes_on_kernel({unknown(l, rs.bar_index(l)): 1}) for l in range(DIM))
        checks.append(_check(f"distance-3 entries forced to zero over {name}", far))
        checks.append(_check(f"diagonal relation on G_fh kernel over {name}", fh.vanishes_on_kernel(diagonal_relation())))
    return checks, [_ring_name(r) for r in rings]


def _word_matrix(seed: int, length: int, ring: Ring, torus: bool) -> ExactMatrix:
    return evaluate_word(random_word(seed, length, ring, torus=torus), ring)


def suite_scaling(cfg: Config) -> tuple[list, list[str]]:
    rings: list[Ring] = [QQ] + [GF(p) for p in cfg.primes_or((5,))]
    checks = []
    for ring in rings:
        name = _ring_name(ring)
        bad = []
        for k, s in enumerate(_seeds(cfg.seed, 1, 20)):
            sim = similarity(_word_matrix(s, cfg.length, ring, torus=False))
            if not (sim.similar and ring(sim.eps_h) == 1 and ring(sim.eps_f) == 1):
                bad.append({"word": k, "seed": s, "eps_h": str(sim.eps_h), "eps_f": str(sim.eps_f)})
        checks.append(_check(f"f and h invariant under 20 elementary words over {name}", not bad, failures=bad))
    for eta in (2, 3):
        m = torus_weight(eta, QQ)
        d = m.det()
        checks.append(_check(f"det torus({eta}) = eta^-28", d == Fraction(1, eta**28), det=str(d)))
        sim = similarity(m)
        checks.append(_check(f"torus({eta}) scales h by eta", sim.eps_h == eta, eps_h=str(sim.eps_h), expected=str(eta)))
        checks.append(
            _check(f"torus({eta}) scales f by eta^2", sim.eps_f == eta * eta, eps_f=str(sim.eps_f), expected=str(eta * eta))
        )
    return checks, [_ring_name(r) for r in rings]


def orbit_representatives() -> list[tuple[str, list[int]]]:
    """Sums of 1..4 pairwise orthogonal weight vectors, one per nonzero class."""
    rs = build_e8()
    chain = [0]
    while len(chain) < 4:
        chain.append(min(j for j in range(DIM) if all(rs.gram[i][j] == 0 for i in chain)))
    out = []
    for k, cls in enumerate(("singular", "brilliant", "luminous", "dark")):
        v = [0] * DIM
        for i in chain[: k + 1]:
            v[i] = 1
        out.append((cls, v))
    return out


def suite_orbit_vanish(cfg: Config) -> tuple[list, list[str]]:
    basis = build_basis()
    checks = []
    primes = cfg.primes_or((5,))
    for p in primes:
        ring = GF(p)
        rng = Lcg(cfg.seed ^ p)
        bad = []
        for k, s in enumerate(_seeds(cfg.seed, 2 + p, 100)):
            m = _word_matrix(s, cfg.length, ring, torus=True).data
            for _ in range(10):
                lam = rng.below(DIM)
                col = [int(x) for x in m[:, lam]]
                for q in basis.forms:
                    if q.evaluate(col, ring) != 0:
                        bad.append({"word": k, "weight": lam + 1, "generator": q.name})
                        break
        checks.append(_check(f"generators vanish on highest-weight orbit over fp{p}", not bad, samples=1000, failures=bad[:10]))
    for p in (p for p in primes if p > 3):
        checks.extend(_orbit_class_checks(GF(p), cfg))
    return checks, [f"fp{p}" for p in primes]


def _orbit_class_checks(ring: PrimeField, cfg: Config) -> list:
    reps = orbit_representatives()
    basis_ok = [l + 1 for l in range(DIM) if orbit_class([int(i == l) for i in range(DIM)], ring) != "singular"]
    out = [_check(f"basis vectors are singular over fp{ring.p}", not basis_ok, failures=basis_ok)]
    rep_ok = [(c, orbit_class(v, ring)) for c, v in reps if orbit_class(v, ring) != c]
    out.append(_check(f"representatives of all classes over fp{ring.p}", not rep_ok, failures=rep_ok))
    bad = []
    for k, s in enumerate(_seeds(cfg.seed, 100 + ring.p, 50)):
        m = _word_matrix(s, cfg.length, ring, torus=True).data
        for cls, v in reps:
            got = orbit_class([int(x) for x in (m @ np.array(v, dtype=np.int64)) % ring.p], ring)
            if got != cls:
                bad.append({"word": k, "class": cls, "got": got})
    out.append(_check(f"orbit classes invariant along 50 words over fp{ring.p}", not bad, failures=bad[:10]))
    return out


def _random_invertible(ring: PrimeField, seed: int) -> ExactMatrix:
    rng = Lcg(seed)
    while True:
        data = np.array([[rng.below(ring.p) for _ in range(DIM)] for _ in range(DIM)], dtype=np.int64)
        m = ExactMatrix(ring, data)
        if ring(m.det()) != 0:
            return m


def suite_cross_check(cfg: Config) -> tuple[list, list[str]]:
    checks = []
    rings: list[Ring] = [GF(p) for p in cfg.primes_or((7,))] + [QQ]
    for ring in rings:
        name = _ring_name(ring)
        words = [(f"word{k}", _word_matrix(s, cfg.length, ring, torus=True)) for k, s in enumerate(_seeds(cfg.seed, 3, 50))]
        rep = cross_check(words)
        acc = [e["label"] for e in rep.entries if not (e["ideal"] and e["forms"])]
        checks.append(_check(f"50 words accepted by both over {name}", rep.ok and not acc, **rep.to_json(), not_accepted=acc))
        diag = ExactMatrix.diagonal(ring, [2] + [1] * (DIM - 1))
        gi, fo = membership_GI(diag), membership_forms(diag)
        checks.append(
            _check(
                f"diag(2,1,...,1) rejected by both over {name}",
                not gi.member and not fo.member and gi.witness is not None and fo.witness is not None,
                ideal=gi.to_json(),
                forms=fo.to_json(),
            )
        )
        if isinstance(ring, PrimeField):
            mats = [(f"random{k}", _random_invertible(ring, s)) for k, s in enumerate(_seeds(cfg.seed, 4, 50))]
            rep = cross_check(mats)
            checks.append(_check(f"50 random invertible matrices over {name}: verdicts agree", rep.ok, **rep.to_json()))
    return checks, [_ring_name(r) for r in rings]


SUITES: dict[str, Callable[[Config], tuple[list, list[str]]]] = {
    "invariance": suite_invariance,
    "identities": suite_identities,
    "lie-dims": suite_lie_dims,
    "scaling": suite_scaling,
    "orbit-vanish": suite_orbit_vanish,
    "cross-check": suite_cross_check,
}


def run_suite(name: str, cfg: Config) -> dict:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    checks, rings = SUITES[name](cfg)
    failed = sum(c["status"] == "fail" for c in checks)
    return {
        "build": build_id(),
        "suite": name,
        "rings": rings,
        "primes": list(cfg.primes) if cfg.primes is not None else None,
        "seed": cfg.seed,
        "length": cfg.length,
        "checks": checks,
        "passed": len(checks) - failed,
        "failed": failed,
        "status": "pass" if failed == 0 else "fail",
    }
