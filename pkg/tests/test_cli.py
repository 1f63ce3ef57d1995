from __future__ import annotations

import json

import pytest

from e7quadrics.cli import main
from e7quadrics.rep56 import ExactMatrix, matrix_to_json, torus_weight
from e7quadrics.rings import GF, QQ


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dump_weights(capsys):
    code, out, _ = run(capsys, "dump", "weights")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 56
    assert doc["records"][0] == {"ordinal": 1, "label": 1, "coeffs": [2, 3, 4, 6, 5, 4, 3, 1]}
    assert doc["build"].startswith("e7quadrics-")


def test_dump_quadrics_and_forms(capsys):
    assert json.loads(run(capsys, "dump", "quadrics")[1])["count"] == 133
    assert json.loads(run(capsys, "dump", "form-h")[1])["count"] == 56
    f = json.loads(run(capsys, "dump", "form-f")[1])
    assert f["count"] == 19768 and set(f["records"][0]) == {"quad", "c"}
    c = json.loads(run(capsys, "dump", "constants")[1])
    assert all(len(r) == 3 and r[2] in (1, -1) for r in c["records"])


def test_dump_is_deterministic(capsys):
    a = run(capsys, "dump", "constants")[1]
    b = run(capsys, "dump", "constants")[1]
    assert a == b


def test_text_format(capsys):
    code, out, _ = run(capsys, "dump", "roots", "--format", "text")
    assert code == 0 and out.startswith("roots: 240 records")


@pytest.mark.parametrize(
    "argv",
    [
        ["dump", "nothing"],
        ["verify", "--suite", "nope"],
        ["verify", "--suite", "scaling", "--prime", "4"],
        ["verify", "--suite", "scaling", "--seed", "-1"],
        ["verify", "--suite", "scaling", "--length", "0"],
        ["membership"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def _write(tmp_path, name, m):
    p = tmp_path / name
    p.write_text(json.dumps(matrix_to_json(m)))
    return str(p)


@pytest.mark.parametrize("method", ["ideal", "forms"])
def test_membership_identity(capsys, tmp_path, method):
    path = _write(tmp_path, "id.json", ExactMatrix.identity(GF(5)))
    code, out, _ = run(capsys, "membership", "--matrix", path, "--method", method)
    doc = json.loads(out)
    assert code == 0 and doc["member"] and doc["ring"] == "fp" and doc["p"] == 5


def test_membership_non_member_prints_witness(capsys, tmp_path):
    path = _write(tmp_path, "d.json", ExactMatrix.diagonal(QQ, [2] + [1] * 55))
    code, out, _ = run(capsys, "membership", "--matrix", path)
    doc = json.loads(out)
    assert code == 1 and not doc["member"]
    assert doc["witness"]["generator"].startswith("f[") and doc["witness"]["remainder"]["monomials"]


def test_membership_torus_multipliers(capsys, tmp_path):
    path = _write(tmp_path, "t.json", torus_weight(3, QQ))
    code, out, _ = run(capsys, "membership", "--matrix", path, "--method", "forms")
    doc = json.loads(out)
    assert code == 0 and doc["member"]
    # measured multipliers for the diagonal with exponents c7 - 2
    assert (doc["eps_h"], doc["eps_f"]) == ("1/3", "1/9")


@pytest.mark.parametrize("content", ["{", '{"ring": "rat", "rows": 1, "cols": 1, "entries": [[1]]}', "[]"])
def test_membership_bad_files_exit_2(capsys, tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    code, _, err = run(capsys, "membership", "--matrix", str(p))
    assert code == 2 and err


def test_membership_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "membership", "--matrix", str(tmp_path / "absent.json"))
    assert code == 2


def test_verify_report_embeds_config(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "orbit-vanish", "--prime", "5", "--seed", "17", "--length", "4")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass"
    assert doc["seed"] == 17 and doc["primes"] == [5] and doc["rings"] == ["fp5"] and doc["build"]
    assert run(capsys, "verify", "--suite", "orbit-vanish", "--prime", "5", "--seed", "17", "--length", "4")[1] == out
