from __future__ import annotations

import json
import subprocess
import sys

import pytest

from heytica import amalgam
from heytica.cli import run, validate_payload

C3_POSET = '{"n": 2, "covers": [[0, 1]]}'


def _ok(argv):
    code, text = run(argv)
    return code, json.loads(text) if text else None


def test_of_poset_gives_three_chain():
    code, out = _ok(["algebra", "of-poset", "--json", C3_POSET])
    assert code == 0
    assert out["size"] == 3
    assert out["dual"] == {"n": 2, "covers": [[0, 1]]}
    validate_payload("algebra", out)


def test_dualize_round_trip():
    code, out = _ok(["algebra", "dualize", "--json", json.dumps({"dual": json.loads(C3_POSET)})])
    assert code == 0 and out["dual"]["n"] == 2


def test_validate_rejects_bad_tables():
    bad = {"size": 2, "meet": [[0, 0], [0, 1]], "join": [[0, 1], [1, 1]], "imp": [[1, 1], [1, 1]], "zero": 0, "one": 1}
    code, out = _ok(["algebra", "validate", "--json", json.dumps(bad)])
    assert code == 1
    assert out["valid"] is False


def test_aut_counts():
    code, out = _ok(["algebra", "aut", "--json", '{"dual": {"n": 2, "covers": []}}'])
    assert code == 0 and out["count"] == 2


def test_witness_hneg_is_red_but_joins_differ():
    code, out = _ok(["witness", "hneg"])
    assert code == 1
    assert out["joins_differ"] is True
    assert out["six_atoms"] is False


def test_witness_amenability_and_forgetful():
    assert run(["witness", "amenability"])[0] == 0
    assert run(["witness", "forgetful"])[0] == 0


def test_witness_roelcke():
    code, out = _ok(["witness", "roelcke", "-n", "2"])
    assert code == 0
    assert out["pairwise_non_isomorphic"] is True


def test_catalog_build_and_stats(tmp_path, monkeypatch):
    path = tmp_path / "cat.json"
    code, out = _ok(["catalog", "build", "-n", "5", "-o", str(path)])
    assert code == 0 and out["counts"] == [1, 2, 5, 16, 63]
    code, out = _ok(["catalog", "stats", "--catalog", str(path)])
    assert out["counts"] == [1, 2, 5, 16, 63]
    monkeypatch.setenv("HEYTICA_CATALOG", str(path))
    code, out = _ok(["catalog", "stats", "-n", "5"])
    assert out["counts"] == [1, 2, 5, 16, 63]


def test_order_natural_counts():
    code, out = _ok(["order", "natural", "--json", '{"dual": {"n": 3, "covers": []}}'])
    assert code == 0 and out["count"] == 6


def test_limit_grow_and_check(tmp_path):
    path = tmp_path / "chain.json"
    code, out = _ok(["limit", "grow", "--bound", "2", "--rounds", "1", "--out", str(path)])
    assert code == 0 and out["levels"][0] == 1
    code, out = _ok(["limit", "check", "extension", "--chain", str(path), "--bound", "2", "--rounds", "1"])
    assert code == 0 and out["unsatisfied"] == 0
    code, out = _ok(["limit", "check", "density", "--chain", str(path), "--samples", "5"])
    assert code == 0 and out["ok"]


def test_determinism():
    argv = ["verify", "--only", "duality,kpt", "--seed", "3"]
    assert run(argv) == run(argv)


@pytest.mark.parametrize(
    "argv",
    [
        ["algebra", "of-poset", "--json", "{not json"],
        ["algebra", "of-poset"],
        ["algebra", "gen", "--json", "{}"],
        ["verify", "--only", "nonsense"],
        ["frobnicate"],
        ["algebra", "of-poset", "--json", '{"n": 2, "covers": [[0, 1], [1, 0]]}'],
    ],
)
def test_bad_input_exits_two(argv):
    code, text = run(argv)
    assert code == 2 and text == ""


def test_fault_injection_flipped_quantifier(monkeypatch):
    def flipped(h, s, u, t):
        s, u, t = list(s), list(u), list(t)
        for a in s:
            for b in t:
                if h.leq(a, b) and not all(h.leq(a, c) and h.leq(c, b) for c in u):
                    return False
        return True

    assert run(["verify", "--only", "independence"])[0] == 0
    monkeypatch.setattr(amalgam, "check_independence", flipped)
    code, text = run(["verify", "--only", "independence"])
    assert code == 1
    assert "independence" in json.loads(text)["failed"]


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "heytica.cli", "algebra", "of-poset", "--json", C3_POSET],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["size"] == 3
