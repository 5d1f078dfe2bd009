"""Tests for the claim registry, sweeps and the command-line front end."""

import csv
import io as _io
import json

import pytest

from spacert import claims, cli

EXPECTED_FAILING = {"breuer-hall-window"}


def test_registry_size():
    assert len(claims.REGISTRY) >= 14
    ids = [c["id"] for c in claims.list_claims()]
    assert len(ids) == len(set(ids))
    assert {"wmk-threshold", "gauss-T-threshold", "gauss-T-eb"} <= set(ids)


@pytest.mark.parametrize("cid", sorted(set(claims.REGISTRY) - EXPECTED_FAILING))
def test_claim_passes(cid):
    rec = claims.run_claim(cid)
    assert rec.passed, rec.to_json()
    assert rec.runtime_ms is not None


def test_window_claim_is_recorded_as_failing():
    rec = claims.run_claim("breuer-hall-window")
    assert not rec.passed
    assert rec.measured["below"] == "npt" and rec.measured["above"] == "npt"
    assert rec.details["exact_npt_boundary"] == pytest.approx(3 / 8)


def test_claim_examples():
    rec = claims.run_claim("wmk-threshold")
    assert rec.measured < 1e-9
    rec = claims.run_claim("gauss-T-threshold")
    assert rec.expected == 2.0 and all(row["p_star"] == 2.0 for row in rec.measured)
    with pytest.raises(KeyError):
        claims.run_claim("no-such-id")


@pytest.mark.parametrize("cid", ["tailored-noise", "zero-set-spans", "finer-pair-facts", "pure-pt-threshold"])
def test_claim_determinism(cid):
    assert claims.run_claim(cid, seed=7).to_json() == claims.run_claim(cid, seed=7).to_json()


def test_timing_only_on_request():
    rec = claims.run_claim("gauss-T-eb")
    assert "runtime_ms" not in json.loads(rec.to_json())
    assert "runtime_ms" in json.loads(rec.to_json(timing=True))


def test_sweep_transposition(tmp_path):
    out = tmp_path / "ptr.csv"
    text = claims.sweep("pTr", {"m": [2, 3, 4], "mu": [0.1, 0.2, 0.3, 0.4, 0.5]}, out)
    rows = list(csv.reader(_io.StringIO(text)))
    assert rows[0] == ["m", "mu", "closed_form", "eigensolver", "abs_diff", "verdict"]
    assert len(rows) == 16
    assert all(float(r[4]) < 1e-9 for r in rows[1:])
    assert out.read_text() == text
    # lexicographic ordering in the grid
    assert [(int(r[0]), float(r[1])) for r in rows[1:]] == sorted((int(r[0]), float(r[1])) for r in rows[1:])


def test_sweep_breuer_hall_flip():
    header, rows = claims.sweep_rows("pBH", {"m": [4], "mu": [0.1, 0.2, 0.3, 0.4, 0.5]})
    verdicts = [r[header.index("verdict")] for r in rows]
    assert verdicts[:3] == ["npt"] * 3 and verdicts[3:] == ["ppt_only"] * 2


def test_sweep_empty_and_invalid():
    text = claims.sweep("pTr", {})
    assert text.strip() == "m,mu,closed_form,eigensolver,abs_diff,verdict"
    with pytest.raises(ValueError):
        claims.sweep_rows("nope", {"m": [3]})
    with pytest.raises(ValueError):
        claims.sweep_rows("pTr", {"m": [1], "mu": [0.2]})


def test_parse_values():
    assert cli._parse_values("2,3,4") == [2, 3, 4]
    assert cli._parse_values("0.1:0.5:0.1") == [0.1, 0.2, 0.3, 0.4, 0.5]
    assert cli._parse_values("") == []
    with pytest.raises(ValueError):
        cli._parse_values("1:2")
    with pytest.raises(ValueError):
        cli.parse_grid(["m"])


def test_cli_claim_exit_codes(capsys):
    assert cli.main(["claim", "run", "gauss-T-threshold"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] is True
    assert cli.main(["claim", "run", "breuer-hall-window"]) == 1
    capsys.readouterr()
    assert cli.main(["claim", "run", "no-such-id"]) == 2
    assert "unknown claim" in capsys.readouterr().err
    assert cli.main(["claim", "list", "--csv"]) == 0
    assert capsys.readouterr().out.startswith("anchor,description,id")


def test_cli_spa(capsys):
    assert cli.main(["spa", "tau:m=3,k=1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["eb_verdict"]["status"] == "separable_certified"
    assert cli.main(["spa", "breuer_hall:m=4,U=default", "--channel", "werner_channel:m=4,mu=0.1", "--csv"]) == 0
    assert capsys.readouterr().out.strip().endswith("npt")
    assert cli.main(["spa", "nosuch:m=3"]) == 2


def test_cli_gaussian_and_verdict(tmp_path, capsys):
    assert cli.main(["gaussian", "transposition", "--modes", "5", "--all-modes", "--csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 6 and all(line.endswith("2.0") for line in lines[1:])
    from spacert import io, states

    path = tmp_path / "w.json"
    io.write_matrix(path, states.werner(2, 0.4))
    assert cli.main(["verdict", str(path), "--dims", "2,2"]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "separable_certified"
    (tmp_path / "bad.json").write_text('{"rows": 2, "cols": 2, "data": [[1, 0]]}')
    assert cli.main(["verdict", str(tmp_path / "bad.json")]) == 2
    assert "'data'" in capsys.readouterr().err


def test_cli_sweep(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert cli.main(["sweep", "wmk", "--grid", "m=3,4", "--grid", "k=1,2", "--csv", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert printed == out.read_text()
    assert len(printed.strip().splitlines()) == 5
