"""Command-line interface: listing, verification runs, simulation, exit codes."""
import json

import numpy as np
import pytest

from g4motions.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_list_all_entries(capsys):
    code, out, _ = run_cli(["list"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert len(doc["entries"]) == 15


def test_list_single_entry_structure_constants(capsys):
    code, out, _ = run_cli(["list", "--group", "g4-viii-a"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["entries"]) == 1
    triples = {
        (c["gamma"], c["alpha"], c["beta"]): c["value"]
        for c in doc["entries"][0]["structure_constants"]
    }
    assert triples == {(3, 1, 2): 1.0, (1, 2, 3): 1.0, (2, 3, 1): 1.0}


def test_list_unknown_group(capsys):
    code, _, err = run_cli(["list", "--group", "nosuch"], capsys)
    assert code == 2
    assert "unknown group" in err


def test_verify_single_entry(capsys):
    code, out, _ = run_cli(
        ["verify", "--group", "g4-vi-1", "--points", "40", "--seed", "7"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    names = {r["check"] for r in doc["results"]}
    assert "abelian_zero_field" in names
    zero_field = [r for r in doc["results"] if r["check"] == "abelian_zero_field"]
    assert all(r["passed"] for r in zero_field)


def test_verify_invalid_param(capsys):
    code, _, err = run_cli(["verify", "--group", "g4-i-cne1", "--param", "c=1"], capsys)
    assert code == 2
    assert "c != 1" in err


def test_verify_unknown_param(capsys):
    code, _, err = run_cli(["verify", "--group", "g4-ii", "--param", "zz=1"], capsys)
    assert code == 2


def test_verify_json_deterministic(tmp_path, capsys):
    args = ["verify", "--group", "g4-v", "--seed", "42", "--points", "60"]
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(p1)]) == 0
    assert main(args + ["--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_verify_human_format(capsys):
    code, out, _ = run_cli(
        ["verify", "--group", "g4-iv", "--points", "30", "--format", "human"], capsys
    )
    assert code == 0
    assert "g4-iv" in out
    assert "source-table findings:" in out


def test_verify_csv_format(capsys):
    code, out, _ = run_cli(
        ["verify", "--group", "g4-ii", "--points", "30", "--format", "csv"], capsys
    )
    assert code == 0
    header = out.splitlines()[0]
    assert header == "check,group,n_points,max_residual,tolerance,passed,asserted"


def test_verify_seed_env_fallback(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("G4_SEED", "99")
    p1 = tmp_path / "env.json"
    assert main(["verify", "--group", "g4-ii", "--points", "25", "--out", str(p1)]) == 0
    doc = json.loads(p1.read_text())
    assert doc["config"]["seed"] == 99


def test_simulate_writes_csv_and_summary(tmp_path, capsys):
    out_csv = tmp_path / "run.csv"
    code, out, _ = run_cli(
        [
            "simulate",
            "--group",
            "g4-i-cne1",
            "--T",
            "0.2",
            "--h",
            "1e-3",
            "--out",
            str(out_csv),
        ],
        capsys,
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["group"] == "g4-i-cne1"
    assert summary["max_drift_H"] <= 1e-8
    assert out_csv.exists()
    header = out_csv.read_text().splitlines()[0]
    assert header.startswith("t,u1")


def test_simulate_flat_free_case_zero_drift(tmp_path, capsys):
    args = [
        "simulate",
        "--group",
        "g4-vi-1",
        "--T",
        "1.0",
        "--h",
        "1e-2",
        "--out",
        str(tmp_path / "flat.csv"),
    ]
    for key in ("k=0", "l=0", "eps01=0", "alpha1=0", "alpha2=0", "alpha3=0", "alpha4=0"):
        args += ["--param", key]
    code, out, _ = run_cli(args, capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["max_drift_H"] <= 1e-13
    assert max(summary["max_drift_Y"]) <= 1e-13
    assert not summary["domain_exit"]


def test_simulate_rejects_zero_step(capsys):
    code, _, err = run_cli(["simulate", "--group", "g4-ii", "--h", "0"], capsys)
    assert code == 2


def test_simulate_requires_single_group(capsys):
    code, _, err = run_cli(["simulate", "--group", "all"], capsys)
    assert code == 2


def test_verify_rejects_zero_points(capsys):
    code, _, err = run_cli(["verify", "--group", "g4-ii", "--points", "0"], capsys)
    assert code == 2


def test_report_summary_counts_match_results(capsys):
    code, out, _ = run_cli(["verify", "--group", "g4-iii", "--points", "25"], capsys)
    doc = json.loads(out)
    for group, counts in doc["summary"].items():
        rows = [r for r in doc["results"] if r["group"] == group]
        assert counts["passed"] == sum(r["passed"] and r["asserted"] for r in rows)
        assert counts["failed"] == sum((not r["passed"]) and r["asserted"] for r in rows)
        assert counts["flagged"] == sum(not r["asserted"] for r in rows)
        assert counts["passed"] + counts["failed"] + counts["flagged"] == len(rows)
