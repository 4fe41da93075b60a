import json
import os

import pytest
from click.testing import CliRunner

from quiverdef.cli import main
from quiverdef.corpus import InvalidParameters, UnknownCorpusEntry, corpus_get, corpus_list
from quiverdef.presentation import serialize_presentation
from quiverdef.report import run_report


def test_corpus_list_and_get():
    assert corpus_list() == ["D3A2", "D3B2", "D3D2", "D3L", "D3Q", "D3R"]
    entry = corpus_get("D3R", 1, 2, 2, 2)
    assert entry.name == "D3R^{1,2,2,2}"
    with pytest.raises(UnknownCorpusEntry):
        corpus_get("D5X", 1)
    with pytest.raises(InvalidParameters):
        corpus_get("D3A2", 1, 2)  # needs c >= d >= 2
    with pytest.raises(InvalidParameters):
        corpus_get("D3A2", 2, 3)  # c >= d violated
    with pytest.raises(InvalidParameters):
        corpus_get("D3R", 1, 2, 2)  # arity


def test_b_equals_one_presentation_switch():
    entry = corpus_get("D3R", 1, 1, 2, 2)
    names = [a.name for a in entry.presentation.arrows]
    assert "alpha" not in names and len(names) == 5
    alg = entry.algebra(2)
    assert alg.dim > 0


def test_non_uniserial_diagram_validation():
    entry = corpus_get("D3B2", 2, 2, 2)
    alg = entry.algebra(2)
    m = entry.build_module(alg, "0/(1+2)")
    assert m.dims == (1, 1, 1)
    m2 = entry.build_module(alg, "(1+2)/0")
    assert m2.dims == (1, 1, 1)


def test_run_report_passes_and_is_deterministic():
    entry = corpus_get("D3R", 1, 2, 2, 2)
    rep1 = run_report(entry, p=2, max_order=8, seed=0)
    rep2 = run_report(entry, p=2, max_order=8, seed=0)
    assert not rep1.any_fail and not rep1.any_error
    strip = lambda js: [
        {k: v for k, v in row.items() if k != "elapsed_ms"} for row in js["rows"]
    ]
    assert strip(rep1.to_json()) == strip(rep2.to_json())
    assert rep1.to_json()["schema"] == "quiverdef-report/1"


def test_report_tsv_and_json_carry_same_values():
    entry = corpus_get("D3R", 1, 2, 2, 2)
    rep = run_report(entry, p=2, max_order=8, seed=0)
    tsv = rep.to_tsv().splitlines()
    assert len(tsv) == 1 + len(rep.rows)
    js = rep.to_json()
    for line, row in zip(tsv[1:], js["rows"]):
        cells = line.split("\t")
        assert cells[0] == row["module"]
        assert cells[5] == row["ring"]
        assert cells[8] == row["status"]


def test_cli_corpus_report_exit_codes(tmp_path):
    runner = CliRunner()
    res = runner.invoke(main, ["corpus", "report", "D3R", "--params", "1,2,2,2"])
    assert res.exit_code == 0, res.output
    assert "PASS" in res.output
    res = runner.invoke(main, ["corpus", "report", "NOPE"])
    assert res.exit_code == 2
    res = runner.invoke(main, ["corpus", "report", "D3A2", "--params", "1,1"])
    assert res.exit_code == 2


def test_cli_figures(tmp_path):
    runner = CliRunner()
    figs = tmp_path / "figs"
    res = runner.invoke(
        main,
        ["corpus", "report", "D3R", "--params", "1,2,2,2", "--figures", str(figs)],
    )
    assert res.exit_code == 0, res.output
    assert (figs / "D3R-1-2-2-2.png").exists()


def test_cli_json_mode(tmp_path, d3r1222_entry):
    (tmp_path / "alg.toml").write_text(serialize_presentation(d3r1222_entry.presentation))
    (tmp_path / "s0.toml").write_text('[module]\nalgebra = "alg.toml"\ndims = [1, 0, 0]\n')
    runner = CliRunner()
    res = runner.invoke(main, ["--json", "versal", str(tmp_path / "s0.toml")])
    assert res.exit_code == 0, res.output
    payload = json.loads(res.output)
    assert payload["verdict"] == "truncated" and payload["order"] == 2
    res = runner.invoke(main, ["--json", "algebra", "check", str(tmp_path / "alg.toml")])
    assert json.loads(res.output)["dim"] == 15


def test_cli_bad_file_is_usage_error(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[algebra\nname=")
    runner = CliRunner()
    res = runner.invoke(main, ["algebra", "check", str(bad)])
    assert res.exit_code == 2
    res = runner.invoke(main, ["--json", "algebra", "check", str(bad)])
    assert res.exit_code == 2
    assert "error" in json.loads(res.output)


def test_cli_orbit_and_ext(tmp_path, d3r1222_entry):
    (tmp_path / "alg.toml").write_text(serialize_presentation(d3r1222_entry.presentation))
    (tmp_path / "u0.toml").write_text('[module]\nalgebra = "alg.toml"\nstring = "alpha"\n')
    runner = CliRunner()
    res = runner.invoke(main, ["orbit", str(tmp_path / "u0.toml"), "--functor", "tau", "--cap", "6"])
    assert res.exit_code == 0 and "period 3" in res.output
    res = runner.invoke(main, ["ext", str(tmp_path / "u0.toml"), str(tmp_path / "u0.toml")])
    assert res.exit_code == 0 and "dim Ext^1 = 0" in res.output
